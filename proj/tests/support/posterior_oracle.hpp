#pragma once

// Exact posterior marginals by enumerating which cliques carry a hyperedge.
//
// For a fixed presence pattern the prior factorizes over sizes; summing over
// multiplicities A >= 1 of the n present size-k keys gives
//   f_k(n) = sum_E E! c^E [x^E] (sum_{a=1}^{cap} x^a / a!)^n,
//   c = 1 / (C(N,k) (1 + 1/mu)),
// and without a cap f_k(n) = n! c^n / prod_{j=1..n} (1 - j c), from the
// generating function of Stirling numbers of the second kind. The pattern
// weight is prod_k f_k(n_k); size-independent prior factors cancel.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "hyperrecon/graph.hpp"
#include "hyperrecon/hypergraph.hpp"

namespace oracle {

using hyperrecon::Graph;
using hyperrecon::ModelConfig;
using hyperrecon::NodeId;
using hyperrecon::NodeSet;

struct Posterior {
  std::map<NodeSet, double> marginals;  // every clique of size >= 2
  std::size_t patterns = 0;             // covering presence patterns
};

inline double choose(unsigned n, unsigned k) {
  double r = 1.0;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// f_k(n) for n = 0..max_n.
inline std::vector<double> pattern_factor(double c, unsigned max_n, unsigned cap) {
  std::vector<double> f(max_n + 1, 0.0);
  if (cap == 0) {
    for (unsigned n = 0; n <= max_n; ++n) {
      double v = 1.0;
      for (unsigned j = 1; j <= n; ++j) {
        if (j * c >= 1.0) throw std::domain_error("series diverges");
        v *= j * c / (1.0 - j * c);
      }
      f[n] = v;
    }
    return f;
  }
  // base[a] = 1/a!, a = 1..cap; poly = base^n.
  std::vector<double> base(cap + 1, 0.0);
  double fact = 1.0;
  for (unsigned a = 1; a <= cap; ++a) {
    fact *= a;
    base[a] = 1.0 / fact;
  }
  std::vector<double> poly{1.0};
  for (unsigned n = 0; n <= max_n; ++n) {
    double total = 0.0;
    double e_fact = 1.0;
    double c_pow = 1.0;
    for (std::size_t e = 0; e < poly.size(); ++e) {
      if (e > 0) {
        e_fact *= static_cast<double>(e);
        c_pow *= c;
      }
      total += e_fact * c_pow * poly[e];
    }
    f[n] = total;
    std::vector<double> next(poly.size() + cap, 0.0);
    for (std::size_t i = 0; i < poly.size(); ++i)
      for (unsigned a = 1; a <= cap; ++a) next[i + a] += poly[i] * base[a];
    poly = std::move(next);
  }
  return f;
}

/// All cliques of g with at least two nodes, node sets in sorted order.
inline std::vector<NodeSet> all_cliques(const Graph& g) {
  const std::size_t n = g.num_nodes();
  if (n > 16) throw std::invalid_argument("oracle is for tiny graphs");
  std::vector<NodeSet> out;
  for (std::uint32_t s = 1; s < (1u << n); ++s) {
    NodeSet nodes;
    for (NodeId v = 0; v < n; ++v)
      if (s >> v & 1u) nodes.push_back(v);
    if (nodes.size() < 2) continue;
    bool clique = true;
    for (std::size_t i = 0; i < nodes.size() && clique; ++i)
      for (std::size_t j = i + 1; j < nodes.size() && clique; ++j) clique = g.has_edge(nodes[i], nodes[j]);
    if (clique) out.push_back(nodes);
  }
  return out;
}

class Enumerator {
 public:
  Enumerator(const Graph& g, const ModelConfig& cfg, unsigned cap) : cliques_(all_cliques(g)) {
    if (g.num_edges() > 63) throw std::invalid_argument("too many edges");
    full_ = g.num_edges() == 64 ? ~0ULL : (1ULL << g.num_edges()) - 1;
    for (const auto& c : cliques_) {
      std::uint64_t m = 0;
      for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = i + 1; j < c.size(); ++j) m |= 1ULL << *g.edge_id(c[i], c[j]);
      masks_.push_back(m);
    }
    suffix_.assign(cliques_.size() + 1, 0);
    for (std::size_t i = cliques_.size(); i-- > 0;) suffix_[i] = suffix_[i + 1] | masks_[i];
    const unsigned L = static_cast<unsigned>(cfg.max_size);
    factors_.resize(L + 1);
    for (unsigned k = 2; k <= L; ++k) {
      const double binom = choose(static_cast<unsigned>(cfg.num_nodes), k);
      const double c = 1.0 / (binom * (1.0 + 1.0 / cfg.mu));
      factors_[k] = pattern_factor(c, static_cast<unsigned>(binom), cap);
    }
    counts_.assign(L + 1, 0);
    acc_.assign(cliques_.size(), 0.0);
  }

  Posterior run() {
    const double z = dfs(0, 0);
    Posterior p;
    p.patterns = patterns_;
    for (std::size_t i = 0; i < cliques_.size(); ++i) p.marginals[cliques_[i]] = acc_[i] / z;
    return p;
  }

 private:
  double dfs(std::size_t i, std::uint64_t mask) {
    if (i == cliques_.size()) {
      if (mask != full_) return 0.0;
      ++patterns_;
      double w = 1.0;
      for (std::size_t k = 2; k < counts_.size(); ++k) w *= factors_[k][counts_[k]];
      return w;
    }
    if ((mask | suffix_[i]) != full_) return 0.0;
    const double without = dfs(i + 1, mask);
    const std::size_t k = cliques_[i].size();
    ++counts_[k];
    const double with = dfs(i + 1, mask | masks_[i]);
    --counts_[k];
    acc_[i] += with;
    return with + without;
  }

  std::vector<NodeSet> cliques_;
  std::vector<std::uint64_t> masks_;
  std::vector<std::uint64_t> suffix_;
  std::uint64_t full_ = 0;
  std::vector<std::vector<double>> factors_;
  std::vector<unsigned> counts_;
  std::vector<double> acc_;
  std::size_t patterns_ = 0;
};

/// Posterior presence probabilities; cap = 0 means unbounded multiplicities.
inline Posterior enumerate_posterior(const Graph& g, const ModelConfig& cfg, unsigned cap) {
  return Enumerator(g, cfg, cap).run();
}

/// Every non-isomorphic graph on exactly n nodes with at least one edge.
inline std::vector<Graph> nonisomorphic_graphs(std::size_t n) {
  std::vector<hyperrecon::Edge> pairs;
  for (NodeId v = 1; v < n; ++v)
    for (NodeId u = 0; u < v; ++u) pairs.push_back({u, v});
  std::vector<NodeId> perm(n);
  std::vector<Graph> out;
  for (std::uint64_t s = 1; s < (1ULL << pairs.size()); ++s) {
    // Canonical form: smallest edge bitmask over all relabellings.
    for (NodeId i = 0; i < n; ++i) perm[i] = i;
    std::uint64_t best = ~0ULL;
    do {
      std::uint64_t m = 0;
      for (std::size_t b = 0; b < pairs.size(); ++b) {
        if (!(s >> b & 1u)) continue;
        NodeId a = perm[pairs[b].u], c = perm[pairs[b].v];
        if (a > c) std::swap(a, c);
        m |= 1ULL << (c * (c - 1) / 2 + a);
      }
      best = std::min(best, m);
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (best != s) continue;
    std::vector<hyperrecon::Edge> edges;
    for (std::size_t b = 0; b < pairs.size(); ++b)
      if (s >> b & 1u) edges.push_back(pairs[b]);
    out.emplace_back(n, std::move(edges));
  }
  return out;
}

}  // namespace oracle
