#include "hyperrecon/clique.hpp"

#include <algorithm>
#include <array>
#include <iterator>
#include <limits>
#include <stdexcept>
#include <string>

namespace hyperrecon {

namespace {

// Smallest-last (degeneracy) order via bucket queue.
std::vector<NodeId> degeneracy_order(const Graph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<std::size_t> degree(n);
  std::size_t max_degree = 0;
  for (NodeId v = 0; v < n; ++v) {
    degree[v] = g.degree(v);
    max_degree = std::max(max_degree, degree[v]);
  }
  std::vector<std::vector<NodeId>> buckets(max_degree + 1);
  for (NodeId v = 0; v < n; ++v) buckets[degree[v]].push_back(v);
  std::vector<bool> removed(n, false);
  std::vector<NodeId> order;
  order.reserve(n);
  std::size_t d = 0;
  while (order.size() < n) {
    d = std::min(d, max_degree);
    while (buckets[d].empty()) ++d;
    const NodeId v = buckets[d].back();
    buckets[d].pop_back();
    if (removed[v] || degree[v] != d) continue;  // stale entry
    removed[v] = true;
    order.push_back(v);
    for (NodeId w : g.neighbors(v)) {
      if (removed[w]) continue;
      --degree[w];
      buckets[degree[w]].push_back(w);
    }
    if (d > 0) --d;
  }
  return order;
}

class BronKerbosch {
 public:
  BronKerbosch(const Graph& g, const CliqueLimits& limits, std::vector<NodeSet>& out)
      : g_(g), limits_(limits), out_(out) {}

  void expand(std::vector<NodeId>& clique, std::vector<NodeId> cand, std::vector<NodeId> excl) {
    if (cand.empty()) {
      if (excl.empty() && clique.size() >= 2) report(clique);
      return;
    }
    // Tomita pivot: maximize |cand ∩ N(u)| over cand ∪ excl.
    NodeId pivot = cand.front();
    std::size_t best = 0;
    auto consider = [&](NodeId u) {
      const auto nb = g_.neighbors(u);
      std::size_t count = 0;
      auto a = cand.begin();
      auto b = nb.begin();
      while (a != cand.end() && b != nb.end()) {
        if (*a < *b) ++a;
        else if (*b < *a) ++b;
        else { ++count; ++a; ++b; }
      }
      if (count > best) {
        best = count;
        pivot = u;
      }
    };
    for (NodeId u : cand) consider(u);
    for (NodeId u : excl) consider(u);

    std::vector<NodeId> branch;
    {
      const auto nb = g_.neighbors(pivot);
      std::set_difference(cand.begin(), cand.end(), nb.begin(), nb.end(), std::back_inserter(branch));
    }
    for (NodeId v : branch) {
      const auto nb = g_.neighbors(v);
      std::vector<NodeId> next_cand, next_excl;
      std::set_intersection(cand.begin(), cand.end(), nb.begin(), nb.end(), std::back_inserter(next_cand));
      std::set_intersection(excl.begin(), excl.end(), nb.begin(), nb.end(), std::back_inserter(next_excl));
      clique.push_back(v);
      if (clique.size() > limits_.max_clique_size)
        throw ResourceError("clique size exceeds limit of " + std::to_string(limits_.max_clique_size));
      expand(clique, std::move(next_cand), std::move(next_excl));
      clique.pop_back();
      cand.erase(std::lower_bound(cand.begin(), cand.end(), v));
      excl.insert(std::lower_bound(excl.begin(), excl.end(), v), v);
    }
  }

 private:
  void report(const std::vector<NodeId>& clique) {
    if (out_.size() >= limits_.max_cliques)
      throw ResourceError("maximal clique count exceeds limit of " + std::to_string(limits_.max_cliques));
    NodeSet c(clique.begin(), clique.end());
    std::sort(c.begin(), c.end());
    out_.push_back(std::move(c));
  }

  const Graph& g_;
  const CliqueLimits& limits_;
  std::vector<NodeSet>& out_;
};

constexpr unsigned kMaxBinom = 64;

constexpr auto make_binomials() {
  std::array<std::array<std::uint64_t, kMaxBinom + 1>, kMaxBinom + 1> t{};
  for (unsigned n = 0; n <= kMaxBinom; ++n) {
    t[n][0] = 1;
    for (unsigned k = 1; k <= n; ++k) t[n][k] = t[n - 1][k - 1] + (k <= n - 1 ? t[n - 1][k] : 0);
  }
  return t;
}

constexpr auto kBinomials = make_binomials();

}  // namespace

std::vector<NodeSet> maximal_cliques(const Graph& g, const CliqueLimits& limits) {
  std::vector<NodeSet> out;
  const auto order = degeneracy_order(g);
  std::vector<std::size_t> position(g.num_nodes());
  for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = i;

  BronKerbosch bk(g, limits, out);
  std::vector<NodeId> clique;
  for (NodeId v : order) {
    if (g.degree(v) == 0) continue;
    std::vector<NodeId> cand, excl;
    for (NodeId w : g.neighbors(v)) (position[w] > position[v] ? cand : excl).push_back(w);
    clique.assign(1, v);
    bk.expand(clique, std::move(cand), std::move(excl));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t binomial(unsigned n, unsigned k) {
  if (n > kMaxBinom) throw std::out_of_range("binomial: n > 64");
  return k > n ? 0 : kBinomials[n][k];
}

void subfactor_key_into(std::span<const NodeId> factor, unsigned size, std::uint64_t index, NodeSet& out) {
  const auto k = static_cast<unsigned>(factor.size());
  if (size < 2 || size > k) throw std::logic_error("subfactor size out of range");
  if (index >= binomial(k, size)) throw std::logic_error("subfactor index out of range");
  out.clear();
  unsigned remaining = size;
  for (unsigned i = 0; i < k && remaining > 0; ++i) {
    const std::uint64_t with_i = binomial(k - i - 1, remaining - 1);
    if (index < with_i) {
      out.push_back(factor[i]);
      --remaining;
    } else {
      index -= with_i;
    }
  }
}

NodeSet subfactor_key(std::span<const NodeId> factor, unsigned size, std::uint64_t index) {
  NodeSet out;
  subfactor_key_into(factor, size, index, out);
  return out;
}

FactorGraph::FactorGraph(const Graph& g, std::vector<NodeSet> maximal)
    : graph_(&g), maximal_(std::move(maximal)), edge_factors_(g.num_edges()), coverage_(g.num_edges(), 0),
      uncovered_(g.num_edges()) {
  for (std::size_t f = 0; f < maximal_.size(); ++f) {
    for_each_edge_of(maximal_[f], [&](std::size_t e) { edge_factors_[e].push_back(static_cast<std::uint32_t>(f)); });
  }
}

FactorGraph::FactorGraph(const Graph& g, const CliqueLimits& limits) : FactorGraph(g, maximal_cliques(g, limits)) {}

template <typename F>
void FactorGraph::for_each_edge_of(std::span<const NodeId> key, F&& fn) const {
  for (std::size_t i = 0; i < key.size(); ++i) {
    for (std::size_t j = i + 1; j < key.size(); ++j) {
      auto e = graph_->edge_id(key[i], key[j]);
      if (!e) throw std::logic_error("factor key is not a clique of the graph");
      fn(*e);
    }
  }
}

Multiplicity FactorGraph::multiplicity(std::span<const NodeId> key) const {
  auto it = active_.find(key);
  return it == active_.end() ? 0 : it->second;
}

void FactorGraph::apply_delta(std::span<const NodeId> key, int delta) {
  if (key.size() < 2) throw std::logic_error("factor key needs at least two nodes");
  if (!std::is_sorted(key.begin(), key.end()) || std::adjacent_find(key.begin(), key.end()) != key.end())
    throw std::logic_error("factor key is not canonical");
  if (delta == 1) {
    // Validate before mutating.
    for_each_edge_of(key, [](std::size_t) {});
    auto it = active_.find(key);
    if (it == active_.end()) {
      active_.emplace(NodeSet(key.begin(), key.end()), 1);
    } else {
      if (it->second == std::numeric_limits<std::int64_t>::max())
        throw std::overflow_error("factor multiplicity overflow");
      ++it->second;
    }
    for_each_edge_of(key, [&](std::size_t e) {
      if (coverage_[e]++ == 0) --uncovered_;
    });
  } else if (delta == -1) {
    auto it = active_.find(key);
    if (it == active_.end()) throw std::logic_error("cannot decrement an inactive factor");
    // Coverage first: `key` may view the map's own storage.
    for_each_edge_of(key, [&](std::size_t e) {
      if (--coverage_[e] == 0) ++uncovered_;
    });
    if (--it->second == 0) active_.erase(it);
  } else {
    throw std::logic_error("delta must be +1 or -1");
  }
}

bool FactorGraph::removal_breaks_coverage(std::span<const NodeId> key) const {
  bool breaks = false;
  for_each_edge_of(key, [&](std::size_t e) { breaks = breaks || coverage_[e] <= 1; });
  return breaks;
}

std::vector<std::uint64_t> FactorGraph::recount_coverage() const {
  std::vector<std::uint64_t> counts(graph_->num_edges(), 0);
  for (const auto& [key, a] : active_) for_each_edge_of(key, [&](std::size_t e) { counts[e] += a; });
  return counts;
}

}  // namespace hyperrecon
