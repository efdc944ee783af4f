#include "hyperrecon/hypergraph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace hyperrecon {

namespace {

constexpr Multiplicity kMaxMultiplicity = static_cast<Multiplicity>(std::numeric_limits<std::int64_t>::max());

double log_factorial(std::uint64_t n) { return std::lgamma(static_cast<double>(n) + 1.0); }

void check_key(std::span<const NodeId> key, std::size_t num_nodes) {
  if (key.size() < 2) throw std::invalid_argument("hyperedge needs at least two nodes");
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (key[i] >= num_nodes) throw std::invalid_argument("hyperedge node id out of range");
    if (i > 0 && key[i - 1] >= key[i]) throw std::invalid_argument("hyperedge key is not canonical");
  }
}

}  // namespace

void Hypergraph::bump_size(std::size_t k) {
  if (size_counts_.size() <= k) {
    size_counts_.resize(k + 1, 0);
    log_z_.resize(k + 1, 0.0);
  }
}

void Hypergraph::trim_sizes() {
  while (!size_counts_.empty() && size_counts_.back() == 0) {
    size_counts_.pop_back();
    log_z_.pop_back();
  }
}

void Hypergraph::add(std::span<const NodeId> key, Multiplicity count) {
  check_key(key, num_nodes_);
  if (count == 0) return;
  const std::size_t k = key.size();
  bump_size(k);
  auto [it, inserted] = edges_.try_emplace(NodeSet(key.begin(), key.end()), 0);
  if (count > kMaxMultiplicity - it->second) throw std::overflow_error("hyperedge multiplicity overflow");
  log_z_[k] += log_factorial(it->second + count) - log_factorial(it->second);
  it->second += count;
  size_counts_[k] += count;
  total_ += count;
}

void Hypergraph::remove_one(std::span<const NodeId> key) {
  auto it = edges_.find(NodeSet(key.begin(), key.end()));
  if (it == edges_.end()) throw std::logic_error("cannot remove an absent hyperedge");
  const std::size_t k = key.size();
  log_z_[k] -= std::log(static_cast<double>(it->second));
  --size_counts_[k];
  --total_;
  if (--it->second == 0) edges_.erase(it);
  if (size_counts_[k] == 0) log_z_[k] = 0.0;
  trim_sizes();
}

Multiplicity Hypergraph::multiplicity(std::span<const NodeId> key) const {
  auto it = edges_.find(NodeSet(key.begin(), key.end()));
  return it == edges_.end() ? 0 : it->second;
}

std::map<Multiplicity, std::size_t> Hypergraph::multiplicity_histogram(std::size_t k) const {
  std::map<Multiplicity, std::size_t> eta;
  for (const auto& [key, a] : edges_)
    if (key.size() == k) ++eta[a];
  return eta;
}

ModelConfig make_config(std::size_t num_nodes, std::size_t num_edges, std::size_t max_size) {
  if (num_edges == 0) throw DegenerateConfig("graph has no edges; the prior density mu = E/(L-1) vanishes");
  if (max_size < 2 || max_size > num_nodes) throw std::invalid_argument("need 2 <= L <= N");
  ModelConfig cfg;
  cfg.num_nodes = num_nodes;
  cfg.num_edges = num_edges;
  cfg.max_size = max_size;
  cfg.mu = static_cast<double>(num_edges) / static_cast<double>(max_size - 1);
  cfg.log1p_inv_mu = std::log1p(1.0 / cfg.mu);
  cfg.log_binom.resize(max_size + 1);
  const double n = static_cast<double>(num_nodes);
  for (std::size_t k = 0; k <= max_size; ++k) {
    const double kk = static_cast<double>(k);
    cfg.log_binom[k] = std::lgamma(n + 1.0) - std::lgamma(kk + 1.0) - std::lgamma(n - kk + 1.0);
  }
  return cfg;
}

ModelConfig make_config(const Graph& g, const CliqueLimits& limits) {
  if (g.num_edges() == 0) throw DegenerateConfig("graph has no edges; the prior density mu = E/(L-1) vanishes");
  std::size_t largest = 2;
  for (const auto& c : maximal_cliques(g, limits)) largest = std::max(largest, c.size());
  return make_config(g.num_nodes(), g.num_edges(), largest);
}

double log_prior(const Hypergraph& h, const ModelConfig& cfg) {
  const std::size_t L = cfg.max_size;
  std::vector<std::uint64_t> counts(L + 1, 0);
  std::vector<double> log_z(L + 1, 0.0);
  for (const auto& [key, a] : h.edges()) {
    const std::size_t k = key.size();
    if (k > L)
      throw std::domain_error("hyperedge of size " + std::to_string(k) + " exceeds L = " + std::to_string(L));
    counts[k] += a;
    log_z[k] += log_factorial(a);
  }
  const double log_mu = std::log(cfg.mu);
  double total = 0.0;
  for (std::size_t k = 2; k <= L; ++k) {
    const double ek = static_cast<double>(counts[k]);
    total += log_factorial(counts[k]) - log_z[k] - log_mu - (counts[k] ? ek * cfg.log_binom[k] : 0.0) -
             (ek + 1.0) * cfg.log1p_inv_mu;
  }
  return total;
}

double log_prior_delta(std::uint64_t size_count, Multiplicity multiplicity, std::size_t k, int delta,
                       const ModelConfig& cfg) {
  if (k < 2 || k > cfg.max_size) throw std::domain_error("hyperedge size outside [2, L]");
  const double step = -cfg.log_binom[k] - cfg.log1p_inv_mu;
  if (delta == 1) {
    return std::log(static_cast<double>(size_count + 1)) - std::log(static_cast<double>(multiplicity + 1)) + step;
  }
  if (delta == -1) {
    if (multiplicity == 0) throw std::logic_error("cannot remove an absent hyperedge");
    return -(std::log(static_cast<double>(size_count)) - std::log(static_cast<double>(multiplicity)) + step);
  }
  throw std::logic_error("delta must be +1 or -1");
}

double log_prior_delta(const Hypergraph& h, std::span<const NodeId> key, int delta, const ModelConfig& cfg) {
  return log_prior_delta(h.size_count(key.size()), h.multiplicity(key), key.size(), delta, cfg);
}

double description_length(const Hypergraph& h, const ModelConfig& cfg) {
  return -log_prior(h, cfg) / std::numbers::ln2;
}

Graph project(const Hypergraph& h, const NodeLabels& labels) {
  std::vector<Edge> edges;
  for (const auto& [key, a] : h.edges())
    for (std::size_t i = 0; i < key.size(); ++i)
      for (std::size_t j = i + 1; j < key.size(); ++j) edges.push_back({key[i], key[j]});
  NodeLabels out = labels;
  for (std::size_t i = out.size(); i < h.num_nodes(); ++i) out.intern(std::to_string(i));
  return Graph(std::move(out), std::move(edges));
}

Graph project(const Hypergraph& h) { return project(h, NodeLabels::numbered(h.num_nodes())); }

bool is_projection_of(const Graph& g, const Hypergraph& h) {
  std::vector<bool> covered(g.num_edges(), false);
  std::size_t remaining = g.num_edges();
  for (const auto& [key, a] : h.edges()) {
    for (std::size_t i = 0; i < key.size(); ++i) {
      for (std::size_t j = i + 1; j < key.size(); ++j) {
        auto e = g.edge_id(key[i], key[j]);
        if (!e) return false;
        if (!covered[*e]) {
          covered[*e] = true;
          --remaining;
        }
      }
    }
  }
  return remaining == 0;
}

Hypergraph maximal_clique_hypergraph(const Graph& g, const CliqueLimits& limits) {
  Hypergraph h(g.num_nodes());
  for (const auto& c : maximal_cliques(g, limits)) h.add(c);
  return h;
}

Hypergraph parse_hypergraph(std::string_view text, NodeLabels& labels) {
  std::vector<std::pair<NodeSet, Multiplicity>> lines;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream tokens(line);
    std::string tok;
    Multiplicity m = 1;
    NodeSet key;
    bool first = true;
    while (tokens >> tok) {
      if (first && tok.front() == '#') break;
      if (first && tok.back() == ':') {
        const auto digits = std::string_view(tok).substr(0, tok.size() - 1);
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), m);
        if (ec != std::errc() || ptr != digits.data() + digits.size() || m == 0 || m > kMaxMultiplicity)
          throw ParseError(line_no, "invalid multiplicity prefix '" + tok + "'");
      } else {
        key.push_back(labels.intern(tok));
      }
      first = false;
    }
    if (first) continue;  // blank or comment
    std::sort(key.begin(), key.end());
    if (std::adjacent_find(key.begin(), key.end()) != key.end())
      throw ParseError(line_no, "repeated node in hyperedge");
    if (key.size() < 2) throw ParseError(line_no, "hyperedge needs at least two nodes");
    lines.emplace_back(std::move(key), m);
  }
  Hypergraph h(labels.size());
  for (const auto& [key, m] : lines) h.add(key, m);
  return h;
}

Hypergraph read_hypergraph(const std::filesystem::path& path, NodeLabels& labels) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_hypergraph(buf.str(), labels);
}

std::string format_hypergraph(const Hypergraph& h, const NodeLabels& labels) {
  std::vector<std::string> rows;
  rows.reserve(h.num_distinct());
  for (const auto& [key, a] : h.edges()) {
    std::vector<std::string_view> names;
    for (NodeId v : key) names.push_back(labels.name(v));
    std::sort(names.begin(), names.end());
    std::string row = a > 1 ? std::to_string(a) + ": " : std::string();
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (i) row += ' ';
      row += names[i];
    }
    rows.push_back(std::move(row));
  }
  // Sort on the label sequence, ignoring the multiplicity prefix.
  auto body = [](const std::string& r) {
    auto colon = r.find(": ");
    return colon == std::string::npos ? std::string_view(r) : std::string_view(r).substr(colon + 2);
  };
  std::sort(rows.begin(), rows.end(), [&](const auto& a, const auto& b) { return body(a) < body(b); });
  std::string out;
  for (const auto& r : rows) {
    out += r;
    out += '\n';
  }
  return out;
}

Hypergraph relabel(const Hypergraph& h, std::span<const NodeId> old_to_new, std::size_t num_nodes) {
  Hypergraph out(num_nodes);
  for (const auto& [key, a] : h.edges()) {
    NodeSet k;
    k.reserve(key.size());
    for (NodeId v : key) k.push_back(old_to_new[v]);
    std::sort(k.begin(), k.end());
    out.add(k, a);
  }
  return out;
}

}  // namespace hyperrecon
