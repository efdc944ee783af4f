#include "hyperrecon/graph.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "hyperrecon/random.hpp"

namespace hyperrecon {

NodeLabels NodeLabels::numbered(std::size_t n) {
  NodeLabels labels;
  for (std::size_t i = 0; i < n; ++i) labels.intern(std::to_string(i));
  return labels;
}

NodeId NodeLabels::intern(std::string_view label) {
  if (auto it = index_.find(label); it != index_.end()) return it->second;
  const auto id = static_cast<NodeId>(names_.size());
  names_.emplace_back(label);
  index_.emplace(names_.back(), id);
  return id;
}

bool NodeLabels::contains(std::string_view label) const { return index_.find(label) != index_.end(); }

NodeId NodeLabels::at(std::string_view label) const {
  auto it = index_.find(label);
  if (it == index_.end()) throw std::out_of_range("unknown node label '" + std::string(label) + "'");
  return it->second;
}

Graph::Graph(NodeLabels labels, std::vector<Edge> edges) : labels_(std::move(labels)) {
  build(std::move(edges));
}

Graph::Graph(std::size_t num_nodes, std::vector<Edge> edges) : labels_(NodeLabels::numbered(num_nodes)) {
  build(std::move(edges));
}

void Graph::build(std::vector<Edge> edges) {
  const std::size_t n = labels_.size();
  for (auto& e : edges) {
    if (e.u == e.v) throw std::invalid_argument("self-loop on node " + std::to_string(e.u));
    if (e.u >= n || e.v >= n) throw std::invalid_argument("edge endpoint out of range");
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);

  adjacency_.assign(n, {});
  upper_.assign(n, {});
  upper_offset_.assign(n + 1, 0);
  for (const auto& e : edges_) {
    adjacency_[e.u].push_back(e.v);
    adjacency_[e.v].push_back(e.u);
    upper_[e.u].push_back(e.v);
  }
  for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
  for (std::size_t v = 0; v < n; ++v) upper_offset_[v + 1] = upper_offset_[v] + upper_[v].size();
}

std::optional<std::size_t> Graph::edge_id(NodeId a, NodeId b) const {
  if (a > b) std::swap(a, b);
  if (a == b || b >= upper_.size()) return std::nullopt;
  const auto& up = upper_[a];
  auto it = std::lower_bound(up.begin(), up.end(), b);
  if (it == up.end() || *it != b) return std::nullopt;
  return upper_offset_[a] + static_cast<std::size_t>(it - up.begin());
}

std::vector<NodeId> Graph::isolated_nodes() const {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < adjacency_.size(); ++v)
    if (adjacency_[v].empty()) out.push_back(v);
  return out;
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

// Returns the remainder after a `nodes:` directive, if this comment is one.
std::optional<std::string_view> nodes_directive(std::string_view comment) {
  std::size_t i = 0;
  while (i < comment.size() && std::isspace(static_cast<unsigned char>(comment[i]))) ++i;
  constexpr std::string_view kKey = "nodes:";
  if (comment.substr(i, kKey.size()) != kKey) return std::nullopt;
  return comment.substr(i + kKey.size());
}

}  // namespace

Graph parse_edge_list(std::string_view text) {
  NodeLabels labels;
  std::vector<Edge> edges;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    auto first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos) {
      if (end == text.size()) break;
      continue;
    }
    if (line[first] == '#') {
      if (auto rest = nodes_directive(line.substr(first + 1))) {
        for (auto label : split_ws(*rest)) labels.intern(label);
      }
    } else {
      auto tokens = split_ws(line);
      if (tokens.size() != 2)
        throw ParseError(line_no, "expected two node labels, found " + std::to_string(tokens.size()));
      if (tokens[0] == tokens[1]) throw ParseError(line_no, "self-loop on '" + std::string(tokens[0]) + "'");
      const NodeId a = labels.intern(tokens[0]);
      const NodeId b = labels.intern(tokens[1]);
      edges.push_back({std::min(a, b), std::max(a, b)});
    }
    if (end == text.size()) break;
  }
  return Graph(std::move(labels), std::move(edges));
}

Graph read_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_edge_list(buf.str());
}

std::string format_edge_list(const Graph& g) {
  std::string out;
  const auto& labels = g.labels();
  if (!g.isolated_nodes().empty()) {
    out += "# nodes:";
    for (const auto& name : labels.names()) {
      out += ' ';
      out += name;
    }
    out += '\n';
  }
  for (const auto& e : g.edges()) {
    out += labels.name(e.u);
    out += ' ';
    out += labels.name(e.v);
    out += '\n';
  }
  return out;
}

Edge unrank_pair(std::uint64_t rank) {
  // Colex order: rank = v(v-1)/2 + u.
  auto v = static_cast<std::uint64_t>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(rank))) / 2.0);
  while (v * (v - 1) / 2 > rank) --v;
  while ((v + 1) * v / 2 <= rank) ++v;
  const std::uint64_t u = rank - v * (v - 1) / 2;
  return {static_cast<NodeId>(u), static_cast<NodeId>(v)};
}

std::uint64_t rank_pair(Edge e) {
  const std::uint64_t v = e.v;
  return v * (v - 1) / 2 + e.u;
}

Graph uniform_graph_same_density(const Graph& g, std::uint64_t seed) {
  const std::uint64_t total = pair_count(g.num_nodes());
  const std::uint64_t m = g.num_edges();
  if (m > total) throw std::invalid_argument("more edges than node pairs");
  Rng rng(seed);
  // Floyd's algorithm: a uniform m-subset of [0, total).
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(m * 2);
  std::vector<std::uint64_t> order;
  order.reserve(m);
  for (std::uint64_t j = total - m; j < total; ++j) {
    const std::uint64_t t = rng.below(j + 1);
    const std::uint64_t pick = chosen.insert(t).second ? t : j;
    if (pick == j) chosen.insert(j);
    order.push_back(pick);
  }
  std::vector<Edge> edges;
  edges.reserve(m);
  for (auto r : order) edges.push_back(unrank_pair(r));
  return Graph(g.labels(), std::move(edges));
}

std::vector<Edge> random_nonedges(const Graph& g, std::size_t count, std::uint64_t seed) {
  const std::uint64_t total = pair_count(g.num_nodes());
  const std::uint64_t slack = total - g.num_edges();
  if (count > slack)
    throw std::invalid_argument("requested " + std::to_string(count) + " non-edges but only " +
                                std::to_string(slack) + " are available");
  Rng rng(seed);
  std::vector<Edge> out;
  out.reserve(count);
  constexpr std::uint64_t kEnumerateLimit = 1ULL << 22;
  if (total <= kEnumerateLimit || 2 * count > slack) {
    std::vector<Edge> pool;
    pool.reserve(slack);
    for (NodeId v = 1; v < g.num_nodes(); ++v)
      for (NodeId u = 0; u < v; ++u)
        if (!g.has_edge(u, v)) pool.push_back({u, v});
    // Partial Fisher-Yates.
    for (std::size_t i = 0; i < count; ++i) {
      const auto j = i + rng.below(pool.size() - i);
      std::swap(pool[i], pool[j]);
      out.push_back(pool[i]);
    }
    return out;
  }
  std::unordered_set<std::uint64_t> taken;
  while (out.size() < count) {
    const Edge e = unrank_pair(rng.below(total));
    if (g.has_edge(e.u, e.v) || !taken.insert(rank_pair(e)).second) continue;
    out.push_back(e);
  }
  return out;
}

Graph add_random_nonedges(const Graph& g, std::size_t count, std::uint64_t seed) {
  const auto extra = random_nonedges(g, count, seed);
  return with_edges(g, extra);
}

Graph with_edges(const Graph& g, std::span<const Edge> extra) {
  std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  edges.insert(edges.end(), extra.begin(), extra.end());
  return Graph(g.labels(), std::move(edges));
}

}  // namespace hyperrecon
