#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hyperrecon/types.hpp"

namespace hyperrecon {

/// Undirected edge with u < v.
struct Edge {
  NodeId u;
  NodeId v;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected simple graph, immutable after construction.
///
/// Edges are stored sorted by (u, v); an edge's id is its position in that
/// order. Adjacency lists are sorted so that edge lookups are binary searches.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph on `labels.size()` nodes. Duplicate edges are merged and
  /// endpoints are normalized; throws std::invalid_argument on self-loops or
  /// out-of-range endpoints.
  Graph(NodeLabels labels, std::vector<Edge> edges);

  /// Graph on nodes labelled "0".."n-1".
  Graph(std::size_t num_nodes, std::vector<Edge> edges);

  std::size_t num_nodes() const noexcept { return labels_.size(); }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::span<const NodeId> neighbors(NodeId v) const {
    return {adjacency_[v].data(), adjacency_[v].size()};
  }
  std::size_t degree(NodeId v) const { return adjacency_[v].size(); }
  const NodeLabels& labels() const noexcept { return labels_; }

  bool has_edge(NodeId a, NodeId b) const { return edge_id(a, b).has_value(); }

  /// Id of edge {a, b}, if present.
  std::optional<std::size_t> edge_id(NodeId a, NodeId b) const;

  /// Nodes with no incident edge.
  std::vector<NodeId> isolated_nodes() const;

 private:
  void build(std::vector<Edge> edges);

  NodeLabels labels_;
  std::vector<Edge> edges_;
  std::vector<std::vector<NodeId>> adjacency_;
  // Edge ids of (u, v>u) start at upper_offset_[u]; upper_[u] lists those v.
  std::vector<std::size_t> upper_offset_;
  std::vector<std::vector<NodeId>> upper_;
};

/// Parses the whitespace-separated edge-list format. Lines starting with `#`
/// are comments, except `# nodes: a b ...` (or `#nodes:`), which declares
/// nodes so that isolated ones can be represented. Ids follow first appearance.
Graph parse_edge_list(std::string_view text);

Graph read_edge_list(const std::filesystem::path& path);

/// Inverse of parse_edge_list. Emits a `# nodes:` header listing every node
/// in id order when the graph has isolated nodes.
std::string format_edge_list(const Graph& g);

/// Number of unordered node pairs, C(n, 2).
constexpr std::uint64_t pair_count(std::uint64_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }

/// Bijection between [0, C(n,2)) and pairs u < v (colexicographic order).
Edge unrank_pair(std::uint64_t rank);
std::uint64_t rank_pair(Edge e);

/// Graph on the same nodes with exactly g.num_edges() edges drawn uniformly
/// from all edge sets of that size.
Graph uniform_graph_same_density(const Graph& g, std::uint64_t seed);

/// `count` distinct non-edges of g in uniformly random order; every prefix is
/// a uniform sample without replacement. Throws std::invalid_argument when
/// fewer than `count` non-edges exist.
std::vector<Edge> random_nonedges(const Graph& g, std::size_t count, std::uint64_t seed);

/// g plus `count` distinct non-edges drawn uniformly without replacement.
Graph add_random_nonedges(const Graph& g, std::size_t count, std::uint64_t seed);

/// g plus the given extra edges (duplicates merged).
Graph with_edges(const Graph& g, std::span<const Edge> extra);

}  // namespace hyperrecon
