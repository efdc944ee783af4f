#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hyperrecon/graph.hpp"
#include "hyperrecon/types.hpp"

namespace hyperrecon {

struct CliqueLimits {
  std::size_t max_cliques = 1'000'000;
  std::size_t max_clique_size = 64;
};

/// All inclusion-maximal cliques of g with at least two nodes, each sorted,
/// listed in lexicographic order. Uses Bron-Kerbosch with Tomita pivoting
/// inside a degeneracy-ordered outer loop. Throws ResourceError when a limit
/// is exceeded.
std::vector<NodeSet> maximal_cliques(const Graph& g, const CliqueLimits& limits = {});

/// C(n, k) for n <= 64 (exact in 64 bits).
std::uint64_t binomial(unsigned n, unsigned k);

/// The `index`-th size-`size` subset of `factor` in lexicographic order of
/// positions. `factor` must be sorted; the result is then canonical.
/// Throws std::logic_error when size or index is out of range.
NodeSet subfactor_key(std::span<const NodeId> factor, unsigned size, std::uint64_t index);

/// Same as subfactor_key, writing into `out` to avoid allocation.
void subfactor_key_into(std::span<const NodeId> factor, unsigned size, std::uint64_t index, NodeSet& out);

/// Factor-graph encoding of a hypergraph constrained to the cliques of G.
///
/// Only maximal factors are materialized up front; sub-clique factors exist
/// only while active (multiplicity >= 1). Coverage counts, per edge of G,
/// the active factor instances containing it, multiplicity included.
///
/// Holds a pointer to the graph, which must outlive this object.
class FactorGraph {
 public:
  FactorGraph(const Graph& g, std::vector<NodeSet> maximal);

  /// Convenience: enumerates maximal cliques of g.
  explicit FactorGraph(const Graph& g, const CliqueLimits& limits = {});

  const Graph& graph() const noexcept { return *graph_; }
  std::span<const NodeSet> maximal_factors() const noexcept { return maximal_; }
  std::size_t num_maximal() const noexcept { return maximal_.size(); }

  /// Maximal factors (ids) containing edge `edge_id`.
  std::span<const std::uint32_t> factors_of_edge(std::size_t edge_id) const {
    return edge_factors_[edge_id];
  }

  const NodeSetMap<Multiplicity>& active() const noexcept { return active_; }
  Multiplicity multiplicity(std::span<const NodeId> key) const;
  std::uint64_t coverage(std::size_t edge_id) const { return coverage_[edge_id]; }
  std::span<const std::uint64_t> coverage() const noexcept { return coverage_; }

  /// Adds (+1) or removes (-1) one instance of `key`. Throws std::logic_error
  /// when key is not a clique of G, has fewer than two nodes, or is absent on
  /// removal.
  void apply_delta(std::span<const NodeId> key, int delta);

  /// True iff every edge of G is covered by an active factor.
  bool is_fully_covered() const noexcept { return uncovered_ == 0; }
  std::size_t num_uncovered() const noexcept { return uncovered_; }

  /// Whether removing one instance of `key` would leave an edge uncovered.
  bool removal_breaks_coverage(std::span<const NodeId> key) const;

  /// Coverage recomputed from the active set; for verification.
  std::vector<std::uint64_t> recount_coverage() const;

 private:
  template <typename F>
  void for_each_edge_of(std::span<const NodeId> key, F&& fn) const;

  const Graph* graph_;
  std::vector<NodeSet> maximal_;
  std::vector<std::vector<std::uint32_t>> edge_factors_;
  NodeSetMap<Multiplicity> active_;
  std::vector<std::uint64_t> coverage_;
  std::size_t uncovered_ = 0;
};

}  // namespace hyperrecon
