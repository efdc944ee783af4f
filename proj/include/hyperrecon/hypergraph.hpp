#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hyperrecon/clique.hpp"
#include "hyperrecon/graph.hpp"
#include "hyperrecon/types.hpp"

namespace hyperrecon {

/// Multiset of hyperedges over nodes 0..N-1.
///
/// Keys are canonical node sets of size >= 2 mapped to multiplicity >= 1.
/// Per-size totals E_k and sum of ln(A!) per size are kept in step with the
/// edge map.
class Hypergraph {
 public:
  using EdgeMap = std::map<NodeSet, Multiplicity>;

  Hypergraph() = default;
  explicit Hypergraph(std::size_t num_nodes) : num_nodes_(num_nodes) {}

  std::size_t num_nodes() const noexcept { return num_nodes_; }
  const EdgeMap& edges() const noexcept { return edges_; }

  /// Adds `count` instances of `key`. Key must be sorted, size >= 2, and use
  /// node ids below num_nodes(); otherwise std::invalid_argument.
  void add(std::span<const NodeId> key, Multiplicity count = 1);

  /// Removes one instance; std::logic_error if absent.
  void remove_one(std::span<const NodeId> key);

  Multiplicity multiplicity(std::span<const NodeId> key) const;
  bool contains(std::span<const NodeId> key) const { return multiplicity(key) > 0; }

  /// E_k, with multiplicity; index k, zero-filled up to max_size().
  const std::vector<std::uint64_t>& size_counts() const noexcept { return size_counts_; }
  std::uint64_t size_count(std::size_t k) const { return k < size_counts_.size() ? size_counts_[k] : 0; }

  /// Sum over size-k keys of ln(A!), i.e. ln Z_k.
  double log_z(std::size_t k) const { return k < log_z_.size() ? log_z_[k] : 0.0; }

  /// eta_m^(k): number of size-k keys with multiplicity exactly m.
  std::map<Multiplicity, std::size_t> multiplicity_histogram(std::size_t k) const;

  std::size_t max_size() const noexcept { return size_counts_.empty() ? 0 : size_counts_.size() - 1; }
  std::uint64_t total_multiplicity() const noexcept { return total_; }
  std::size_t num_distinct() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return edges_.empty(); }

  friend bool operator==(const Hypergraph& a, const Hypergraph& b) {
    return a.num_nodes_ == b.num_nodes_ && a.edges_ == b.edges_;
  }

 private:
  void bump_size(std::size_t k);
  void trim_sizes();

  std::size_t num_nodes_ = 0;
  EdgeMap edges_;
  std::vector<std::uint64_t> size_counts_;
  std::vector<double> log_z_;
  std::uint64_t total_ = 0;
};

/// Parameters of the integrated Poisson random hypergraph prior.
struct ModelConfig {
  std::size_t num_nodes = 0;
  std::size_t num_edges = 0;
  std::size_t max_size = 2;  // L
  double mu = 0.0;           // E / (L - 1)
  double log1p_inv_mu = 0.0;
  std::vector<double> log_binom;  // ln C(N, k) for k = 0..L

  double log_binomial(std::size_t k) const { return log_binom.at(k); }
};

/// Raised for inputs where the prior is undefined (no edges, so mu = 0).
class DegenerateConfig : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Config with L = size of the largest maximal clique of g and
/// mu = E / (L - 1). Throws DegenerateConfig on an edgeless graph.
ModelConfig make_config(const Graph& g, const CliqueLimits& limits = {});

/// Config from explicit (N, E, L). Requires E >= 1 and 2 <= L <= N.
ModelConfig make_config(std::size_t num_nodes, std::size_t num_edges, std::size_t max_size);

/// ln P(H), recomputed from scratch (ln Z_k summed over the edge map).
/// Throws std::domain_error if a hyperedge is larger than L.
double log_prior(const Hypergraph& h, const ModelConfig& cfg);

/// ln P(H') - ln P(H) for one unit change of a size-k key, given the current
/// E_k and the key's current multiplicity.
double log_prior_delta(std::uint64_t size_count, Multiplicity multiplicity, std::size_t k, int delta,
                       const ModelConfig& cfg);

double log_prior_delta(const Hypergraph& h, std::span<const NodeId> key, int delta, const ModelConfig& cfg);

/// Description length in bits, -log2 P(H).
double description_length(const Hypergraph& h, const ModelConfig& cfg);

Graph project(const Hypergraph& h);
Graph project(const Hypergraph& h, const NodeLabels& labels);

bool is_projection_of(const Graph& g, const Hypergraph& h);

/// One hyperedge per maximal clique of g.
Hypergraph maximal_clique_hypergraph(const Graph& g, const CliqueLimits& limits = {});

/// Parses one hyperedge per line (`[m:] label label ...`); labels are
/// interned into `labels`. Repeated lines accumulate multiplicity.
Hypergraph parse_hypergraph(std::string_view text, NodeLabels& labels);

Hypergraph read_hypergraph(const std::filesystem::path& path, NodeLabels& labels);

/// Deterministic text form: labels sorted within a line, lines sorted, and
/// a `m:` prefix only when the multiplicity exceeds one.
std::string format_hypergraph(const Hypergraph& h, const NodeLabels& labels);

/// Same hypergraph with node ids renumbered through `old_to_new`.
Hypergraph relabel(const Hypergraph& h, std::span<const NodeId> old_to_new, std::size_t num_nodes);

}  // namespace hyperrecon
