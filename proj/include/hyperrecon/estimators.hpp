#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hyperrecon/hypergraph.hpp"
#include "hyperrecon/types.hpp"

namespace hyperrecon {

/// Sparse presence counts over posterior samples. Node sets never seen have
/// an implicit count of zero.
class MarginalTable {
 public:
  /// Counts each distinct key of `sample` once, whatever its multiplicity.
  void accumulate(const Hypergraph& sample);

  /// Adds another table's counts (commutative and associative).
  void merge(const MarginalTable& other);

  /// counts[key] / total_samples; throws std::logic_error on an empty table.
  double presence_probability(std::span<const NodeId> key) const;

  std::uint64_t count(std::span<const NodeId> key) const;
  std::uint64_t total_samples() const noexcept { return total_; }
  const NodeSetMap<std::uint64_t>& counts() const noexcept { return counts_; }

  friend bool operator==(const MarginalTable& a, const MarginalTable& b) {
    return a.total_ == b.total_ && a.counts_ == b.counts_;
  }

 private:
  NodeSetMap<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

/// Binary entropy in bits; S(0) = S(1) = 0. Throws std::domain_error
/// outside [0, 1].
double entropy(double p);

enum class Certainty { absent, uncertain, present };

const char* to_string(Certainty c);

/// Certainty class of probability p for threshold alpha:
/// [alpha, 1 - alpha] is uncertain. alpha = 1/2 leaves no uncertain band
/// (p >= 1/2 counts as present).
Certainty classify(double p, double alpha);

struct MarginalRow {
  NodeSet key;
  double probability;
  double entropy;
  Certainty certainty;
};

struct UncertaintySummary {
  double alpha = 0.05;
  std::size_t uncertain_edges = 0;      // size 2
  std::size_t uncertain_triangles = 0;  // size 3
  std::size_t uncertain_higher = 0;     // size > 3
  std::size_t certain_present = 0;
  std::size_t certain_absent = 0;
  /// Every key seen at least once, one classification each.
  std::vector<MarginalRow> rows;

  std::size_t uncertain_total() const { return uncertain_edges + uncertain_triangles + uncertain_higher; }
};

/// Classifies every key in the table. Requires 0 < alpha <= 1/2
/// (std::invalid_argument otherwise). Rows are sorted by descending
/// entropy, then key.
UncertaintySummary classify_uncertain(const MarginalTable& table, double alpha);

/// Entropy at the uncertainty threshold, S(alpha).
inline double entropy_threshold(double alpha) { return entropy(alpha); }

struct SizeSummary {
  std::map<std::size_t, std::uint64_t> histogram;  // size -> count with multiplicity
  std::uint64_t hyperedges = 0;
  std::optional<double> mean_size;
  std::uint64_t higher_order = 0;  // hyperedges of size > 2, with multiplicity
};

SizeSummary summary_stats(const Hypergraph& h);

/// sigma_baseline - sigma_best in bits. Throws std::logic_error when
/// negative beyond rounding (1e-9 relative).
double compression(double sigma_baseline, double sigma_best);

/// CSV with columns size,nodes,probability,entropy,classification; node
/// labels joined by ';'.
std::string format_marginals_csv(const UncertaintySummary& summary, const NodeLabels& labels);

}  // namespace hyperrecon
