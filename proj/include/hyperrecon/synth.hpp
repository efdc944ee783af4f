#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hyperrecon/graph.hpp"
#include "hyperrecon/hypergraph.hpp"
#include "hyperrecon/sampler.hpp"

namespace hyperrecon {

/// Ten sizes cycling through 3..7.
std::vector<std::size_t> default_planted_sizes();

/// Node-disjoint hyperedges of the given sizes over sum(sizes) + n_extra_nodes
/// nodes. Ids are assigned contiguously and then shuffled by `seed`.
/// Throws std::invalid_argument on a size below 2.
Hypergraph planted_disjoint(std::span<const std::size_t> sizes, std::size_t n_extra_nodes, std::uint64_t seed);

struct PlantedInstance {
  Hypergraph truth;  // planted hyperedges plus one size-2 hyperedge per noise edge
  Graph graph;       // projection of the planted hyperedges plus the noise edges
  std::size_t noise_edges = 0;
  std::uint64_t seed = 0;
};

PlantedInstance make_planted_instance(std::span<const std::size_t> sizes, std::size_t n_extra_nodes,
                                      std::size_t noise_edges, std::uint64_t seed);

/// |K1 & K2| / |K1 | K2| over distinct keys; 1 when both are empty.
double jaccard(const Hypergraph& a, const Hypergraph& b);

enum class GroupColumn { first, second };

struct BipartiteData {
  Hypergraph truth;
  NodeLabels labels;  // members of the kept groups only
  std::size_t groups = 0;
  std::size_t dropped_small = 0;      // groups with fewer than two members
  std::size_t merged_duplicates = 0;  // groups whose member set repeats another
};

/// Reads `group member` lines (or `member group` with GroupColumn::second).
/// `#` starts a comment line. Throws ParseError naming the line when a line
/// does not have exactly two fields.
BipartiteData bipartite_to_hypergraph(std::string_view text, GroupColumn column = GroupColumn::first);
BipartiteData read_bipartite(const std::filesystem::path& path, GroupColumn column = GroupColumn::first);

struct PlantedExperimentConfig {
  std::vector<std::size_t> sizes = default_planted_sizes();
  std::size_t n_extra_nodes = 0;
  std::vector<std::size_t> extra_edge_grid = {0, 20, 40, 60, 80, 100, 120, 140, 160, 180, 200};
  std::size_t realizations = 10;
  SamplerConfig sampler{};
  std::size_t chains = 1;
  std::uint64_t seed = 1;
  /// 0 picks the hardware concurrency.
  std::size_t threads = 0;
};

struct RunStats {
  double mean = 0.0;
  double sd = 0.0;
};

struct PlantedRow {
  std::size_t extra_edges = 0;
  RunStats sigma_planted;
  RunStats sigma_uniform;
  RunStats jaccard;
  RunStats mean_size_planted;
  RunStats mean_size_uniform;
  std::size_t exact_recoveries = 0;  // realizations with J = 1
  /// Per-realization values, realization order.
  std::vector<double> sigma_planted_runs;
  std::vector<double> sigma_uniform_runs;
  std::vector<double> jaccard_runs;
};

/// For each realization: one planted hypergraph and one uniform graph of the
/// same density; noise edges are added as nested prefixes of a single random
/// ordering, so the graphs along the grid grow by inclusion.
std::vector<PlantedRow> run_planted_experiment(const PlantedExperimentConfig& cfg);

std::string format_planted_csv(std::span<const PlantedRow> rows);

struct BipartiteResult {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t truth_hyperedges = 0;
  double jaccard_map = 0.0;
  double jaccard_maxclique = 0.0;
  double sigma = 0.0;
  double sigma_baseline = 0.0;
  std::optional<double> mean_size;
  Hypergraph map;
};

BipartiteResult run_bipartite_experiment(const BipartiteData& data, const SamplerConfig& scfg, std::size_t chains);

}  // namespace hyperrecon
