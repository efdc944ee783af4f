#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "hyperrecon/clique.hpp"
#include "hyperrecon/graph.hpp"
#include "hyperrecon/hypergraph.hpp"
#include "hyperrecon/random.hpp"

namespace hyperrecon {

enum class SamplerMode { map_only, sampling };

struct SamplerConfig {
  std::uint64_t seed = 1;
  std::size_t burn_in_sweeps = 1000;
  std::size_t thin_sweeps = 1000;
  std::size_t num_samples = 0;
  SamplerMode mode = SamplerMode::map_only;
  /// Optional truncation of factor multiplicities; moves above it are
  /// rejected, so the chain targets the posterior restricted to A <= cap.
  /// Zero means unbounded (the model as defined).
  Multiplicity multiplicity_cap = 0;
  CliqueLimits clique_limits{};
};

/// Throws std::invalid_argument when the configuration is inconsistent.
void validate(const SamplerConfig& scfg);

struct Move {
  NodeSet key;
  int delta = 0;
  Multiplicity current = 0;  // multiplicity of key before the move
};

struct MoveStats {
  /// Indexed by key size.
  std::vector<std::uint64_t> proposed;
  std::vector<std::uint64_t> accepted;

  std::uint64_t total_proposed() const;
  std::uint64_t total_accepted() const;
  void merge(const MoveStats& other);
};

/// One Metropolis-Hastings chain over hypergraphs projecting to a graph.
///
/// State lives in the factor graph (active keys and edge coverage) plus the
/// per-size totals E_k and the running ln P(H). The graph must outlive the
/// chain. A chain is single-threaded; copy it to fork an independent one.
class Chain {
 public:
  /// Starts at the maximal-clique hypergraph.
  Chain(const Graph& g, const ModelConfig& cfg, const SamplerConfig& scfg);

  const ModelConfig& config() const noexcept { return cfg_; }
  const FactorGraph& factors() const noexcept { return factors_; }
  std::span<const std::uint64_t> size_counts() const noexcept { return size_counts_; }

  double log_prior() const noexcept { return log_prior_; }
  double description_length() const noexcept;
  double best_description_length() const noexcept { return best_bits_; }
  const Hypergraph& best() const noexcept { return best_; }
  const MoveStats& stats() const noexcept { return stats_; }
  std::uint64_t sweeps_done() const noexcept { return sweeps_; }

  /// Draws a move: uniform maximal factor, uniform size in {2..k}, uniform
  /// sub-factor of that size, then +1/-1 with equal odds (+1 forced at A = 0).
  Move propose();

  /// ln of the unclamped MH ratio: ln Q-ratio + ln P(H')/P(H); -inf when the
  /// move would uncover an edge or exceed the multiplicity cap.
  double acceptance_log_ratio(const Move& move) const;

  /// Applies a move unconditionally (it must be valid). Updates best-so-far.
  void apply(const Move& move);

  /// One propose/accept step; returns whether the move was accepted.
  bool step();

  /// M steps, M = number of maximal factors.
  void sweep();

  Hypergraph snapshot() const;

  /// ln P(H) recomputed from the active factors.
  double recompute_log_prior() const;

  Rng& rng() noexcept { return rng_; }

 private:
  void draw(Move& move);
  void track_best();

  struct JournalEntry {
    NodeSet key;
    int delta;
  };

  const Graph* graph_;
  ModelConfig cfg_;
  FactorGraph factors_;
  std::vector<std::uint64_t> size_counts_;
  double log_prior_ = 0.0;
  Rng rng_;
  Multiplicity cap_;
  MoveStats stats_;
  Hypergraph best_;
  double best_bits_ = std::numeric_limits<double>::infinity();
  // Moves applied since best_ was last synchronized; replayed onto best_ on
  // the next improvement. Dropped (forcing a full snapshot) when too long.
  std::vector<JournalEntry> journal_;
  bool journal_valid_ = true;
  Move scratch_;
  std::uint64_t sweeps_ = 0;
};

struct Sample {
  std::size_t sweep;
  double description_length;
  const Hypergraph& hypergraph;
};

using SampleSink = std::function<void(const Sample&)>;

struct TracePoint {
  std::size_t sweep;
  double description_length;
  std::vector<std::uint64_t> size_counts;
};

struct Diagnostics {
  std::string generator = Rng::kGeneratorName;
  std::uint64_t seed = 0;
  std::size_t sweeps = 0;
  std::size_t sweep_length = 0;
  MoveStats moves;
  std::vector<TracePoint> trace;
};

struct RunResult {
  Hypergraph best;
  double best_bits = 0.0;
  double initial_bits = 0.0;
  Diagnostics diagnostics;
};

/// Burn-in, then num_samples recordings separated by thin_sweeps sweeps.
/// Samples go to `sink` in sampling mode; in MAP-only mode nothing is
/// delivered and the trace is recorded every thin_sweeps sweeps.
RunResult run(const Graph& g, const ModelConfig& cfg, const SamplerConfig& scfg, const SampleSink& sink = {});

/// Independent chains with seeds derived from scfg.seed; runs them on
/// separate threads. `make_sink(i)` is called up front on the calling thread;
/// the sink it returns (may be empty) is then only used by chain i.
std::vector<RunResult> run_chains(const Graph& g, const ModelConfig& cfg, const SamplerConfig& scfg,
                                  std::size_t num_chains,
                                  const std::function<SampleSink(std::size_t)>& make_sink = {});

/// Seed used by chain `index` of a multi-chain run.
std::uint64_t chain_seed(std::uint64_t master_seed, std::size_t index);

/// Index of the chain with the lowest best description length.
std::size_t best_chain(const std::vector<RunResult>& results);

/// MAP search over `chains` chains; returns the lowest-Sigma result with
/// move statistics summed over all chains.
RunResult reconstruct_map(const Graph& g, const ModelConfig& cfg, const SamplerConfig& scfg, std::size_t chains = 1);

/// CSV lines `sweep,description_length,E_2,...,E_L` with a header row.
std::string format_trace_csv(const Diagnostics& d, std::size_t max_size);

}  // namespace hyperrecon
