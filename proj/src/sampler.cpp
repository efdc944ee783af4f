#include "hyperrecon/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace hyperrecon {

void validate(const SamplerConfig& scfg) {
  if (scfg.mode == SamplerMode::sampling && scfg.thin_sweeps == 0)
    throw std::invalid_argument("thin_sweeps must be at least 1 in sampling mode");
}

std::uint64_t MoveStats::total_proposed() const {
  std::uint64_t t = 0;
  for (auto v : proposed) t += v;
  return t;
}

std::uint64_t MoveStats::total_accepted() const {
  std::uint64_t t = 0;
  for (auto v : accepted) t += v;
  return t;
}

void MoveStats::merge(const MoveStats& other) {
  if (proposed.size() < other.proposed.size()) proposed.resize(other.proposed.size(), 0);
  if (accepted.size() < other.accepted.size()) accepted.resize(other.accepted.size(), 0);
  for (std::size_t i = 0; i < other.proposed.size(); ++i) proposed[i] += other.proposed[i];
  for (std::size_t i = 0; i < other.accepted.size(); ++i) accepted[i] += other.accepted[i];
}

Chain::Chain(const Graph& g, const ModelConfig& cfg, const SamplerConfig& scfg)
    : graph_(&g),
      cfg_(cfg),
      factors_(g, maximal_cliques(g, scfg.clique_limits)),
      size_counts_(cfg.max_size + 1, 0),
      rng_(scfg.seed),
      cap_(scfg.multiplicity_cap),
      best_(g.num_nodes()) {
  if (g.num_edges() == 0) throw DegenerateConfig("cannot sample hypergraphs of an edgeless graph");
  if (cfg.num_nodes != g.num_nodes() || cfg.num_edges != g.num_edges())
    throw std::invalid_argument("model config does not match the graph");
  for (const auto& f : factors_.maximal_factors()) {
    if (f.size() > cfg_.max_size) throw std::invalid_argument("maximal clique larger than configured L");
    factors_.apply_delta(f, +1);
    ++size_counts_[f.size()];
  }
  stats_.proposed.assign(cfg_.max_size + 1, 0);
  stats_.accepted.assign(cfg_.max_size + 1, 0);
  log_prior_ = recompute_log_prior();
  best_ = snapshot();
  best_bits_ = description_length();
}

double Chain::description_length() const noexcept { return -log_prior_ / std::numbers::ln2; }

void Chain::draw(Move& move) {
  const auto& factor = factors_.maximal_factors()[rng_.below(factors_.num_maximal())];
  const auto k = static_cast<unsigned>(factor.size());
  const auto size = static_cast<unsigned>(2 + rng_.below(k - 1));
  subfactor_key_into(factor, size, rng_.below(binomial(k, size)), move.key);
  move.current = factors_.multiplicity(move.key);
  move.delta = (move.current == 0 || rng_.coin()) ? +1 : -1;
}

Move Chain::propose() {
  Move move;
  draw(move);
  return move;
}

double Chain::acceptance_log_ratio(const Move& move) const {
  const std::size_t k = move.key.size();
  if (move.delta == -1 && move.current == 1 && factors_.removal_breaks_coverage(move.key))
    return -std::numeric_limits<double>::infinity();
  if (move.delta == +1 && cap_ != 0 && move.current >= cap_) return -std::numeric_limits<double>::infinity();
  double log_q = 0.0;
  if (move.current == 0) log_q = -std::numbers::ln2;
  else if (move.delta == -1 && move.current == 1) log_q = std::numbers::ln2;
  return log_q + log_prior_delta(size_counts_[k], move.current, k, move.delta, cfg_);
}

void Chain::apply(const Move& move) {
  const std::size_t k = move.key.size();
  const Multiplicity current = factors_.multiplicity(move.key);
  const double delta_lp = log_prior_delta(size_counts_[k], current, k, move.delta, cfg_);
  factors_.apply_delta(move.key, move.delta);
  size_counts_[k] = move.delta > 0 ? size_counts_[k] + 1 : size_counts_[k] - 1;
  log_prior_ += delta_lp;
  if (journal_valid_) {
    if (journal_.size() > 4 * (factors_.active().size() + 16)) {
      journal_valid_ = false;
      journal_.clear();
    } else {
      journal_.push_back({move.key, move.delta});
    }
  }
  track_best();
}

void Chain::track_best() {
  const double bits = description_length();
  if (!(bits < best_bits_)) return;
  if (journal_valid_) {
    for (const auto& entry : journal_) {
      if (entry.delta > 0) best_.add(entry.key);
      else best_.remove_one(entry.key);
    }
  } else {
    best_ = snapshot();
    journal_valid_ = true;
  }
  journal_.clear();
  best_bits_ = bits;
}

bool Chain::step() {
  draw(scratch_);
  const std::size_t k = scratch_.key.size();
  ++stats_.proposed[k];
  const double log_a = acceptance_log_ratio(scratch_);
  if (log_a == -std::numeric_limits<double>::infinity()) return false;
  if (log_a < 0.0 && !(rng_.uniform() < std::exp(log_a))) return false;
  apply(scratch_);
  ++stats_.accepted[k];
  return true;
}

void Chain::sweep() {
  const std::size_t m = factors_.num_maximal();
  for (std::size_t i = 0; i < m; ++i) step();
  ++sweeps_;
}

Hypergraph Chain::snapshot() const {
  Hypergraph h(graph_->num_nodes());
  for (const auto& [key, a] : factors_.active()) h.add(key, a);
  return h;
}

double Chain::recompute_log_prior() const { return hyperrecon::log_prior(snapshot(), cfg_); }

RunResult run(const Graph& g, const ModelConfig& cfg, const SamplerConfig& scfg, const SampleSink& sink) {
  validate(scfg);
  Chain chain(g, cfg, scfg);
  RunResult result;
  result.initial_bits = chain.description_length();
  auto& diag = result.diagnostics;
  diag.seed = scfg.seed;
  diag.sweep_length = chain.factors().num_maximal();

  auto trace_point = [&] {
    const auto counts = chain.size_counts();
    diag.trace.push_back({chain.sweeps_done(), chain.description_length(), {counts.begin(), counts.end()}});
  };

  if (scfg.mode == SamplerMode::map_only) {
    const std::size_t total = scfg.burn_in_sweeps + scfg.num_samples * scfg.thin_sweeps;
    for (std::size_t s = 1; s <= total; ++s) {
      chain.sweep();
      if (scfg.thin_sweeps > 0 && s % scfg.thin_sweeps == 0) trace_point();
    }
    if (diag.trace.empty() || diag.trace.back().sweep != chain.sweeps_done()) trace_point();
  } else {
    for (std::size_t s = 0; s < scfg.burn_in_sweeps; ++s) chain.sweep();
    for (std::size_t i = 0; i < scfg.num_samples; ++i) {
      for (std::size_t t = 0; t < scfg.thin_sweeps; ++t) chain.sweep();
      trace_point();
      if (sink) {
        const Hypergraph h = chain.snapshot();
        sink(Sample{chain.sweeps_done(), chain.description_length(), h});
      }
    }
  }
  diag.sweeps = chain.sweeps_done();
  diag.moves = chain.stats();
  result.best = chain.best();
  result.best_bits = chain.best_description_length();
  return result;
}

std::uint64_t chain_seed(std::uint64_t master_seed, std::size_t index) { return mix_seed(master_seed, index); }

std::vector<RunResult> run_chains(const Graph& g, const ModelConfig& cfg, const SamplerConfig& scfg,
                                  std::size_t num_chains, const std::function<SampleSink(std::size_t)>& make_sink) {
  if (num_chains == 0) throw std::invalid_argument("need at least one chain");
  validate(scfg);
  std::vector<RunResult> results(num_chains);
  std::vector<std::exception_ptr> errors(num_chains);
  std::vector<SampleSink> sinks(num_chains);
  if (make_sink)
    for (std::size_t i = 0; i < num_chains; ++i) sinks[i] = make_sink(i);
  {
    std::vector<std::jthread> workers;
    workers.reserve(num_chains);
    for (std::size_t i = 0; i < num_chains; ++i) {
      workers.emplace_back([&, i] {
        try {
          SamplerConfig local = scfg;
          local.seed = chain_seed(scfg.seed, i);
          results[i] = run(g, cfg, local, sinks[i]);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

std::size_t best_chain(const std::vector<RunResult>& results) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i)
    if (results[i].best_bits < results[best].best_bits) best = i;
  return best;
}

RunResult reconstruct_map(const Graph& g, const ModelConfig& cfg, const SamplerConfig& scfg, std::size_t chains) {
  SamplerConfig map_cfg = scfg;
  map_cfg.mode = SamplerMode::map_only;
  if (chains == 1) return run(g, cfg, map_cfg);
  auto results = run_chains(g, cfg, map_cfg, chains);
  const std::size_t best = best_chain(results);
  RunResult out = std::move(results[best]);
  for (std::size_t i = 0; i < results.size(); ++i)
    if (i != best) out.diagnostics.moves.merge(results[i].diagnostics.moves);
  return out;
}

std::string format_trace_csv(const Diagnostics& d, std::size_t max_size) {
  std::ostringstream out;
  out.precision(17);
  out << "sweep,description_length";
  for (std::size_t k = 2; k <= max_size; ++k) out << ",E_" << k;
  out << '\n';
  for (const auto& p : d.trace) {
    out << p.sweep << ',' << p.description_length;
    for (std::size_t k = 2; k <= max_size; ++k) out << ',' << (k < p.size_counts.size() ? p.size_counts[k] : 0);
    out << '\n';
  }
  return out.str();
}

}  // namespace hyperrecon
