#include "hyperrecon/synth.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "hyperrecon/estimators.hpp"
#include "hyperrecon/random.hpp"

namespace hyperrecon {

std::vector<std::size_t> default_planted_sizes() { return {3, 4, 5, 6, 7, 3, 4, 5, 6, 7}; }

Hypergraph planted_disjoint(std::span<const std::size_t> sizes, std::size_t n_extra_nodes, std::uint64_t seed) {
  std::size_t n = n_extra_nodes;
  for (auto s : sizes) {
    if (s < 2) throw std::invalid_argument("planted hyperedges need at least two nodes");
    n += s;
  }
  std::vector<NodeId> perm(n);
  std::iota(perm.begin(), perm.end(), NodeId{0});
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);

  Hypergraph h(n);
  std::size_t offset = 0;
  for (auto s : sizes) {
    NodeSet key(perm.begin() + offset, perm.begin() + offset + s);
    std::sort(key.begin(), key.end());
    h.add(key);
    offset += s;
  }
  return h;
}

PlantedInstance make_planted_instance(std::span<const std::size_t> sizes, std::size_t n_extra_nodes,
                                      std::size_t noise_edges, std::uint64_t seed) {
  PlantedInstance inst;
  inst.seed = seed;
  inst.noise_edges = noise_edges;
  inst.truth = planted_disjoint(sizes, n_extra_nodes, mix_seed(seed, 0));
  const Graph base = project(inst.truth);
  const auto noise = random_nonedges(base, noise_edges, mix_seed(seed, 1));
  for (const auto& e : noise) inst.truth.add(std::array<NodeId, 2>{e.u, e.v});
  inst.graph = with_edges(base, noise);
  return inst;
}

double jaccard(const Hypergraph& a, const Hypergraph& b) {
  std::size_t common = 0;
  auto ia = a.edges().begin();
  auto ib = b.edges().begin();
  while (ia != a.edges().end() && ib != b.edges().end()) {
    if (ia->first < ib->first) ++ia;
    else if (ib->first < ia->first) ++ib;
    else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  const std::size_t uni = a.num_distinct() + b.num_distinct() - common;
  return uni == 0 ? 1.0 : static_cast<double>(common) / static_cast<double>(uni);
}

BipartiteData bipartite_to_hypergraph(std::string_view text, GroupColumn column) {
  std::vector<std::string> group_order;
  std::map<std::string, std::vector<std::string>, std::less<>> members;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream tokens(line);
    std::vector<std::string> fields;
    std::string tok;
    while (tokens >> tok) fields.push_back(tok);
    if (fields.empty() || fields.front().front() == '#') continue;
    if (fields.size() != 2) throw ParseError(line_no, "expected two fields (group, member)");
    auto& group = column == GroupColumn::first ? fields[0] : fields[1];
    auto& member = column == GroupColumn::first ? fields[1] : fields[0];
    auto [it, inserted] = members.try_emplace(group);
    if (inserted) group_order.push_back(group);
    if (std::find(it->second.begin(), it->second.end(), member) == it->second.end())
      it->second.push_back(member);
  }

  BipartiteData out;
  out.groups = group_order.size();
  std::vector<NodeSet> keys;
  for (const auto& g : group_order) {
    const auto& m = members.find(g)->second;
    if (m.size() < 2) {
      ++out.dropped_small;
      continue;
    }
    NodeSet key;
    for (const auto& name : m) key.push_back(out.labels.intern(name));
    std::sort(key.begin(), key.end());
    keys.push_back(std::move(key));
  }
  out.truth = Hypergraph(out.labels.size());
  for (const auto& k : keys) {
    if (out.truth.contains(k)) ++out.merged_duplicates;
    else out.truth.add(k);
  }
  return out;
}

BipartiteData read_bipartite(const std::filesystem::path& path, GroupColumn column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return bipartite_to_hypergraph(buf.str(), column);
}

namespace {

RunStats stats_of(const std::vector<double>& xs) {
  RunStats s;
  if (xs.empty()) return s;
  s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

struct RealizationResult {
  std::vector<double> sigma_planted, sigma_uniform, jaccard, size_planted, size_uniform;
};

double sigma_of(const Graph& g, const SamplerConfig& scfg, std::size_t chains, Hypergraph* map_out,
                double* mean_size) {
  const ModelConfig cfg = make_config(g, scfg.clique_limits);
  RunResult r = reconstruct_map(g, cfg, scfg, chains);
  if (mean_size) *mean_size = summary_stats(r.best).mean_size.value_or(0.0);
  if (map_out) *map_out = std::move(r.best);
  return r.best_bits;
}

RealizationResult run_realization(const PlantedExperimentConfig& cfg, std::size_t index) {
  const std::uint64_t seed = mix_seed(cfg.seed, index);
  const std::size_t max_extra =
      cfg.extra_edge_grid.empty() ? 0 : *std::max_element(cfg.extra_edge_grid.begin(), cfg.extra_edge_grid.end());
  const Hypergraph planted = planted_disjoint(cfg.sizes, cfg.n_extra_nodes, mix_seed(seed, 0));
  const Graph base = project(planted);
  const auto noise = random_nonedges(base, max_extra, mix_seed(seed, 1));
  const Graph uniform_base = uniform_graph_same_density(base, mix_seed(seed, 2));
  const auto uniform_noise = random_nonedges(uniform_base, max_extra, mix_seed(seed, 3));

  RealizationResult out;
  for (std::size_t gi = 0; gi < cfg.extra_edge_grid.size(); ++gi) {
    const std::size_t extra = cfg.extra_edge_grid[gi];
    SamplerConfig scfg = cfg.sampler;
    scfg.seed = mix_seed(seed, 4 + 2 * gi);

    const std::span<const Edge> added(noise.data(), extra);
    const Graph g = with_edges(base, added);
    Hypergraph truth = planted;
    for (const auto& e : added) truth.add(std::array<NodeId, 2>{e.u, e.v});
    Hypergraph map;
    double size = 0.0;
    out.sigma_planted.push_back(sigma_of(g, scfg, cfg.chains, &map, &size));
    out.jaccard.push_back(jaccard(map, truth));
    out.size_planted.push_back(size);

    scfg.seed = mix_seed(seed, 5 + 2 * gi);
    const Graph u = with_edges(uniform_base, std::span<const Edge>(uniform_noise.data(), extra));
    out.sigma_uniform.push_back(sigma_of(u, scfg, cfg.chains, nullptr, &size));
    out.size_uniform.push_back(size);
  }
  return out;
}

}  // namespace

std::vector<PlantedRow> run_planted_experiment(const PlantedExperimentConfig& cfg) {
  validate(cfg.sampler);
  if (cfg.realizations == 0) throw std::invalid_argument("need at least one realization");
  std::vector<RealizationResult> results(cfg.realizations);
  std::vector<std::exception_ptr> errors(cfg.realizations);
  std::size_t threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, cfg.realizations);
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < cfg.realizations; i = next++) {
          try {
            results[i] = run_realization(cfg, i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::vector<PlantedRow> rows;
  for (std::size_t gi = 0; gi < cfg.extra_edge_grid.size(); ++gi) {
    PlantedRow row;
    row.extra_edges = cfg.extra_edge_grid[gi];
    std::vector<double> sp, su;
    for (const auto& r : results) {
      row.sigma_planted_runs.push_back(r.sigma_planted[gi]);
      row.sigma_uniform_runs.push_back(r.sigma_uniform[gi]);
      row.jaccard_runs.push_back(r.jaccard[gi]);
      sp.push_back(r.size_planted[gi]);
      su.push_back(r.size_uniform[gi]);
      if (r.jaccard[gi] == 1.0) ++row.exact_recoveries;
    }
    row.sigma_planted = stats_of(row.sigma_planted_runs);
    row.sigma_uniform = stats_of(row.sigma_uniform_runs);
    row.jaccard = stats_of(row.jaccard_runs);
    row.mean_size_planted = stats_of(sp);
    row.mean_size_uniform = stats_of(su);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_planted_csv(std::span<const PlantedRow> rows) {
  std::ostringstream out;
  out.precision(10);
  out << "extra_edges,sigma_planted_mean,sigma_planted_sd,sigma_uniform_mean,sigma_uniform_sd,"
         "jaccard_mean,jaccard_sd,exact_recoveries,mean_size_planted,mean_size_uniform\n";
  for (const auto& r : rows) {
    out << r.extra_edges << ',' << r.sigma_planted.mean << ',' << r.sigma_planted.sd << ',' << r.sigma_uniform.mean
        << ',' << r.sigma_uniform.sd << ',' << r.jaccard.mean << ',' << r.jaccard.sd << ',' << r.exact_recoveries << ','
        << r.mean_size_planted.mean << ',' << r.mean_size_uniform.mean << '\n';
  }
  return out.str();
}

BipartiteResult run_bipartite_experiment(const BipartiteData& data, const SamplerConfig& scfg, std::size_t chains) {
  BipartiteResult out;
  const Graph g = project(data.truth, data.labels);
  out.nodes = g.num_nodes();
  out.edges = g.num_edges();
  out.truth_hyperedges = data.truth.num_distinct();
  const ModelConfig cfg = make_config(g, scfg.clique_limits);
  const Hypergraph baseline = maximal_clique_hypergraph(g, scfg.clique_limits);
  RunResult r = reconstruct_map(g, cfg, scfg, chains);
  out.jaccard_map = jaccard(r.best, data.truth);
  out.jaccard_maxclique = jaccard(baseline, data.truth);
  out.sigma = r.best_bits;
  out.sigma_baseline = description_length(baseline, cfg);
  out.mean_size = summary_stats(r.best).mean_size;
  out.map = std::move(r.best);
  return out;
}

}  // namespace hyperrecon
