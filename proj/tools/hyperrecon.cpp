#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "hyperrecon/clique.hpp"
#include "hyperrecon/estimators.hpp"
#include "hyperrecon/graph.hpp"
#include "hyperrecon/hypergraph.hpp"
#include "hyperrecon/sampler.hpp"
#include "hyperrecon/synth.hpp"

#ifndef HYPERRECON_VERSION
#define HYPERRECON_VERSION "unknown"
#endif

using nlohmann::json;
using namespace hyperrecon;

namespace {

constexpr const char* kConventions =
    "N counts every node of the input, including isolated nodes declared with '# nodes:'; "
    "L is the size of the largest maximal clique; mu = E/(L-1)";

struct Common {
  std::uint64_t seed = 1;
  std::size_t chains = 1;
  std::string out;
  bool json = false;
  std::size_t max_cliques = CliqueLimits{}.max_cliques;
  std::size_t max_clique_size = CliqueLimits{}.max_clique_size;

  CliqueLimits limits() const { return {max_cliques, max_clique_size}; }
};

void add_common(CLI::App* cmd, Common& c, bool sampler) {
  cmd->add_option("-o,--out", c.out, "Primary output file (stdout when omitted)");
  cmd->add_flag("--json", c.json, "Print results as JSON");
  cmd->add_option("--max-cliques", c.max_cliques, "Abort when a graph has more maximal cliques")->capture_default_str();
  cmd->add_option("--max-clique-size", c.max_clique_size, "Abort on larger cliques")->capture_default_str();
  if (sampler) {
    cmd->add_option("--seed", c.seed, "Master seed")->capture_default_str();
    cmd->add_option("--chains", c.chains, "Independent chains run in parallel")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
  }
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out.flush()) throw std::runtime_error("failed writing " + path);
}

json flags_of(const CLI::App* cmd) {
  json flags = json::object();
  for (const CLI::Option* opt : cmd->get_options()) {
    if (opt->get_name() == "--help") continue;
    const auto& res = opt->results();
    std::string name = opt->get_single_name();
    if (res.empty()) flags[name] = opt->get_default_str();
    else if (res.size() == 1) flags[name] = res.front();
    else flags[name] = res;
  }
  return flags;
}

/// Holds the pieces of a run record and writes it next to the output.
struct Manifest {
  json doc;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  Manifest(const std::string& command, const CLI::App* cmd, const std::vector<std::string>& argv) {
    doc["command"] = command;
    doc["argv"] = argv;
    doc["flags"] = flags_of(cmd);
    doc["generator"] = Rng::kGeneratorName;
    doc["version"] = HYPERRECON_VERSION;
    doc["inputs"] = json::array();
  }

  void finish(const Common& c, const json& results) {
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    doc["wall_time_seconds"] = secs;
    doc["results"] = results;
    if (!c.out.empty()) write_output(c.out + ".manifest.json", doc.dump(2) + "\n");
  }
};

void report(const Common& c, const json& results, const std::vector<std::pair<std::string, std::string>>& lines) {
  if (c.json) {
    (c.out.empty() ? std::cerr : std::cout) << results.dump(2) << '\n';
    return;
  }
  auto& os = c.out.empty() ? std::cerr : std::cout;
  for (const auto& [k, v] : lines) os << k << ": " << v << '\n';
}

std::string fmt(double x, int precision = 6) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(precision);
  s << x;
  return s.str();
}

json size_json(const SizeSummary& s) {
  json hist = json::object();
  for (const auto& [k, e] : s.histogram) hist[std::to_string(k)] = e;
  json j{{"histogram", hist}, {"hyperedges", s.hyperedges}, {"higher_order", s.higher_order}};
  j["mean_size"] = s.mean_size ? json(*s.mean_size) : json(nullptr);
  return j;
}

json config_json(const ModelConfig& cfg) {
  return {{"N", cfg.num_nodes}, {"E", cfg.num_edges}, {"L", cfg.max_size}, {"mu", cfg.mu}, {"conventions", kConventions}};
}

json moves_json(const MoveStats& m) {
  return {{"proposed", m.total_proposed()},
          {"accepted", m.total_accepted()},
          {"acceptance_rate", m.total_proposed() ? double(m.total_accepted()) / double(m.total_proposed()) : 0.0}};
}

struct ReconstructArgs {
  std::string graph;
  std::size_t sweeps = 1000;
  std::size_t cap = 0;
  std::string trace;
};

int cmd_reconstruct(const ReconstructArgs& a, const Common& c, Manifest& m) {
  m.doc["inputs"].push_back(a.graph);
  m.doc["seed"] = c.seed;
  const Graph g = read_edge_list(a.graph);
  json results;
  if (g.num_edges() == 0) {
    std::cerr << "warning: graph has no edges; the only consistent hypergraph is empty (Sigma = 0)\n";
    write_output(c.out, "");
    results = {{"sigma_bits", 0.0}, {"baseline_bits", 0.0}, {"compression_bits", 0.0}, {"N", g.num_nodes()}, {"E", 0}};
    m.finish(c, results);
    report(c, results, {{"sigma_bits", "0"}, {"baseline_bits", "0"}, {"compression_bits", "0"}});
    return 0;
  }
  const ModelConfig cfg = make_config(g, c.limits());
  SamplerConfig scfg;
  scfg.seed = c.seed;
  scfg.burn_in_sweeps = a.sweeps;
  scfg.thin_sweeps = std::max<std::size_t>(1, a.sweeps / 100);
  scfg.num_samples = 0;
  scfg.multiplicity_cap = a.cap;
  scfg.clique_limits = c.limits();
  const RunResult r = reconstruct_map(g, cfg, scfg, c.chains);
  write_output(c.out, format_hypergraph(r.best, g.labels()));
  if (!a.trace.empty()) write_output(a.trace, format_trace_csv(r.diagnostics, cfg.max_size));

  const auto stats = summary_stats(r.best);
  results = {{"sigma_bits", r.best_bits},
             {"baseline_bits", r.initial_bits},
             {"compression_bits", compression(r.initial_bits, r.best_bits)},
             {"config", config_json(cfg)},
             {"sizes", size_json(stats)},
             {"sweeps_per_chain", r.diagnostics.sweeps},
             {"sweep_length", r.diagnostics.sweep_length},
             {"moves", moves_json(r.diagnostics.moves)}};
  m.finish(c, results);
  report(c, results,
         {{"N", std::to_string(cfg.num_nodes)},
          {"E", std::to_string(cfg.num_edges)},
          {"L", std::to_string(cfg.max_size)},
          {"sigma_bits", fmt(r.best_bits)},
          {"baseline_bits", fmt(r.initial_bits)},
          {"compression_bits", fmt(compression(r.initial_bits, r.best_bits))},
          {"hyperedges", std::to_string(stats.hyperedges)},
          {"higher_order", std::to_string(stats.higher_order)},
          {"mean_size", stats.mean_size ? fmt(*stats.mean_size, 4) : "n/a"}});
  return 0;
}

struct SampleArgs {
  std::string graph;
  std::size_t burn_in = 1000;
  std::size_t thin = 1000;
  std::size_t samples = 4000;
  double alpha = 0.05;
  std::size_t cap = 0;
  std::string map_out;
};

int cmd_sample(const SampleArgs& a, const Common& c, Manifest& m) {
  m.doc["inputs"].push_back(a.graph);
  m.doc["seed"] = c.seed;
  const Graph g = read_edge_list(a.graph);
  if (g.num_edges() == 0) {
    std::cerr << "warning: graph has no edges; the posterior is concentrated on the empty hypergraph\n";
    write_output(c.out, format_marginals_csv(UncertaintySummary{a.alpha, 0, 0, 0, 0, 0, {}}, g.labels()));
    json results{{"samples", 0}, {"uncertain_edges", 0}, {"uncertain_triangles", 0}, {"uncertain_higher", 0}};
    m.finish(c, results);
    report(c, results, {});
    return 0;
  }
  const ModelConfig cfg = make_config(g, c.limits());
  SamplerConfig scfg;
  scfg.seed = c.seed;
  scfg.mode = SamplerMode::sampling;
  scfg.burn_in_sweeps = a.burn_in;
  scfg.thin_sweeps = a.thin;
  scfg.num_samples = a.samples;
  scfg.multiplicity_cap = a.cap;
  scfg.clique_limits = c.limits();

  std::vector<MarginalTable> tables(c.chains);
  auto results_v = run_chains(g, cfg, scfg, c.chains, [&](std::size_t i) -> SampleSink {
    return [&tables, i](const Sample& s) { tables[i].accumulate(s.hypergraph); };
  });
  MarginalTable merged;
  for (const auto& t : tables) merged.merge(t);
  const auto summary = classify_uncertain(merged, a.alpha);
  write_output(c.out, format_marginals_csv(summary, g.labels()));

  const auto& best = results_v[best_chain(results_v)];
  if (!a.map_out.empty()) write_output(a.map_out, format_hypergraph(best.best, g.labels()));
  MoveStats moves;
  for (const auto& r : results_v) moves.merge(r.diagnostics.moves);

  json results{{"samples", merged.total_samples()},
               {"alpha", a.alpha},
               {"entropy_threshold", entropy_threshold(a.alpha)},
               {"distinct_keys_seen", merged.counts().size()},
               {"uncertain_edges", summary.uncertain_edges},
               {"uncertain_triangles", summary.uncertain_triangles},
               {"uncertain_higher", summary.uncertain_higher},
               {"certain_present", summary.certain_present},
               {"certain_absent_seen", summary.certain_absent},
               {"best_sigma_bits", best.best_bits},
               {"config", config_json(cfg)},
               {"moves", moves_json(moves)}};
  m.finish(c, results);
  report(c, results,
         {{"samples", std::to_string(merged.total_samples())},
          {"uncertain_edges", std::to_string(summary.uncertain_edges)},
          {"uncertain_triangles", std::to_string(summary.uncertain_triangles)},
          {"uncertain_higher", std::to_string(summary.uncertain_higher)},
          {"certain_present", std::to_string(summary.certain_present)},
          {"best_sigma_bits", fmt(best.best_bits)}});
  return 0;
}

int cmd_project(const std::string& path, const Common& c, Manifest& m) {
  m.doc["inputs"].push_back(path);
  NodeLabels labels;
  const Hypergraph h = read_hypergraph(path, labels);
  const Graph g = project(h, labels);
  write_output(c.out, format_edge_list(g));
  json results{{"nodes", g.num_nodes()}, {"edges", g.num_edges()}};
  m.finish(c, results);
  report(c, results, {{"nodes", std::to_string(g.num_nodes())}, {"edges", std::to_string(g.num_edges())}});
  return 0;
}

int cmd_cliques(const std::string& path, const Common& c, Manifest& m) {
  m.doc["inputs"].push_back(path);
  const Graph g = read_edge_list(path);
  const Hypergraph h = maximal_clique_hypergraph(g, c.limits());
  write_output(c.out, format_hypergraph(h, g.labels()));
  const auto stats = summary_stats(h);
  json results{{"maximal_cliques", h.num_distinct()}, {"largest", h.max_size()}, {"sizes", size_json(stats)}};
  m.finish(c, results);
  report(c, results,
         {{"maximal_cliques", std::to_string(h.num_distinct())}, {"largest", std::to_string(h.max_size())}});
  return 0;
}

int cmd_dl(const std::string& graph_path, const std::string& hyper_path, const Common& c, Manifest& m) {
  m.doc["inputs"] = {graph_path, hyper_path};
  const Graph g = read_edge_list(graph_path);
  NodeLabels labels = g.labels();
  const Hypergraph h = read_hypergraph(hyper_path, labels);
  if (labels.size() != g.num_nodes()) throw std::runtime_error("hypergraph uses nodes that are not in the graph");
  const ModelConfig cfg = make_config(g, c.limits());
  const double bits = description_length(h, cfg);
  const bool consistent = is_projection_of(g, h);
  json results{{"sigma_bits", bits}, {"projects_to_graph", consistent}, {"config", config_json(cfg)}};
  m.finish(c, results);
  write_output(c.out, fmt(bits, 6) + "\n");
  if (!consistent) std::cerr << "warning: the hypergraph does not project onto the graph\n";
  if (c.json) std::cerr << results.dump(2) << '\n';
  return 0;
}

int cmd_eval(const std::string& a, const std::string& b, const Common& c, Manifest& m) {
  m.doc["inputs"] = {a, b};
  NodeLabels labels;
  const Hypergraph ha = read_hypergraph(a, labels);
  const Hypergraph hb = read_hypergraph(b, labels);
  const double j = jaccard(ha, hb);
  json results{{"jaccard", j}, {"distinct_a", ha.num_distinct()}, {"distinct_b", hb.num_distinct()}};
  m.finish(c, results);
  write_output(c.out, fmt(j, 6) + "\n");
  if (c.json) std::cerr << results.dump(2) << '\n';
  return 0;
}

struct PlantedArgs {
  std::vector<std::size_t> sizes = default_planted_sizes();
  std::size_t extra_nodes = 0;
  std::size_t noise = 0;
  std::string graph_out;
};

int cmd_synth_planted(const PlantedArgs& a, const Common& c, Manifest& m) {
  m.doc["seed"] = c.seed;
  const PlantedInstance inst = make_planted_instance(a.sizes, a.extra_nodes, a.noise, c.seed);
  const NodeLabels labels = NodeLabels::numbered(inst.graph.num_nodes());
  write_output(c.out, format_hypergraph(inst.truth, labels));
  if (!a.graph_out.empty()) write_output(a.graph_out, format_edge_list(inst.graph));
  json results{{"nodes", inst.graph.num_nodes()},
               {"edges", inst.graph.num_edges()},
               {"planted", a.sizes.size()},
               {"noise_edges", inst.noise_edges}};
  m.finish(c, results);
  if (c.json) std::cerr << results.dump(2) << '\n';
  return 0;
}

struct ExperimentArgs {
  PlantedExperimentConfig cfg;
  std::size_t sweeps = 1000;
  std::size_t threads = 0;
};

int cmd_synth_experiment(ExperimentArgs a, const Common& c, Manifest& m) {
  m.doc["seed"] = c.seed;
  a.cfg.seed = c.seed;
  a.cfg.chains = c.chains;
  a.cfg.threads = a.threads;
  a.cfg.sampler.burn_in_sweeps = a.sweeps;
  a.cfg.sampler.num_samples = 0;
  a.cfg.sampler.clique_limits = c.limits();
  const auto rows = run_planted_experiment(a.cfg);
  const std::string csv = format_planted_csv(rows);
  write_output(c.out, csv);
  json results = json::array();
  for (const auto& r : rows)
    results.push_back({{"extra_edges", r.extra_edges},
                       {"sigma_planted_mean", r.sigma_planted.mean},
                       {"sigma_uniform_mean", r.sigma_uniform.mean},
                       {"jaccard_mean", r.jaccard.mean},
                       {"exact_recoveries", r.exact_recoveries}});
  m.finish(c, {{"rows", results}});
  if (c.json) std::cerr << results.dump(2) << '\n';
  return 0;
}

struct BipartiteArgs {
  std::string file;
  int group_column = 1;
  std::size_t sweeps = 1000;
  std::string truth_out;
};

int cmd_bipartite(const BipartiteArgs& a, const Common& c, Manifest& m) {
  m.doc["inputs"].push_back(a.file);
  m.doc["seed"] = c.seed;
  const BipartiteData data = read_bipartite(a.file, a.group_column == 1 ? GroupColumn::first : GroupColumn::second);
  if (!a.truth_out.empty()) write_output(a.truth_out, format_hypergraph(data.truth, data.labels));
  SamplerConfig scfg;
  scfg.seed = c.seed;
  scfg.burn_in_sweeps = a.sweeps;
  scfg.num_samples = 0;
  scfg.clique_limits = c.limits();
  const BipartiteResult r = run_bipartite_experiment(data, scfg, c.chains);
  write_output(c.out, format_hypergraph(r.map, data.labels));
  json results{{"nodes", r.nodes},
               {"edges", r.edges},
               {"groups", data.groups},
               {"dropped_small_groups", data.dropped_small},
               {"merged_duplicate_groups", data.merged_duplicates},
               {"truth_hyperedges", r.truth_hyperedges},
               {"jaccard_map", r.jaccard_map},
               {"jaccard_maxclique", r.jaccard_maxclique},
               {"sigma_bits", r.sigma},
               {"baseline_bits", r.sigma_baseline}};
  results["mean_size"] = r.mean_size ? json(*r.mean_size) : json(nullptr);
  m.finish(c, results);
  report(c, results,
         {{"nodes", std::to_string(r.nodes)},
          {"edges", std::to_string(r.edges)},
          {"truth_hyperedges", std::to_string(r.truth_hyperedges)},
          {"jaccard_map", fmt(r.jaccard_map, 4)},
          {"jaccard_maxclique", fmt(r.jaccard_maxclique, 4)},
          {"sigma_bits", fmt(r.sigma)},
          {"baseline_bits", fmt(r.sigma_baseline)}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reconstruct higher-order interactions from network data"};
  app.set_version_flag("--version", std::string(HYPERRECON_VERSION));
  app.require_subcommand(1);
  const std::vector<std::string> args(argv, argv + argc);

  Common common;

  ReconstructArgs rec;
  auto* reconstruct = app.add_subcommand("reconstruct", "MAP hypergraph of a graph");
  reconstruct->add_option("graph", rec.graph, "Edge list")->required()->check(CLI::ExistingFile);
  reconstruct->add_option("--sweeps", rec.sweeps, "Sweeps per chain")->capture_default_str();
  reconstruct->add_option("--cap", rec.cap, "Multiplicity cap (0 = none)")->capture_default_str();
  reconstruct->add_option("--trace", rec.trace, "Write the description-length trace as CSV");
  add_common(reconstruct, common, true);

  SampleArgs smp;
  auto* sample = app.add_subcommand("sample", "Posterior marginals and uncertainty classes");
  sample->add_option("graph", smp.graph, "Edge list")->required()->check(CLI::ExistingFile);
  sample->add_option("--burn-in", smp.burn_in, "Burn-in sweeps")->capture_default_str();
  sample->add_option("--thin", smp.thin, "Sweeps between samples")->capture_default_str()->check(CLI::PositiveNumber);
  sample->add_option("--samples", smp.samples, "Samples per chain")->capture_default_str();
  sample->add_option("--alpha", smp.alpha, "Uncertainty threshold")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 0.5));
  sample->add_option("--cap", smp.cap, "Multiplicity cap (0 = none)")->capture_default_str();
  sample->add_option("--map-out", smp.map_out, "Also write the lowest-Sigma hypergraph seen");
  add_common(sample, common, true);

  std::string project_in;
  auto* project_cmd = app.add_subcommand("project", "Projection of a hypergraph onto a graph");
  project_cmd->add_option("hypergraph", project_in, "Hypergraph file")->required()->check(CLI::ExistingFile);
  add_common(project_cmd, common, false);

  auto* synth = app.add_subcommand("synth", "Synthetic benchmarks");
  synth->require_subcommand(1);
  PlantedArgs planted;
  auto* synth_planted = synth->add_subcommand("planted", "Disjoint planted hyperedges plus noise edges");
  synth_planted->add_option("--sizes", planted.sizes, "Planted hyperedge sizes")->delimiter(',');
  synth_planted->add_option("--extra-nodes", planted.extra_nodes, "Nodes outside any hyperedge")->capture_default_str();
  synth_planted->add_option("--noise", planted.noise, "Random noise edges")->capture_default_str();
  synth_planted->add_option("--graph-out", planted.graph_out, "Write the noisy projection as an edge list");
  add_common(synth_planted, common, true);

  ExperimentArgs exp;
  auto* synth_exp = synth->add_subcommand("experiment", "Description length of planted vs. uniform graphs");
  synth_exp->add_option("--sizes", exp.cfg.sizes, "Planted hyperedge sizes")->delimiter(',');
  synth_exp->add_option("--extra-nodes", exp.cfg.n_extra_nodes, "Nodes outside any hyperedge")->capture_default_str();
  synth_exp->add_option("--grid", exp.cfg.extra_edge_grid, "Numbers of added edges")->delimiter(',');
  synth_exp->add_option("--realizations", exp.cfg.realizations, "Realizations per grid point")->capture_default_str();
  synth_exp->add_option("--sweeps", exp.sweeps, "MAP sweeps per run")->capture_default_str();
  synth_exp->add_option("--threads", exp.threads, "Worker threads (0 = all cores)")->capture_default_str();
  add_common(synth_exp, common, true);

  BipartiteArgs bip;
  auto* bipartite = app.add_subcommand("bipartite", "Recover group hyperedges from a bipartite projection");
  bipartite->add_option("file", bip.file, "Two-column group/member file")->required()->check(CLI::ExistingFile);
  bipartite->add_option("--group-column", bip.group_column, "Column holding the group label")
      ->capture_default_str()
      ->check(CLI::IsMember({1, 2}));
  bipartite->add_option("--sweeps", bip.sweeps, "MAP sweeps per chain")->capture_default_str();
  bipartite->add_option("--truth-out", bip.truth_out, "Write the ground-truth hypergraph");
  add_common(bipartite, common, true);

  std::string eval_a, eval_b;
  auto* eval = app.add_subcommand("eval", "Jaccard similarity of two hypergraphs");
  eval->add_option("a", eval_a, "Hypergraph file")->required()->check(CLI::ExistingFile);
  eval->add_option("b", eval_b, "Hypergraph file")->required()->check(CLI::ExistingFile);
  add_common(eval, common, false);

  std::string cliques_in;
  auto* cliques = app.add_subcommand("cliques", "Maximal cliques as a hypergraph");
  cliques->add_option("graph", cliques_in, "Edge list")->required()->check(CLI::ExistingFile);
  add_common(cliques, common, false);

  std::string dl_graph, dl_hyper;
  auto* dl = app.add_subcommand("dl", "Description length of a hypergraph for a graph");
  dl->add_option("graph", dl_graph, "Edge list")->required()->check(CLI::ExistingFile);
  dl->add_option("hypergraph", dl_hyper, "Hypergraph file")->required()->check(CLI::ExistingFile);
  add_common(dl, common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (reconstruct->parsed()) {
      Manifest m("reconstruct", reconstruct, args);
      return cmd_reconstruct(rec, common, m);
    }
    if (sample->parsed()) {
      Manifest m("sample", sample, args);
      return cmd_sample(smp, common, m);
    }
    if (project_cmd->parsed()) {
      Manifest m("project", project_cmd, args);
      return cmd_project(project_in, common, m);
    }
    if (synth_planted->parsed()) {
      Manifest m("synth planted", synth_planted, args);
      return cmd_synth_planted(planted, common, m);
    }
    if (synth_exp->parsed()) {
      Manifest m("synth experiment", synth_exp, args);
      return cmd_synth_experiment(exp, common, m);
    }
    if (bipartite->parsed()) {
      Manifest m("bipartite", bipartite, args);
      return cmd_bipartite(bip, common, m);
    }
    if (eval->parsed()) {
      Manifest m("eval", eval, args);
      return cmd_eval(eval_a, eval_b, common, m);
    }
    if (cliques->parsed()) {
      Manifest m("cliques", cliques, args);
      return cmd_cliques(cliques_in, common, m);
    }
    if (dl->parsed()) {
      Manifest m("dl", dl, args);
      return cmd_dl(dl_graph, dl_hyper, common, m);
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  std::cerr << app.help();
  return 2;
}
