#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int status = -1;
  std::string out;
};

fs::path tmp_dir() {
  fs::path d = HYPERRECON_TEST_TMP;
  fs::create_directories(d);
  return d;
}

fs::path write(const std::string& name, const std::string& text) {
  const fs::path p = tmp_dir() / name;
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Runs the CLI with stderr discarded and returns stdout.
Result run(const std::string& args) {
  const std::string cmd = std::string("\"") + HYPERRECON_CLI + "\" " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

json run_json(const std::string& args, const fs::path& out) {
  const Result r = run(args + " --json -o \"" + out.string() + "\"");
  EXPECT_EQ(r.status, 0) << args;
  return json::parse(r.out);
}

const char* kTriangle = "a b\nb c\na c\n";

}  // namespace

TEST(Cli, ReconstructTriangle) {
  const auto g = write("tri.txt", kTriangle);
  const auto out = tmp_dir() / "tri.hyper";
  const json j = run_json("reconstruct \"" + g.string() + "\" --sweeps 200", out);
  const double mu = 1.5;
  EXPECT_NEAR(j["sigma_bits"].get<double>(), -std::log2(mu / std::pow(1 + mu, 3)), 1e-9);
  EXPECT_EQ(j["config"]["N"], 3);
  EXPECT_EQ(j["config"]["L"], 3);
  EXPECT_EQ(slurp(out), "a b c\n");

  const json manifest = json::parse(slurp(out.string() + ".manifest.json"));
  EXPECT_EQ(manifest["command"], "reconstruct");
  EXPECT_EQ(manifest["seed"], 1);
  EXPECT_TRUE(manifest.contains("wall_time_seconds"));
  EXPECT_EQ(manifest["flags"]["sweeps"], "200");
}

TEST(Cli, DescriptionLengthMatchesBaseline) {
  const auto g = write("bowtie.txt", "a b\nb c\na c\nc d\nd e\nc e\ne f\n");
  const auto cliques = tmp_dir() / "bowtie.cliques";
  ASSERT_EQ(run("cliques \"" + g.string() + "\" -o \"" + cliques.string() + "\"").status, 0);
  EXPECT_EQ(slurp(cliques), "a b c\nc d e\ne f\n");
  const json rec = run_json("reconstruct \"" + g.string() + "\" --sweeps 50", tmp_dir() / "bowtie.hyper");
  const Result dl = run("dl \"" + g.string() + "\" \"" + cliques.string() + "\"");
  ASSERT_EQ(dl.status, 0);
  EXPECT_NEAR(std::stod(dl.out), rec["baseline_bits"].get<double>(), 1e-5);
}

TEST(Cli, EvalIdenticalIsOne) {
  const auto a = write("eval_a.hyper", "x y z\n2: y w\n");
  const auto b = write("eval_b.hyper", "w y\nx y z\n");
  const Result r = run("eval \"" + a.string() + "\" \"" + b.string() + "\"");
  ASSERT_EQ(r.status, 0);
  EXPECT_DOUBLE_EQ(std::stod(r.out), 1.0);
}

TEST(Cli, PlantedIsDeterministic) {
  const Result a = run("synth planted --sizes 3,4 --noise 2 --seed 9");
  const Result b = run("synth planted --sizes 3,4 --noise 2 --seed 9");
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 4);
  EXPECT_NE(run("synth planted --sizes 3,4 --noise 2 --seed 10").out, a.out);
}

TEST(Cli, ErrorsGiveNonzeroExit) {
  EXPECT_NE(run("").status, 0);
  EXPECT_NE(run("reconstruct").status, 0);
  EXPECT_NE(run("reconstruct /nonexistent/graph.txt").status, 0);
  const auto bad = write("bad.txt", "a b\nc\n");
  EXPECT_EQ(run("reconstruct \"" + bad.string() + "\"").status, 2);
  EXPECT_NE(run("sample \"" + bad.string() + "\" --alpha 0.7").status, 0);
}

TEST(Cli, EdgelessGraphHasZeroSigma) {
  const auto g = write("empty.txt", "# nodes: p q r\n");
  const auto out = tmp_dir() / "empty.hyper";
  const json j = run_json("reconstruct \"" + g.string() + "\"", out);
  EXPECT_EQ(j["sigma_bits"].get<double>(), 0.0);
  EXPECT_EQ(slurp(out), "");
}

TEST(Cli, SampleSingleEdge) {
  const auto g = write("edge.txt", "u v\n");
  const auto out = tmp_dir() / "edge.csv";
  const json j = run_json("sample \"" + g.string() + "\" --burn-in 10 --thin 1 --samples 200 --chains 2", out);
  EXPECT_EQ(j["samples"], 400);
  EXPECT_EQ(slurp(out), "size,nodes,probability,entropy,classification\n2,u;v,1,0,certain-present\n");
}

TEST(Cli, HalfAlphaLeavesNothingUncertain) {
  const auto g = write("k4.txt", "a b\na c\na d\nb c\nb d\nc d\n");
  const json j = run_json("sample \"" + g.string() + "\" --burn-in 20 --thin 1 --samples 300 --alpha 0.5",
                          tmp_dir() / "k4.csv");
  EXPECT_EQ(j["uncertain_edges"], 0);
  EXPECT_EQ(j["uncertain_triangles"], 0);
  EXPECT_EQ(j["uncertain_higher"], 0);
  EXPECT_GT(j["certain_present"].get<int>(), 0);
}

TEST(Cli, ProjectRoundTrip) {
  const auto h = write("proj.hyper", "a b c\nc d\n");
  const Result r = run("project \"" + h.string() + "\"");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "a b\na c\nb c\nc d\n");
}
