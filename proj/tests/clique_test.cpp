#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <set>

#include "hyperrecon/clique.hpp"
#include "hyperrecon/random.hpp"

using namespace hyperrecon;

namespace {

Graph random_graph(std::size_t n, double p, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Edge> edges;
  for (NodeId v = 1; v < n; ++v)
    for (NodeId u = 0; u < v; ++u)
      if (rng.uniform() < p) edges.push_back({u, v});
  return Graph(n, edges);
}

bool is_clique(const Graph& g, std::uint32_t mask) {
  for (NodeId a = 0; a < g.num_nodes(); ++a)
    for (NodeId b = a + 1; b < g.num_nodes(); ++b)
      if ((mask >> a & 1u) && (mask >> b & 1u) && !g.has_edge(a, b)) return false;
  return true;
}

// Maximal cliques by checking every node subset.
std::vector<NodeSet> brute_force_maximal(const Graph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<NodeSet> out;
  for (std::uint32_t s = 0; s < (1u << n); ++s) {
    if (std::popcount(s) < 2 || !is_clique(g, s)) continue;
    bool maximal = true;
    for (NodeId v = 0; v < n && maximal; ++v)
      if (!(s >> v & 1u) && is_clique(g, s | (1u << v))) maximal = false;
    if (!maximal) continue;
    NodeSet c;
    for (NodeId v = 0; v < n; ++v)
      if (s >> v & 1u) c.push_back(v);
    out.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(MaximalCliques, FiveNodeExample) {
  // Nodes 1..5 become ids 0..4: edges 12 13 23 24 34 45.
  const Graph g = parse_edge_list("1 2\n1 3\n2 3\n2 4\n3 4\n4 5\n");
  const auto cliques = maximal_cliques(g);
  const std::vector<NodeSet> expected{{0, 1, 2}, {1, 2, 3}, {3, 4}};
  EXPECT_EQ(cliques, expected);
}

TEST(MaximalCliques, MatchesBruteForce) {
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    const std::size_t n = 2 + seed % 7;
    const double p = 0.2 + 0.1 * static_cast<double>(seed % 7);
    const Graph g = random_graph(n, p, seed);
    EXPECT_EQ(maximal_cliques(g), brute_force_maximal(g)) << "seed " << seed;
  }
}

TEST(MaximalCliques, SpecialCases) {
  EXPECT_TRUE(maximal_cliques(Graph(0, {})).empty());
  EXPECT_TRUE(maximal_cliques(Graph(4, {})).empty());
  std::vector<Edge> k6;
  for (NodeId v = 1; v < 6; ++v)
    for (NodeId u = 0; u < v; ++u) k6.push_back({u, v});
  EXPECT_EQ(maximal_cliques(Graph(6, k6)), (std::vector<NodeSet>{{0, 1, 2, 3, 4, 5}}));
}

TEST(MaximalCliques, ResourceLimits) {
  // Complete tripartite K_{3,3,3}: 3^3 maximal triangles.
  std::vector<Edge> edges;
  for (NodeId v = 1; v < 9; ++v)
    for (NodeId u = 0; u < v; ++u)
      if (u / 3 != v / 3) edges.push_back({u, v});
  const Graph g(9, edges);
  EXPECT_EQ(maximal_cliques(g).size(), 27u);
  EXPECT_THROW(maximal_cliques(g, {26, 64}), ResourceError);
  EXPECT_THROW(maximal_cliques(g, {1000, 2}), ResourceError);
  EXPECT_NO_THROW(maximal_cliques(g, {27, 3}));
}

TEST(Binomial, Table) {
  EXPECT_EQ(binomial(5, 2), 10u);
  EXPECT_EQ(binomial(5, 0), 1u);
  EXPECT_EQ(binomial(5, 6), 0u);
  EXPECT_EQ(binomial(64, 32), 1832624140942590534ULL);
}

TEST(Subfactor, EnumeratesAllSubsetsInOrder) {
  const NodeSet factor{2, 5, 7, 11, 13};
  for (unsigned k = 2; k <= 5; ++k) {
    std::vector<NodeSet> keys;
    for (std::uint64_t i = 0; i < binomial(5, k); ++i) keys.push_back(subfactor_key(factor, k, i));
    EXPECT_TRUE(std::is_sorted(keys.begin(), keys.end()));
    EXPECT_EQ(std::set<NodeSet>(keys.begin(), keys.end()).size(), keys.size());
    for (const auto& key : keys) {
      EXPECT_EQ(key.size(), k);
      EXPECT_TRUE(std::includes(factor.begin(), factor.end(), key.begin(), key.end()));
    }
  }
  EXPECT_EQ(subfactor_key(factor, 3, 0), (NodeSet{2, 5, 7}));
  EXPECT_EQ(subfactor_key(factor, 3, 9), (NodeSet{7, 11, 13}));
  EXPECT_THROW(subfactor_key(factor, 3, 10), std::logic_error);
  EXPECT_THROW(subfactor_key(factor, 6, 0), std::logic_error);
  EXPECT_THROW(subfactor_key(factor, 1, 0), std::logic_error);
}

TEST(FactorGraph, CoverageAndLazyActivation) {
  const Graph g = parse_edge_list("1 2\n1 3\n2 3\n2 4\n3 4\n4 5\n");
  FactorGraph fg(g);
  EXPECT_EQ(fg.num_maximal(), 3u);
  EXPECT_TRUE(fg.active().empty());
  EXPECT_EQ(fg.num_uncovered(), 6u);
  // Edge 2-3 (ids 1, 2) lies in both triangles.
  EXPECT_EQ(fg.factors_of_edge(*g.edge_id(1, 2)).size(), 2u);

  for (const auto& f : fg.maximal_factors()) fg.apply_delta(f, +1);
  EXPECT_TRUE(fg.is_fully_covered());
  EXPECT_EQ(fg.coverage(*g.edge_id(1, 2)), 2u);

  // A sub-clique appears only once activated.
  const NodeSet sub{1, 2};
  EXPECT_EQ(fg.multiplicity(sub), 0u);
  fg.apply_delta(sub, +1);
  fg.apply_delta(sub, +1);
  EXPECT_EQ(fg.multiplicity(sub), 2u);
  EXPECT_EQ(fg.active().size(), 4u);
  EXPECT_EQ(fg.coverage(*g.edge_id(1, 2)), 4u);
  fg.apply_delta(sub, -1);
  fg.apply_delta(sub, -1);
  EXPECT_EQ(fg.active().size(), 3u);
  EXPECT_EQ(fg.recount_coverage(), std::vector<std::uint64_t>(fg.coverage().begin(), fg.coverage().end()));

  EXPECT_TRUE(fg.removal_breaks_coverage(NodeSet{3, 4}));
  EXPECT_TRUE(fg.removal_breaks_coverage(NodeSet{0, 1, 2}));  // edges 1-2, 1-3 only here
  fg.apply_delta(NodeSet{0, 1}, +1);
  fg.apply_delta(NodeSet{0, 2}, +1);
  EXPECT_FALSE(fg.removal_breaks_coverage(NodeSet{0, 1, 2}));
  fg.apply_delta(NodeSet{0, 1, 2}, -1);
  EXPECT_TRUE(fg.is_fully_covered());
  fg.apply_delta(NodeSet{3, 4}, -1);
  EXPECT_FALSE(fg.is_fully_covered());
  EXPECT_EQ(fg.num_uncovered(), 1u);
}

TEST(FactorGraph, RejectsInvalidKeys) {
  const Graph g = parse_edge_list("1 2\n1 3\n2 3\n2 4\n3 4\n4 5\n");
  FactorGraph fg(g);
  EXPECT_THROW(fg.apply_delta(NodeSet{0, 3}, +1), std::logic_error);     // not an edge
  EXPECT_THROW(fg.apply_delta(NodeSet{0, 1, 3}, +1), std::logic_error);  // not a clique
  EXPECT_THROW(fg.apply_delta(NodeSet{1, 0}, +1), std::logic_error);     // not canonical
  EXPECT_THROW(fg.apply_delta(NodeSet{0}, +1), std::logic_error);
  EXPECT_THROW(fg.apply_delta(NodeSet{0, 1}, -1), std::logic_error);  // absent
  EXPECT_THROW(fg.apply_delta(NodeSet{0, 1}, 2), std::logic_error);
}
