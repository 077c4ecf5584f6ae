#include "eegl/subiso.h"

#include <random>
#include <set>

#include <gtest/gtest.h>

#include "eegl/error.h"
#include "eegl/graph_io.h"
#include "oracles.h"

namespace eegl {
namespace {

Graph cycle(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) edges.push_back(make_edge(i, (i + 1) % n));
  return build_graph(n, edges);
}

TEST(SubIsoTest, Basics) {
  Graph tri = cycle(3);
  Graph c4 = cycle(4);
  Graph k4 = build_graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  EXPECT_TRUE(sub_iso(tri, k4));
  EXPECT_FALSE(sub_iso(tri, c4));
  // Monomorphism, not induced: C4 sits inside K4.
  EXPECT_TRUE(sub_iso(c4, k4));
  EXPECT_FALSE(sub_iso(k4, c4));
}

TEST(SubIsoTest, RootedRespectsRoot) {
  // Path 0-1-2 rooted at the center vs rooted at an end.
  RootedPattern center(build_graph(3, {{0, 1}, {1, 2}}), 1);
  RootedPattern end(build_graph(3, {{0, 1}, {1, 2}}), 0);
  Graph pendant = build_graph(3, {{0, 1}, {1, 2}});
  EXPECT_TRUE(rooted_sub_iso(center, pendant, 1));
  EXPECT_FALSE(rooted_sub_iso(center, pendant, 0));
  EXPECT_TRUE(rooted_sub_iso(end, pendant, 0));
  EXPECT_FALSE(rooted_sub_iso(end, pendant, 1));
  RootedPattern single(build_graph(1, std::vector<Edge>{}), 0);
  EXPECT_TRUE(rooted_sub_iso(single, pendant, 2));
}

TEST(SubIsoTest, AttrsOnlyWhenRequested) {
  Graph p = build_graph(2, {{0, 1}}).with_attrs({1, 2});
  Graph t = build_graph(2, {{0, 1}}).with_attrs({1, 3});
  RootedPattern rp(p, 0);
  EXPECT_TRUE(rooted_sub_iso(rp, t, 0));
  EXPECT_FALSE(rooted_sub_iso(rp, t, 0, MatchOptions{.respect_attrs = true}));
}

TEST(SubIsoTest, AgreesWithEnumerationOracle) {
  std::mt19937_64 rng(99);
  int positives = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    int pn = 1 + static_cast<int>(rng() % 5);
    int tn = pn + static_cast<int>(rng() % 4);
    Graph p = oracle::random_connected_graph(rng, pn, 0.3);
    Graph t = oracle::random_graph(rng, tn, 0.35 + 0.1 * (trial % 4));
    bool use_attrs = trial % 5 == 0;
    if (use_attrs) {
      std::vector<int> pa(pn), ta(tn);
      for (int& a : pa) a = static_cast<int>(rng() % 2);
      for (int& a : ta) a = static_cast<int>(rng() % 2);
      p = p.with_attrs(pa);
      t = t.with_attrs(ta);
    }
    MatchOptions opt{.respect_attrs = use_attrs};
    NodeId pr = static_cast<NodeId>(rng() % pn);
    NodeId tr = static_cast<NodeId>(rng() % tn);
    bool expect = oracle::embeds(p, pr, t, tr, use_attrs);
    positives += expect;
    ASSERT_EQ(rooted_sub_iso(RootedPattern(p, pr), t, tr, opt), expect)
        << graph_to_text(p) << "root " << pr << "\n" << graph_to_text(t) << "root " << tr;
    ASSERT_EQ(sub_iso(p, t, opt), oracle::embeds(p, std::nullopt, t, std::nullopt, use_attrs));
  }
  EXPECT_GT(positives, 100);
  EXPECT_LT(positives, 900);
}

TEST(SubIsoTest, EmbeddingIsValid) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    Graph p = oracle::random_connected_graph(rng, 4, 0.2);
    Graph t = oracle::random_graph(rng, 8, 0.5);
    Matcher m(p, 0);
    for (NodeId r = 0; r < 8; ++r) {
      auto img = m.embedding_at(t, r);
      EXPECT_EQ(img.has_value(), m.matches_at(t, r));
      if (!img) continue;
      EXPECT_EQ((*img)[0], r);
      std::set<NodeId> distinct(img->begin(), img->end());
      EXPECT_EQ(distinct.size(), img->size());
      for (const Edge& e : p.edges()) EXPECT_TRUE(t.has_edge((*img)[e.u], (*img)[e.v]));
    }
  }
}

TEST(SubIsoTest, BudgetThrows) {
  // K7 into the 6-partite Turan graph: no embedding, large search tree.
  std::vector<Edge> k;
  for (int a = 0; a < 7; ++a)
    for (int b = a + 1; b < 7; ++b) k.push_back(Edge{a, b});
  Graph k7 = build_graph(7, k);
  std::vector<Edge> turan;
  for (int a = 0; a < 30; ++a)
    for (int b = a + 1; b < 30; ++b)
      if (a % 6 != b % 6) turan.push_back(Edge{a, b});
  Graph t = build_graph(30, turan);
  EXPECT_THROW(sub_iso(k7, t, MatchOptions{.max_expansions = 1000}), Error);
}

TEST(SupportTest, CountsRootlessEntriesInDenominator) {
  RootedPattern edge(build_graph(2, {{0, 1}}), 0);
  std::vector<std::optional<RootedGraph>> db;
  db.emplace_back(RootedGraph(build_graph(2, {{0, 1}}), 0));
  db.emplace_back(RootedGraph(build_graph(1, std::vector<Edge>{}), 0));
  db.emplace_back(std::nullopt);
  db.emplace_back(RootedGraph(cycle(3), 2));
  Support s = support_count(edge, db);
  EXPECT_EQ(s.support, 2);
  EXPECT_EQ(s.m, 4);
}

}  // namespace
}  // namespace eegl
