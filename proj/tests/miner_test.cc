#include "eegl/miner.h"

#include <random>

#include <gtest/gtest.h>

#include "eegl/error.h"
#include "eegl/subiso.h"
#include "oracles.h"

namespace eegl {
namespace {

RootedGraph star3() { return RootedGraph(build_graph(4, {{0, 1}, {0, 2}, {0, 3}}), 0); }

std::set<std::uint64_t> keys(const FrequentPatternSet& fs) {
  std::set<std::uint64_t> out;
  for (const auto& p : fs.patterns) out.insert(oracle::rooted_key(p.pattern.graph(), p.pattern.root()));
  return out;
}

TEST(MinerTest, MinSupportRounding) {
  EXPECT_EQ(min_support(0.7, 10), 7);
  EXPECT_EQ(min_support(0.3, 10), 3);
  EXPECT_EQ(min_support(1.0, 3), 3);
  EXPECT_EQ(min_support(0.5, 3), 2);
}

TEST(MinerTest, StarCopiesGiveAllRootedSubtrees) {
  ExplanationDB db;
  for (int i = 0; i < 4; ++i) db.graphs.emplace_back(star3());
  FrequentPatternSet fs = mine_frequent(db, 1.0);
  ASSERT_EQ(fs.patterns.size(), 4u);
  for (int k = 0; k < 4; ++k) {
    EXPECT_EQ(fs.patterns[k].pattern.num_edges(), k);
    EXPECT_EQ(fs.patterns[k].support, 4);
  }
  FrequentPatternSet mx = maximal_filter(fs);
  ASSERT_EQ(mx.patterns.size(), 1u);
  EXPECT_EQ(mx.patterns[0].pattern.num_edges(), 3);
}

TEST(MinerTest, TriangleAndEdge) {
  ExplanationDB db;
  db.graphs.emplace_back(RootedGraph(build_graph(3, {{0, 1}, {1, 2}, {2, 0}}), 0));
  db.graphs.emplace_back(RootedGraph(build_graph(2, {{0, 1}}), 1));
  FrequentPatternSet fs = mine_frequent(db, 1.0);
  ASSERT_EQ(fs.patterns.size(), 2u);
  EXPECT_EQ(fs.patterns[0].pattern.num_nodes(), 1);
  EXPECT_EQ(fs.patterns[1].pattern.num_edges(), 1);
}

TEST(MinerTest, RootlessEntriesCountInDenominator) {
  ExplanationDB db;
  db.graphs.emplace_back(star3());
  db.graphs.emplace_back(std::nullopt);
  EXPECT_TRUE(mine_frequent(db, 1.0).patterns.empty());
  FrequentPatternSet half = mine_frequent(db, 0.5);
  EXPECT_EQ(half.patterns.size(), 4u);
  EXPECT_EQ(half.patterns[0].support, 1);
  EXPECT_EQ(half.m, 2);
}

TEST(MinerTest, Errors) {
  ExplanationDB empty;
  EXPECT_THROW(mine_frequent(empty, 0.5), Error);
  ExplanationDB db;
  db.graphs.emplace_back(star3());
  EXPECT_THROW(mine_frequent(db, 0.0), Error);
  EXPECT_THROW(mine_frequent(db, 1.5), Error);
}

TEST(MinerTest, NodeCapTruncates) {
  ExplanationDB db;
  db.graphs.emplace_back(star3());
  FrequentPatternSet fs = mine_frequent(db, 1.0, {.max_pattern_nodes = 2});
  EXPECT_EQ(fs.patterns.size(), 2u);
}

TEST(MaximalFilterTest, Examples) {
  ExplanationDB db;
  db.graphs.emplace_back(RootedGraph(build_graph(3, {{0, 1}, {1, 2}, {2, 0}}), 0));
  // A 3-edge path from the root; the path on 3 nodes would embed in the triangle.
  db.graphs.emplace_back(RootedGraph(build_graph(4, {{0, 1}, {1, 2}, {2, 3}}), 0));
  FrequentPatternSet fs;
  for (const auto& e : db.graphs) {
    RootedPattern p(e->graph(), e->root());
    fs.patterns.push_back({p, canonical_code(p), 1});
  }
  EXPECT_EQ(maximal_filter(fs).patterns.size(), 2u);
  FrequentPatternSet one;
  one.patterns.push_back(fs.patterns[0]);
  EXPECT_EQ(maximal_filter(one).patterns.size(), 1u);
}

TEST(MinerTest, MatchesExhaustiveOracle) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    ExplanationDB db;
    const int size = 1 + static_cast<int>(rng() % 10);
    for (int i = 0; i < size; ++i) {
      int n = 1 + static_cast<int>(rng() % 6);
      Graph g = oracle::random_connected_graph(rng, n, 0.2);
      db.graphs.emplace_back(RootedGraph(g, static_cast<NodeId>(rng() % n)));
    }
    if (trial % 7 == 0) db.graphs.emplace_back(std::nullopt);
    for (double tau : {0.3, 0.7, 1.0}) {
      FrequentPatternSet fs = mine_frequent(db, tau);
      oracle::BruteMined brute = oracle::brute_mine(db.graphs, tau);
      std::map<std::uint64_t, int> got;
      for (const auto& p : fs.patterns)
        got.emplace(oracle::rooted_key(p.pattern.graph(), p.pattern.root()), p.support);
      ASSERT_EQ(got, brute.frequent) << "trial " << trial << " tau " << tau;
      EXPECT_EQ(keys(maximal_filter(fs)), brute.maximal);
      // The pairwise path must agree with the downward-closed shortcut.
      FrequentPatternSet generic = fs;
      generic.downward_closed = false;
      EXPECT_EQ(keys(maximal_filter(generic)), brute.maximal);
      // Anti-monotone: every frequent pattern's sub-patterns are frequent.
      for (const auto& p : fs.patterns)
        for (auto& sub : oracle::connected_rooted_subgraphs(p.pattern.graph(), p.pattern.root()))
          EXPECT_TRUE(got.count(oracle::rooted_key(sub.graph, sub.root)));
    }
  }
}

TEST(MinerTest, DeterministicUnderDbPermutation) {
  std::mt19937_64 rng(2);
  ExplanationDB db;
  for (int i = 0; i < 8; ++i) {
    Graph g = oracle::random_connected_graph(rng, 5, 0.3);
    db.graphs.emplace_back(RootedGraph(g, 0));
  }
  FrequentPatternSet a = mine_frequent(db, 0.5);
  std::reverse(db.graphs.begin(), db.graphs.end());
  FrequentPatternSet b = mine_frequent(db, 0.5);
  ASSERT_EQ(a.patterns.size(), b.patterns.size());
  for (size_t i = 0; i < a.patterns.size(); ++i) {
    EXPECT_EQ(a.patterns[i].code, b.patterns[i].code);
    EXPECT_EQ(a.patterns[i].pattern.graph(), b.patterns[i].pattern.graph());
  }
}

TEST(RootEncodingTest, RoundTrip) {
  Graph e = encode_root_as_attr(RootedGraph(build_graph(2, {{0, 1}}), 0));
  EXPECT_EQ(e.attrs(), (std::vector<int>{1, 0}));
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    int n = 1 + static_cast<int>(rng() % 8);
    RootedGraph g(oracle::random_graph(rng, n, 0.4), static_cast<NodeId>(rng() % n));
    RootedGraph back = decode_root_attr(encode_root_as_attr(g));
    EXPECT_EQ(back.graph(), g.graph());
    EXPECT_EQ(back.root(), g.root());
  }
  EXPECT_THROW(decode_root_attr(build_graph(2, {{0, 1}}).with_attrs({1, 1})), Error);
  EXPECT_THROW(decode_root_attr(build_graph(2, {{0, 1}})), Error);
}

}  // namespace
}  // namespace eegl
