// Copyright 2026 The marginnn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "marginnn/conflict_graph.hpp"

#include <set>
#include <vector>

#include "gtest/gtest.h"
#include "support/oracles.hpp"

namespace marginnn {
namespace {

using testing::brute_force_matching_size;
using testing::brute_force_min_cover;
using testing::has_augmenting_path;
using testing::random_bipartite;

LabeledSample four_point_line() {
  // +1@0.0, -1@0.5, +1@2.0, -1@3.0, scale 1
  std::vector<LabeledPoint> raw{{{0.0}, Label::Plus}, {{0.5}, Label::Minus},
                                {{2.0}, Label::Plus}, {{3.0}, Label::Minus}};
  return LabeledSample::from_points(raw, MetricSpec::euclidean(1.0));
}

ConflictGraph graph(std::size_t plus, std::size_t minus,
                    std::vector<std::pair<std::size_t, std::size_t>> pairs) {
  std::vector<std::size_t> pn, mn;
  for (std::size_t i = 0; i < plus; ++i) pn.push_back(i);
  for (std::size_t j = 0; j < minus; ++j) mn.push_back(plus + j);
  std::vector<Edge> edges;
  for (auto [a, b] : pairs) edges.push_back({a, b, 0.0});
  return ConflictGraph(pn, mn, edges, 1.0);
}

void expect_valid_matching(const ConflictGraph& g, const Matching& m) {
  std::set<std::size_t> used;
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& e : g.edges()) edges.insert({e.plus, e.minus});
  for (auto [p, q] : m.pairs) {
    EXPECT_TRUE(edges.count({p, q})) << "pair is not an edge";
    EXPECT_TRUE(used.insert(p).second);
    EXPECT_TRUE(used.insert(q).second);
  }
}

TEST(BuildConflictGraph, FourPointLineStrictInequality) {
  const auto g = build_conflict_graph(four_point_line(), 1.0);
  ASSERT_EQ(g.edges().size(), 1u);
  EXPECT_EQ(g.edges()[0].plus, 0u);
  EXPECT_EQ(g.edges()[0].minus, 1u);
  // dist(2.0, 3.0) == 1 is not < 1; slightly larger gamma admits it
  EXPECT_EQ(build_conflict_graph(four_point_line(), 1.0000001).edges().size(), 2u);
}

TEST(BuildConflictGraph, GammaBelowMarginHasNoEdges) {
  const auto s = four_point_line();
  EXPECT_TRUE(build_conflict_graph(s, margin(s)).edges().empty());
}

TEST(BuildConflictGraph, SingleLabelHasNoEdges) {
  std::vector<LabeledPoint> raw{{{0.0}, Label::Plus}, {{0.1}, Label::Plus}};
  const auto s = LabeledSample::from_points(raw, MetricSpec::euclidean(1.0));
  EXPECT_TRUE(build_conflict_graph(s, 100.0).edges().empty());
}

TEST(BuildConflictGraph, NonPositiveGammaIsInputError) {
  EXPECT_THROW(build_conflict_graph(four_point_line(), 0.0), InputError);
  EXPECT_THROW(build_conflict_graph(four_point_line(), -1.0), InputError);
}

TEST(BuildConflictGraph, EdgesAreExactlyCloseOppositePairs) {
  SplitMix64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const auto s = testing::random_sample(rng, 25, 2);
    const double gamma = 0.05 + 0.5 * rng.uniform();
    const auto g = build_conflict_graph(s, gamma);
    std::set<std::pair<std::size_t, std::size_t>> got;
    for (const auto& e : g.edges()) got.insert({e.plus, e.minus});
    std::set<std::pair<std::size_t, std::size_t>> want;
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (std::size_t j = 0; j < s.size(); ++j) {
        if (s.label(i) == Label::Plus && s.label(j) == Label::Minus && s.distance(i, j) < gamma) {
          want.insert({i, j});
        }
      }
    }
    EXPECT_EQ(got, want);
  }
}

TEST(MaximumMatching, StarHasSizeOne) {
  // one minus hub (index 3) adjacent to three plus nodes
  const auto g = graph(3, 1, {{0, 3}, {1, 3}, {2, 3}});
  EXPECT_EQ(brute_force_matching_size(g), 1u);
  EXPECT_EQ(maximum_matching(g).size(), 1u);
}

TEST(MaximumMatching, EmptyGraph) { EXPECT_EQ(maximum_matching(graph(2, 2, {})).size(), 0u); }

TEST(MaximumMatching, LadderOfDisjointEdges) {
  const auto g = graph(5, 5, {{0, 5}, {1, 6}, {2, 7}, {3, 8}, {4, 9}});
  EXPECT_EQ(maximum_matching(g).size(), 5u);
}

TEST(MaximumMatching, NeedsAugmentingPath) {
  // taking (0,2) first blocks plus 1; the maximum is {(0,3), (1,2)}
  const auto g = graph(2, 2, {{0, 2}, {0, 3}, {1, 2}});
  const auto m = maximum_matching(g);
  EXPECT_EQ(m.size(), 2u);
  expect_valid_matching(g, m);
}

TEST(KoenigCover, StarIsTheHub) {
  const auto g = graph(3, 1, {{0, 3}, {1, 3}, {2, 3}});
  const auto cover = koenig_cover(g, maximum_matching(g));
  EXPECT_EQ(cover.vertices, std::vector<std::size_t>{3});
  EXPECT_TRUE(cover.exact);
  EXPECT_EQ(brute_force_min_cover(g).size(), 1u);
}

TEST(KoenigCover, EmptyGraph) {
  const auto g = graph(2, 3, {});
  EXPECT_EQ(koenig_cover(g, maximum_matching(g)).size(), 0u);
}

TEST(KoenigCover, TwoDisjointEdges) {
  const auto g = graph(2, 2, {{0, 2}, {1, 3}});
  const auto cover = koenig_cover(g, maximum_matching(g));
  EXPECT_EQ(cover.size(), 2u);
  EXPECT_EQ(brute_force_min_cover(g).size(), 2u);
  EXPECT_TRUE(is_vertex_cover(g, cover.vertices));
}

TEST(KoenigCover, NonMaximumMatchingIsContractViolation) {
  const auto g = graph(2, 2, {{0, 2}, {1, 3}});
  Matching partial;
  partial.pairs = {{0, 2}};
  EXPECT_THROW(koenig_cover(g, partial), std::logic_error);
}

TEST(GreedyCover, EmptyGraph) { EXPECT_EQ(greedy_cover(graph(3, 3, {})).size(), 0u); }

TEST(GreedyCover, SingleEdge) {
  const auto cover = greedy_cover(graph(1, 1, {{0, 1}}));
  EXPECT_FALSE(cover.exact);
  EXPECT_LE(cover.size(), 2u);
  EXPECT_TRUE(is_vertex_cover(graph(1, 1, {{0, 1}}), cover.vertices));
}

TEST(GreedyCover, ScansByDistanceThenIndex) {
  // edge (1,3) is closest, so it is taken first and (0,3) is then covered
  std::vector<Edge> edges{{0, 3, 0.5}, {1, 3, 0.1}, {0, 2, 0.7}};
  const ConflictGraph g({0, 1}, {2, 3}, edges, 1.0);
  EXPECT_EQ(greedy_cover(g).vertices, (std::vector<std::size_t>{0, 1, 2, 3}));
  std::vector<Edge> edges2{{0, 3, 0.5}, {1, 3, 0.6}};
  const ConflictGraph g2({0, 1}, {2, 3}, edges2, 1.0);
  EXPECT_EQ(greedy_cover(g2).vertices, (std::vector<std::size_t>{0, 3}));
}

TEST(BruteForceMinCover, PathOfThree) {
  // plus 0 - minus 2 - plus 1
  EXPECT_EQ(brute_force_min_cover(graph(2, 1, {{0, 2}, {1, 2}})).vertices,
            std::vector<std::size_t>{2});
}

TEST(BruteForceMinCover, EmptyGraph) { EXPECT_EQ(brute_force_min_cover(graph(3, 2, {})).size(), 0u); }

TEST(BruteForceMinCover, CompleteK23) {
  const auto g = graph(2, 3, {{0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}});
  EXPECT_EQ(brute_force_min_cover(g).size(), 2u);
}

TEST(BruteForceMinCover, RejectsLargeGraphs) {
  EXPECT_THROW(brute_force_min_cover(graph(13, 12, {})), InputError);
}

// Koenig equality, cover validity, matching validity and maximality, greedy
// 2-approximation and determinism on random bipartite graphs.
TEST(CoverProperties, RandomBipartiteGraphs) {
  SplitMix64 rng(31337);
  for (int t = 0; t < 300; ++t) {
    const std::size_t plus = 1 + rng.below(12), minus = 1 + rng.below(12);
    const auto g = random_bipartite(rng, plus, minus, 0.05 + 0.6 * rng.uniform());
    const auto m = maximum_matching(g);
    expect_valid_matching(g, m);
    EXPECT_FALSE(has_augmenting_path(g, m));
    const auto cover = koenig_cover(g, m);
    const auto brute = brute_force_min_cover(g);
    EXPECT_EQ(cover.size(), m.size());
    EXPECT_EQ(brute.size(), m.size());
    EXPECT_TRUE(is_vertex_cover(g, cover.vertices));
    EXPECT_TRUE(is_vertex_cover(g, brute.vertices));
    const auto greedy = greedy_cover(g);
    EXPECT_TRUE(is_vertex_cover(g, greedy.vertices));
    EXPECT_LE(greedy.size(), 2 * cover.size());
    EXPECT_EQ(koenig_cover(g, maximum_matching(g)).vertices, cover.vertices);
    EXPECT_EQ(greedy_cover(g).vertices, greedy.vertices);
  }
}

TEST(GreedyCover, TwentyVertexGraphsWithinTwiceBruteForce) {
  SplitMix64 rng(20);
  for (int t = 0; t < 100; ++t) {
    const auto g = random_bipartite(rng, 10, 10, 0.3);
    EXPECT_LE(greedy_cover(g).size(), 2 * brute_force_min_cover(g).size());
  }
}

}  // namespace
}  // namespace marginnn
