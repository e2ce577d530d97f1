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

// Test-only oracles: exhaustive searches that share no code path with the
// matching, cover and condensing implementations they check.

#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <vector>

#include "marginnn/conflict_graph.hpp"
#include "marginnn/metric.hpp"
#include "marginnn/rng.hpp"

namespace marginnn::testing {

/// Exhaustive minimum vertex cover for graphs with at most 24 vertices.
///
/// Enumerates every subset X of the smaller side; covering the remaining
/// edges forces exactly the neighbors of (side \ X) on the other side.
inline VertexCover brute_force_min_cover(const ConflictGraph& g) {
  if (g.vertex_count() > 24) throw InputError("brute_force_min_cover: more than 24 vertices");
  const bool plus_small = g.plus_nodes().size() <= g.minus_nodes().size();
  const auto& small = plus_small ? g.plus_nodes() : g.minus_nodes();
  const auto& large = plus_small ? g.minus_nodes() : g.plus_nodes();
  auto pos = [](const std::vector<std::size_t>& side, std::size_t v) {
    return static_cast<std::size_t>(std::lower_bound(side.begin(), side.end(), v) - side.begin());
  };
  // neighbor mask (over the large side) of each small-side vertex
  std::vector<std::uint32_t> nbr(small.size(), 0);
  for (const auto& e : g.edges()) {
    const std::size_t s = plus_small ? e.plus : e.minus;
    const std::size_t l = plus_small ? e.minus : e.plus;
    nbr[pos(small, s)] |= std::uint32_t{1} << pos(large, l);
  }
  std::uint32_t best_x = 0, best_y = 0;
  int best = 1 << 30;
  const std::uint32_t subsets = std::uint32_t{1} << small.size();
  for (std::uint32_t x = 0; x < subsets; ++x) {
    std::uint32_t y = 0;
    for (std::size_t i = 0; i < small.size(); ++i) {
      if (!(x >> i & 1U)) y |= nbr[i];
    }
    const int size = std::popcount(x) + std::popcount(y);
    if (size < best) {
      best = size;
      best_x = x;
      best_y = y;
    }
  }
  VertexCover cover{{}, true};
  for (std::size_t i = 0; i < small.size(); ++i) {
    if (best_x >> i & 1U) cover.vertices.push_back(small[i]);
  }
  for (std::size_t j = 0; j < large.size(); ++j) {
    if (best_y >> j & 1U) cover.vertices.push_back(large[j]);
  }
  std::sort(cover.vertices.begin(), cover.vertices.end());
  return cover;
}

/// Maximum matching size by exhaustive recursion over edges (tiny graphs only).
inline std::size_t brute_force_matching_size(const ConflictGraph& g) {
  const auto& edges = g.edges();
  std::size_t max_index = 0;
  for (auto v : g.plus_nodes()) max_index = std::max(max_index, v + 1);
  for (auto v : g.minus_nodes()) max_index = std::max(max_index, v + 1);
  std::vector<char> used(max_index, 0);
  std::size_t best = 0;
  auto rec = [&](auto&& self, std::size_t k, std::size_t size) -> void {
    best = std::max(best, size);
    if (k == edges.size()) return;
    if (size + (edges.size() - k) <= best) return;
    const auto& e = edges[k];
    if (!used[e.plus] && !used[e.minus]) {
      used[e.plus] = used[e.minus] = 1;
      self(self, k + 1, size + 1);
      used[e.plus] = used[e.minus] = 0;
    }
    self(self, k + 1, size);
  };
  rec(rec, 0, 0);
  return best;
}

/// True when an augmenting path exists for `m` in `g` (plain BFS over
/// alternating paths, one pass from all free plus vertices).
inline bool has_augmenting_path(const ConflictGraph& g, const Matching& m) {
  std::size_t max_index = 0;
  for (auto v : g.plus_nodes()) max_index = std::max(max_index, v + 1);
  for (auto v : g.minus_nodes()) max_index = std::max(max_index, v + 1);
  std::vector<std::size_t> mate(max_index, SIZE_MAX);
  for (auto [p, q] : m.pairs) {
    mate[p] = q;
    mate[q] = p;
  }
  std::vector<std::vector<std::size_t>> adj(max_index);
  for (const auto& e : g.edges()) adj[e.plus].push_back(e.minus);
  std::vector<char> seen(max_index, 0);
  std::deque<std::size_t> queue;
  for (auto p : g.plus_nodes()) {
    if (mate[p] == SIZE_MAX) {
      seen[p] = 1;
      queue.push_back(p);
    }
  }
  while (!queue.empty()) {
    const auto p = queue.front();
    queue.pop_front();
    for (auto q : adj[p]) {
      if (seen[q]) continue;
      seen[q] = 1;
      if (mate[q] == SIZE_MAX) return true;
      if (!seen[mate[q]]) {
        seen[mate[q]] = 1;
        queue.push_back(mate[q]);
      }
    }
  }
  return false;
}

/// Smallest number of points whose removal leaves every opposite-labeled
/// pair at distance >= gamma, by enumerating all retained subsets (n <= 16).
inline std::size_t exhaustive_min_removal(const LabeledSample& s, double gamma) {
  const std::size_t n = s.size();
  if (n > 16) throw InputError("exhaustive_min_removal: n too large");
  std::vector<std::uint32_t> conflicts(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (s.label(i) != s.label(j) && s.distance(i, j) < gamma) conflicts[i] |= 1U << j;
    }
  }
  std::size_t best_keep = 0;
  for (std::uint32_t keep = 0; keep < (1U << n); ++keep) {
    const auto size = static_cast<std::size_t>(std::popcount(keep));
    if (size <= best_keep) continue;
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      if ((keep >> i & 1U) && (conflicts[i] & keep)) ok = false;
    }
    if (ok) best_keep = size;
  }
  return n - best_keep;
}

/// Random bipartite graph on `plus + minus` vertices with edge probability p.
/// Plus vertices get sample indices 0..plus-1, minus vertices the rest.
inline ConflictGraph random_bipartite(SplitMix64& rng, std::size_t plus, std::size_t minus,
                                      double p) {
  std::vector<std::size_t> pn(plus), mn(minus);
  for (std::size_t i = 0; i < plus; ++i) pn[i] = i;
  for (std::size_t j = 0; j < minus; ++j) mn[j] = plus + j;
  std::vector<Edge> edges;
  for (auto a : pn) {
    for (auto b : mn) {
      if (rng.uniform() < p) edges.push_back({a, b, rng.uniform()});
    }
  }
  return ConflictGraph(pn, mn, edges, 1.0);
}

/// Random labeled sample in [0,1]^dim, Euclidean, already normalized.
inline LabeledSample random_sample(SplitMix64& rng, std::size_t n, std::size_t dim,
                                   double plus_rate = 0.5) {
  std::vector<LabeledPoint> raw;
  for (std::size_t i = 0; i < n; ++i) {
    Point x(dim);
    for (auto& c : x) c = rng.uniform();
    raw.push_back({std::move(x), rng.uniform() < plus_rate ? Label::Plus : Label::Minus});
  }
  return normalize_sample(raw, MetricSpec::euclidean(static_cast<double>(dim)));
}

}  // namespace marginnn::testing
