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

// Bipartite conflict graph between opposite-labeled points, maximum
// matching (Hopcroft-Karp), the Koenig cover built from it, and the greedy
// both-endpoints cover.
//
// Vertices are identified by their sample index. Edges are kept sorted by
// (distance, plus index, minus index); that order drives the greedy cover,
// so the greedy cover at gamma is the state of a single scan stopped at the
// first edge whose distance reaches gamma.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "marginnn/error.hpp"
#include "marginnn/metric.hpp"

namespace marginnn {

struct Edge {
  std::size_t plus;   // sample index of the +1 endpoint
  std::size_t minus;  // sample index of the -1 endpoint
  double distance = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

inline bool edge_scan_order(const Edge& a, const Edge& b) noexcept {
  return std::tie(a.distance, a.plus, a.minus) < std::tie(b.distance, b.plus, b.minus);
}

class ConflictGraph {
 public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  ConflictGraph() = default;

  /// Explicit construction; edges are re-sorted into scan order.
  ConflictGraph(std::vector<std::size_t> plus_nodes, std::vector<std::size_t> minus_nodes,
                std::vector<Edge> edges, double gamma)
      : plus_(std::move(plus_nodes)),
        minus_(std::move(minus_nodes)),
        edges_(std::move(edges)),
        gamma_(gamma) {
    std::sort(plus_.begin(), plus_.end());
    std::sort(minus_.begin(), minus_.end());
    std::size_t max_index = 0;
    for (auto v : plus_) max_index = std::max(max_index, v + 1);
    for (auto v : minus_) max_index = std::max(max_index, v + 1);
    local_.assign(max_index, npos);
    for (std::size_t a = 0; a < plus_.size(); ++a) local_[plus_[a]] = a;
    for (std::size_t b = 0; b < minus_.size(); ++b) {
      if (local_[minus_[b]] != npos) throw InputError("vertex on both sides of a bipartite graph");
      local_[minus_[b]] = b;
    }
    std::sort(edges_.begin(), edges_.end(), edge_scan_order);
    edges_.erase(std::unique(edges_.begin(), edges_.end(),
                             [](const Edge& x, const Edge& y) {
                               return x.plus == y.plus && x.minus == y.minus;
                             }),
                 edges_.end());
    adjacency_.assign(plus_.size(), {});
    for (const auto& e : edges_) {
      if (!is_plus(e.plus) || !is_minus(e.minus)) {
        throw InputError("edge endpoint is not on the expected side");
      }
      adjacency_[local_[e.plus]].push_back(local_[e.minus]);
    }
    for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
  }

  const std::vector<std::size_t>& plus_nodes() const noexcept { return plus_; }
  const std::vector<std::size_t>& minus_nodes() const noexcept { return minus_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  double gamma() const noexcept { return gamma_; }
  std::size_t vertex_count() const noexcept { return plus_.size() + minus_.size(); }

  /// Minus-side local indices adjacent to plus-side local index a, ascending.
  const std::vector<std::size_t>& adjacent(std::size_t a) const { return adjacency_[a]; }

  std::size_t local_index(std::size_t sample_index) const { return local_.at(sample_index); }

  bool is_plus(std::size_t v) const noexcept {
    return v < local_.size() && local_[v] != npos && local_[v] < plus_.size() &&
           plus_[local_[v]] == v;
  }
  bool is_minus(std::size_t v) const noexcept {
    return v < local_.size() && local_[v] != npos && local_[v] < minus_.size() &&
           minus_[local_[v]] == v;
  }

 private:
  std::vector<std::size_t> plus_;
  std::vector<std::size_t> minus_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<std::size_t> local_;
  double gamma_ = 0.0;
};

struct Matching {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (plus, minus) sample indices
  std::size_t size() const noexcept { return pairs.size(); }
};

struct VertexCover {
  std::vector<std::size_t> vertices;  // sample indices, ascending
  bool exact = false;
  std::size_t size() const noexcept { return vertices.size(); }
};

/// All opposite-labeled pairs at normalized distance strictly below gamma.
inline ConflictGraph build_conflict_graph(const LabeledSample& s, double gamma) {
  if (!(gamma > 0.0)) throw InputError("gamma must be positive");
  std::vector<std::size_t> plus, minus;
  for (std::size_t i = 0; i < s.size(); ++i) {
    (s.label(i) == Label::Plus ? plus : minus).push_back(i);
  }
  std::vector<Edge> edges;
  for (auto p : plus) {
    for (auto q : minus) {
      const double d = s.distance(p, q);
      if (d < gamma) edges.push_back({p, q, d});
    }
  }
  return ConflictGraph(std::move(plus), std::move(minus), std::move(edges), gamma);
}

/// Hopcroft-Karp. O(E sqrt(V)).
inline Matching maximum_matching(const ConflictGraph& g) {
  constexpr std::size_t kFree = ConflictGraph::npos;
  constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();
  const std::size_t left = g.plus_nodes().size();
  const std::size_t right = g.minus_nodes().size();
  std::vector<std::size_t> mate_left(left, kFree), mate_right(right, kFree);
  std::vector<std::size_t> layer(left);
  std::vector<std::size_t> cursor(left);

  auto bfs = [&]() {
    std::deque<std::size_t> queue;
    bool found = false;
    for (std::size_t a = 0; a < left; ++a) {
      if (mate_left[a] == kFree) {
        layer[a] = 0;
        queue.push_back(a);
      } else {
        layer[a] = kUnreached;
      }
    }
    while (!queue.empty()) {
      const std::size_t a = queue.front();
      queue.pop_front();
      for (std::size_t b : g.adjacent(a)) {
        const std::size_t next = mate_right[b];
        if (next == kFree) {
          found = true;
        } else if (layer[next] == kUnreached) {
          layer[next] = layer[a] + 1;
          queue.push_back(next);
        }
      }
    }
    return found;
  };

  // Iterative layered DFS along the BFS levels.
  auto dfs = [&](std::size_t root) {
    std::vector<std::size_t> stack{root};
    std::vector<std::size_t> via;  // right vertex used to leave stack[k]
    while (!stack.empty()) {
      const std::size_t a = stack.back();
      const auto& adj = g.adjacent(a);
      bool advanced = false;
      while (cursor[a] < adj.size()) {
        const std::size_t b = adj[cursor[a]++];
        const std::size_t next = mate_right[b];
        if (next == kFree) {
          via.push_back(b);
          for (std::size_t k = 0; k < stack.size(); ++k) {
            mate_left[stack[k]] = via[k];
            mate_right[via[k]] = stack[k];
          }
          return true;
        }
        if (layer[next] == layer[a] + 1) {
          via.push_back(b);
          stack.push_back(next);
          advanced = true;
          break;
        }
      }
      if (!advanced) {
        layer[a] = kUnreached;
        stack.pop_back();
        if (!via.empty()) via.pop_back();
      }
    }
    return false;
  };

  while (bfs()) {
    std::fill(cursor.begin(), cursor.end(), 0);
    for (std::size_t a = 0; a < left; ++a) {
      if (mate_left[a] == kFree) dfs(a);
    }
  }

  Matching m;
  for (std::size_t a = 0; a < left; ++a) {
    if (mate_left[a] != kFree) {
      m.pairs.emplace_back(g.plus_nodes()[a], g.minus_nodes()[mate_left[a]]);
    }
  }
  return m;
}

inline bool is_vertex_cover(const ConflictGraph& g, const std::vector<std::size_t>& vertices) {
  std::vector<std::size_t> sorted = vertices;
  std::sort(sorted.begin(), sorted.end());
  auto in = [&](std::size_t v) { return std::binary_search(sorted.begin(), sorted.end(), v); };
  return std::all_of(g.edges().begin(), g.edges().end(),
                     [&](const Edge& e) { return in(e.plus) || in(e.minus); });
}

/// Koenig construction: alternating search from unmatched plus vertices;
/// cover = (plus not reached) + (minus reached).
inline VertexCover koenig_cover(const ConflictGraph& g, const Matching& m) {
  constexpr std::size_t kFree = ConflictGraph::npos;
  const std::size_t left = g.plus_nodes().size();
  const std::size_t right = g.minus_nodes().size();
  std::vector<std::size_t> mate_left(left, kFree), mate_right(right, kFree);
  for (const auto& [p, q] : m.pairs) {
    const std::size_t a = g.local_index(p), b = g.local_index(q);
    if (mate_left[a] != kFree || mate_right[b] != kFree) {
      throw std::logic_error("koenig_cover: matching reuses a vertex");
    }
    mate_left[a] = b;
    mate_right[b] = a;
  }
  std::vector<char> seen_left(left, 0), seen_right(right, 0);
  std::deque<std::size_t> queue;
  for (std::size_t a = 0; a < left; ++a) {
    if (mate_left[a] == kFree) {
      seen_left[a] = 1;
      queue.push_back(a);
    }
  }
  while (!queue.empty()) {
    const std::size_t a = queue.front();
    queue.pop_front();
    for (std::size_t b : g.adjacent(a)) {
      if (seen_right[b] || mate_left[a] == b) continue;
      seen_right[b] = 1;
      const std::size_t next = mate_right[b];
      if (next != kFree && !seen_left[next]) {
        seen_left[next] = 1;
        queue.push_back(next);
      }
    }
  }
  VertexCover cover{{}, true};
  for (std::size_t a = 0; a < left; ++a) {
    if (!seen_left[a]) cover.vertices.push_back(g.plus_nodes()[a]);
  }
  for (std::size_t b = 0; b < right; ++b) {
    if (seen_right[b]) cover.vertices.push_back(g.minus_nodes()[b]);
  }
  std::sort(cover.vertices.begin(), cover.vertices.end());
  if (cover.size() != m.size() || !is_vertex_cover(g, cover.vertices)) {
    throw std::logic_error("koenig_cover: matching is not maximum for this graph");
  }
  return cover;
}

/// Scans edges in (distance, plus, minus) order and takes both endpoints of
/// every edge not yet covered. Within a factor 2 of the minimum cover.
inline VertexCover greedy_cover(const ConflictGraph& g) {
  std::vector<char> taken_plus(g.plus_nodes().size(), 0), taken_minus(g.minus_nodes().size(), 0);
  VertexCover cover{{}, false};
  for (const auto& e : g.edges()) {
    const std::size_t a = g.local_index(e.plus), b = g.local_index(e.minus);
    if (taken_plus[a] || taken_minus[b]) continue;
    taken_plus[a] = taken_minus[b] = 1;
    cover.vertices.push_back(e.plus);
    cover.vertices.push_back(e.minus);
  }
  std::sort(cover.vertices.begin(), cover.vertices.end());
  return cover;
}

/// Cover of size max-matching via Hopcroft-Karp and Koenig.
inline VertexCover minimum_cover(const ConflictGraph& g) {
  return koenig_cover(g, maximum_matching(g));
}

}  // namespace marginnn
