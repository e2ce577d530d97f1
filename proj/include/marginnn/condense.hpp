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

// Condensing a sample to a gamma-separable subsample by removing a vertex
// cover of its conflict graph, plus the machinery to evaluate cover sizes
// at every candidate margin in a single pass.

#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <span>
#include <string_view>
#include <vector>

#include "marginnn/conflict_graph.hpp"
#include "marginnn/error.hpp"
#include "marginnn/metric.hpp"

namespace marginnn {

enum class CoverMode { Exact, Greedy };

inline std::string_view to_string(CoverMode m) noexcept {
  return m == CoverMode::Exact ? "exact" : "greedy";
}

inline CoverMode cover_mode_from_string(std::string_view s) {
  if (s == "exact") return CoverMode::Exact;
  if (s == "greedy") return CoverMode::Greedy;
  throw InputError("cover mode must be 'exact' or 'greedy'");
}

/// A gamma-separable subsample and where it came from.
struct CondensedModel {
  LabeledSample subsample;
  std::vector<std::size_t> retained;  // indices into the training sample
  double gamma = 1.0;
  std::size_t removed_count = 0;
  std::size_t n = 0;
  bool exact = true;

  double scale() const noexcept { return subsample.scale(); }
  double empirical_upper() const noexcept {
    return n == 0 ? 0.0 : static_cast<double>(removed_count) / static_cast<double>(n);
  }
};

inline CondensedModel condense_with_cover(const LabeledSample& s, double gamma,
                                          const VertexCover& cover) {
  std::vector<char> drop(s.size(), 0);
  for (auto v : cover.vertices) drop[v] = 1;
  std::vector<std::size_t> keep;
  keep.reserve(s.size() - cover.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!drop[i]) keep.push_back(i);
  }
  CondensedModel m;
  m.subsample = s.select(keep);
  m.retained = std::move(keep);
  m.gamma = gamma;
  m.removed_count = cover.size();
  m.n = s.size();
  m.exact = cover.exact;
  return m;
}

/// Removes a minimum (exact) or greedy vertex cover of the conflict graph at gamma.
inline CondensedModel inner(const LabeledSample& s, double gamma, CoverMode mode) {
  if (s.empty()) throw InputError("inner: empty sample");
  const ConflictGraph g = build_conflict_graph(s, gamma);
  const VertexCover cover = mode == CoverMode::Exact ? minimum_cover(g) : greedy_cover(g);
  return condense_with_cover(s, gamma, cover);
}

/// Every opposite-labeled pair with its distance, in edge scan order.
inline std::vector<Edge> opposite_pairs(const LabeledSample& s) {
  std::vector<std::size_t> plus, minus;
  for (std::size_t i = 0; i < s.size(); ++i) {
    (s.label(i) == Label::Plus ? plus : minus).push_back(i);
  }
  std::vector<Edge> pairs;
  pairs.reserve(plus.size() * minus.size());
  for (auto p : plus) {
    for (auto q : minus) pairs.push_back({p, q, s.distance(p, q)});
  }
  std::sort(pairs.begin(), pairs.end(), edge_scan_order);
  return pairs;
}

/// Distinct positive distances among pairs already in scan order.
inline std::vector<double> candidate_margins(std::span<const Edge> sorted_pairs) {
  std::vector<double> out;
  for (const auto& e : sorted_pairs) {
    if (e.distance > 0.0 && (out.empty() || out.back() != e.distance)) out.push_back(e.distance);
  }
  return out;
}

/// Sorted, deduplicated opposite-label distances, zeros excluded. Empty when
/// a class is absent.
inline std::vector<double> candidate_margins(const LabeledSample& s) {
  return candidate_margins(opposite_pairs(s));
}

/// Greedy both-endpoints cover maintained as edges arrive in scan order.
class GreedyCoverSweep {
 public:
  explicit GreedyCoverSweep(std::size_t n) : taken_(n, 0) {}

  /// Returns true when the edge was uncovered (both endpoints now removed).
  bool add(const Edge& e) {
    if (taken_[e.plus] || taken_[e.minus]) return false;
    taken_[e.plus] = taken_[e.minus] = 1;
    cover_size_ += 2;
    return true;
  }

  std::size_t cover_size() const noexcept { return cover_size_; }
  bool removed(std::size_t i) const noexcept { return taken_[i] != 0; }

 private:
  std::vector<char> taken_;
  std::size_t cover_size_ = 0;
};

/// Maximum matching maintained under edge insertion.
///
/// Keeps the set of vertices reachable by alternating paths from free plus
/// vertices. Insertions only grow that set; a free minus vertex entering it
/// means an augmenting path, after which the set is rebuilt. Between
/// augmentations the total work is O(V + E), and there are at most
/// min(|plus|, |minus|) augmentations.
class ExactCoverSweep {
 public:
  explicit ExactCoverSweep(const LabeledSample& s)
      : is_plus_(s.size()), adj_(s.size()), mate_(s.size(), kFree), parent_(s.size(), kFree),
        reached_(s.size(), 0) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      is_plus_[i] = s.label(i) == Label::Plus;
      if (is_plus_[i]) reached_[i] = 1;
    }
  }

  void add(const Edge& e) {
    adj_[e.plus].push_back(e.minus);
    if (reached_[e.plus] && !reached_[e.minus]) {
      queue_.clear();
      if (reach_minus(e.minus, e.plus)) {
        rebuild();
      } else {
        drain();
      }
    }
  }

  std::size_t matching_size() const noexcept { return matched_; }

 private:
  static constexpr std::size_t kFree = ConflictGraph::npos;

  // Marks minus vertex q as reached from p. Returns true if an augmentation happened.
  bool reach_minus(std::size_t q, std::size_t p) {
    reached_[q] = 1;
    parent_[q] = p;
    if (mate_[q] == kFree) {
      augment(q);
      return true;
    }
    const std::size_t next = mate_[q];
    if (!reached_[next]) {
      reached_[next] = 1;
      queue_.push_back(next);
    }
    return false;
  }

  void drain() {
    while (!queue_.empty()) {
      const std::size_t p = queue_.front();
      queue_.pop_front();
      for (std::size_t q : adj_[p]) {
        if (reached_[q]) continue;
        if (reach_minus(q, p)) {
          rebuild();
          return;
        }
      }
    }
  }

  void augment(std::size_t q) {
    std::size_t cur = q;
    while (true) {
      const std::size_t p = parent_[cur];
      const std::size_t prev = mate_[p];
      mate_[p] = cur;
      mate_[cur] = p;
      if (prev == kFree) break;
      cur = prev;
    }
    ++matched_;
  }

  void rebuild() {
    std::fill(reached_.begin(), reached_.end(), 0);
    std::fill(parent_.begin(), parent_.end(), kFree);
    queue_.clear();
    for (std::size_t i = 0; i < is_plus_.size(); ++i) {
      if (is_plus_[i] && mate_[i] == kFree) {
        reached_[i] = 1;
        queue_.push_back(i);
      }
    }
    drain();
  }

  std::vector<bool> is_plus_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<std::size_t> mate_;
  std::vector<std::size_t> parent_;
  std::vector<char> reached_;
  std::deque<std::size_t> queue_;
  std::size_t matched_ = 0;
};

/// Cover size at each candidate gamma (ascending), where the conflict graph
/// at gamma holds the pairs with distance strictly below gamma.
inline std::vector<std::size_t> cover_sizes(const LabeledSample& s,
                                            std::span<const Edge> sorted_pairs,
                                            std::span<const double> gammas, CoverMode mode) {
  std::vector<std::size_t> out;
  out.reserve(gammas.size());
  std::size_t next = 0;
  if (mode == CoverMode::Greedy) {
    GreedyCoverSweep sweep(s.size());
    for (double gamma : gammas) {
      while (next < sorted_pairs.size() && sorted_pairs[next].distance < gamma) {
        sweep.add(sorted_pairs[next++]);
      }
      out.push_back(sweep.cover_size());
    }
  } else {
    ExactCoverSweep sweep(s);
    for (double gamma : gammas) {
      while (next < sorted_pairs.size() && sorted_pairs[next].distance < gamma) {
        sweep.add(sorted_pairs[next++]);
      }
      out.push_back(sweep.matching_size());
    }
  }
  return out;
}

}  // namespace marginnn
