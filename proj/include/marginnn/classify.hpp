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

// Prediction and risk evaluation: the induced 1-NN rule, its Lipschitz
// extension, k-NN baselines and k-fold cross-validation.
//
// Nearest-neighbor search is a linear scan. sign(0) is +1 everywhere.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "marginnn/condense.hpp"
#include "marginnn/error.hpp"
#include "marginnn/metric.hpp"
#include "marginnn/rng.hpp"

namespace marginnn {

inline constexpr Label sign_label(double v) noexcept { return v >= 0.0 ? Label::Plus : Label::Minus; }

struct ClassDistances {
  double plus = kInfinity;
  double minus = kInfinity;
};

inline ClassDistances nearest_class_distances(const LabeledSample& s, PointView x) {
  ClassDistances d;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double dist = s.distance_to(x, i);
    double& slot = s.label(i) == Label::Plus ? d.plus : d.minus;
    slot = std::min(slot, dist);
  }
  return d;
}

/// sign(dist(x, S-) - dist(x, S+)); the distance to an empty class is +infinity.
inline Label nn1_predict(const CondensedModel& m, PointView x) {
  if (m.subsample.empty()) throw ModelError("model retains no points");
  const ClassDistances d = nearest_class_distances(m.subsample, x);
  return sign_label(d.minus - d.plus);
}

/// Midpoint Lipschitz extension of +gamma on S+ and -gamma on S-:
/// f(x) = (min_s [f(s) + 2 d(x,s)] + max_s [f(s) - 2 d(x,s)]) / 2.
class LipschitzExtension {
 public:
  explicit LipschitzExtension(const CondensedModel& m) : model_(&m) {
    if (m.subsample.count(Label::Plus) == 0 || m.subsample.count(Label::Minus) == 0) {
      throw ModelError("Lipschitz extension needs both classes in the subsample");
    }
    if (margin(m.subsample) < m.gamma) {
      throw ModelError("subsample margin is below the model's gamma");
    }
  }

  double operator()(PointView x) const {
    const double g = model_->gamma;
    const ClassDistances d = nearest_class_distances(model_->subsample, x);
    const double lower = std::min(g + 2.0 * d.plus, -g + 2.0 * d.minus);
    const double upper = std::max(g - 2.0 * d.plus, -g - 2.0 * d.minus);
    return 0.5 * (lower + upper);
  }

 private:
  const CondensedModel* model_;
};

inline double lipschitz_extension_value(const CondensedModel& m, PointView x) {
  return LipschitzExtension(m)(x);
}

namespace detail {

struct Neighbor {
  double distance;
  std::size_t index;
  friend bool operator<(const Neighbor& a, const Neighbor& b) noexcept {
    return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
  }
};

/// The k nearest sample points to x, ordered by (distance, index).
inline std::vector<Neighbor> nearest(const LabeledSample& s, PointView x, std::size_t k) {
  std::vector<Neighbor> all(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) all[i] = {s.distance_to(x, i), i};
  k = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end());
  all.resize(k);
  return all;
}

}  // namespace detail

/// Majority label among the k nearest points; distance ties by sample index.
inline Label knn_predict(const LabeledSample& s, PointView x, std::size_t k) {
  if (k == 0 || k % 2 == 0) throw InputError("k must be a positive odd integer");
  if (k > s.size()) throw InputError("k exceeds the sample size");
  int vote = 0;
  for (const auto& nb : detail::nearest(s, x, k)) vote += to_int(s.label(nb.index));
  return sign_label(static_cast<double>(vote));
}

/// Prefers the smaller or the larger candidate among equal CV errors.
enum class TiePreference { Smaller, Larger };

template <class Candidate>
struct CvResult {
  Candidate best{};
  std::size_t best_index = 0;
  std::vector<double> mean_errors;  // per candidate
};

/// Fold of each sample index: position in a seeded permutation, modulo folds.
inline std::vector<std::size_t> fold_assignment(std::size_t n, std::size_t folds,
                                                std::uint64_t seed) {
  const auto perm = seeded_permutation(n, seed);
  std::vector<std::size_t> fold(n);
  for (std::size_t pos = 0; pos < n; ++pos) fold[perm[pos]] = pos % folds;
  return fold;
}

/// k-fold cross-validation over ascending candidates.
///
/// `scorer(train, valid, candidates)` returns the validation 0-1 error rate of
/// every candidate; fold errors are averaged with equal weight per fold.
template <class Candidate, class Scorer>
CvResult<Candidate> cross_validate(const LabeledSample& s, std::span<const Candidate> candidates,
                                   std::size_t folds, std::uint64_t seed, Scorer&& scorer,
                                   TiePreference prefer) {
  if (candidates.empty()) throw InputError("cross_validate: no candidates");
  if (folds < 2) throw InputError("cross_validate: need at least 2 folds");
  if (s.size() < folds) throw InputError("cross_validate: fewer points than folds");
  const auto fold = fold_assignment(s.size(), folds, seed);
  CvResult<Candidate> result;
  result.mean_errors.assign(candidates.size(), 0.0);
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<std::size_t> train_idx, valid_idx;
    for (std::size_t i = 0; i < s.size(); ++i) (fold[i] == f ? valid_idx : train_idx).push_back(i);
    const LabeledSample train = s.select(train_idx);
    const LabeledSample valid = s.select(valid_idx);
    const std::vector<double> errors = scorer(train, valid, candidates);
    if (errors.size() != candidates.size()) {
      throw std::logic_error("cross_validate: scorer returned the wrong number of errors");
    }
    for (std::size_t c = 0; c < candidates.size(); ++c) result.mean_errors[c] += errors[c];
  }
  for (double& e : result.mean_errors) e /= static_cast<double>(folds);
  std::size_t best = 0;
  for (std::size_t c = 1; c < candidates.size(); ++c) {
    const double e = result.mean_errors[c];
    if (e < result.mean_errors[best] ||
        (prefer == TiePreference::Larger && e == result.mean_errors[best])) {
      best = c;
    }
  }
  result.best_index = best;
  result.best = candidates[best];
  return result;
}

/// Validation error of the induced 1-NN of the greedy-condensed training
/// fold, for every ascending gamma, in one sweep.
///
/// Each validation point walks its per-class neighbor lists past removed
/// points; a removal only touches the validation points whose current nearest
/// neighbor it was. A gamma whose condensed set is empty scores error 1.
inline std::vector<double> condensed_nn_validation_errors(const LabeledSample& train,
                                                          const LabeledSample& valid,
                                                          std::span<const double> gammas) {
  const std::size_t nv = valid.size();
  if (nv == 0) throw InputError("empty validation fold");
  struct Walker {
    std::vector<detail::Neighbor> list;
    std::size_t pos = 0;
  };
  std::vector<Walker> plus(nv), minus(nv);
  std::vector<std::vector<std::size_t>> watchers(train.size());
  for (std::size_t v = 0; v < nv; ++v) {
    const PointView x = valid.point(v);
    for (std::size_t i = 0; i < train.size(); ++i) {
      (train.label(i) == Label::Plus ? plus[v] : minus[v]).list.push_back({train.distance_to(x, i), i});
    }
    std::sort(plus[v].list.begin(), plus[v].list.end());
    std::sort(minus[v].list.begin(), minus[v].list.end());
    if (!plus[v].list.empty()) watchers[plus[v].list.front().index].push_back(v);
    if (!minus[v].list.empty()) watchers[minus[v].list.front().index].push_back(v);
  }
  auto front = [](const Walker& w) {
    return w.pos < w.list.size() ? w.list[w.pos].distance : kInfinity;
  };
  auto wrong = [&](std::size_t v) {
    const double dp = front(plus[v]), dm = front(minus[v]);
    if (dp == kInfinity && dm == kInfinity) return 1;
    return sign_label(dm - dp) != valid.label(v) ? 1 : 0;
  };
  std::size_t errors = 0;
  for (std::size_t v = 0; v < nv; ++v) errors += static_cast<std::size_t>(wrong(v));

  GreedyCoverSweep sweep(train.size());
  auto on_removed = [&](std::size_t r) {
    auto pending = std::move(watchers[r]);
    watchers[r].clear();
    for (std::size_t v : pending) {
      Walker& w = train.label(r) == Label::Plus ? plus[v] : minus[v];
      errors -= static_cast<std::size_t>(wrong(v));
      while (w.pos < w.list.size() && sweep.removed(w.list[w.pos].index)) ++w.pos;
      if (w.pos < w.list.size()) watchers[w.list[w.pos].index].push_back(v);
      errors += static_cast<std::size_t>(wrong(v));
    }
  };

  const auto pairs = opposite_pairs(train);
  std::vector<double> out;
  out.reserve(gammas.size());
  std::size_t next = 0;
  for (double gamma : gammas) {
    while (next < pairs.size() && pairs[next].distance < gamma) {
      const Edge& e = pairs[next++];
      if (sweep.add(e)) {
        on_removed(e.plus);
        on_removed(e.minus);
      }
    }
    out.push_back(static_cast<double>(errors) / static_cast<double>(nv));
  }
  return out;
}

/// Validation error of k-NN for every odd k in `ks`, reusing one sort per point.
inline std::vector<double> knn_validation_errors(const LabeledSample& train,
                                                 const LabeledSample& valid,
                                                 std::span<const std::size_t> ks) {
  if (valid.empty()) throw InputError("empty validation fold");
  std::size_t kmax = 0;
  for (auto k : ks) {
    if (k == 0 || k % 2 == 0) throw InputError("k must be a positive odd integer");
    if (k > train.size()) throw InputError("k exceeds the training fold size");
    kmax = std::max(kmax, k);
  }
  std::vector<std::size_t> errors(ks.size(), 0);
  std::vector<int> prefix(kmax + 1);
  for (std::size_t v = 0; v < valid.size(); ++v) {
    const auto nbrs = detail::nearest(train, valid.point(v), kmax);
    prefix[0] = 0;
    for (std::size_t j = 0; j < kmax; ++j) prefix[j + 1] = prefix[j] + to_int(train.label(nbrs[j].index));
    for (std::size_t c = 0; c < ks.size(); ++c) {
      if (sign_label(prefix[ks[c]]) != valid.label(v)) ++errors[c];
    }
  }
  std::vector<double> out(ks.size());
  for (std::size_t c = 0; c < ks.size(); ++c) {
    out[c] = static_cast<double>(errors[c]) / static_cast<double>(valid.size());
  }
  return out;
}

/// Odd k in {1, 3, ..., 2 ceil(sqrt(n)) + 1}, capped at `max_k`.
inline std::vector<std::size_t> kstar_candidates(std::size_t n, std::size_t max_k) {
  const auto top = 2 * static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n)))) + 1;
  std::vector<std::size_t> ks;
  for (std::size_t k = 1; k <= top && k <= max_k; k += 2) ks.push_back(k);
  return ks;
}

struct RiskReport {
  double empirical_error = 0.0;
  double test_error = 0.0;
  double margin_risk = 0.0;  // fraction with y f(x) < margin_gamma; equals test_error for label-only predictors
  double margin_gamma = 0.0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
};

/// 0-1 error of a label predictor `h(PointView) -> Label`.
template <class Predictor>
double zero_one_error(Predictor&& h, const LabeledSample& s) {
  if (s.empty()) throw InputError("cannot evaluate on an empty set");
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (h(s.point(i)) != s.label(i)) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(s.size());
}

/// Fraction of points with y f(x) < gamma for a real-valued `f(PointView) -> double`.
template <class ValueFn>
double margin_risk(ValueFn&& f, const LabeledSample& s, double gamma) {
  if (s.empty()) throw InputError("cannot evaluate on an empty set");
  std::size_t violations = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (to_int(s.label(i)) * f(s.point(i)) < gamma) ++violations;
  }
  return static_cast<double>(violations) / static_cast<double>(s.size());
}

template <class Predictor>
RiskReport evaluate(Predictor&& h, const LabeledSample& train, const LabeledSample& test) {
  RiskReport r;
  r.n_train = train.size();
  r.n_test = test.size();
  r.empirical_error = train.empty() ? 0.0 : zero_one_error(h, train);
  r.test_error = zero_one_error(h, test);
  r.margin_risk = r.test_error;
  return r;
}

/// Evaluation of a real-valued predictor through sign(f), plus its margin risk at gamma.
template <class ValueFn>
RiskReport evaluate_real(ValueFn&& f, const LabeledSample& train, const LabeledSample& test,
                         double gamma) {
  auto h = [&](PointView x) { return sign_label(f(x)); };
  RiskReport r = evaluate(h, train, test);
  r.margin_gamma = gamma;
  r.margin_risk = margin_risk(f, test, gamma);
  return r;
}

}  // namespace marginnn
