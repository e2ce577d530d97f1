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

// Points, labels, labeled samples and the distance contract.
//
// A LabeledSample keeps the raw coordinates and a scale factor; every
// distance the library reports is raw_distance / scale, so after
// normalize_sample the sample has unit diameter.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "marginnn/error.hpp"

namespace marginnn {

enum class Label : std::int8_t { Minus = -1, Plus = 1 };

inline constexpr int to_int(Label y) noexcept { return static_cast<int>(y); }

inline Label label_from_int(long long v) {
  if (v == 1) return Label::Plus;
  if (v == -1) return Label::Minus;
  throw InputError("label must be -1 or 1, got " + std::to_string(v));
}

inline constexpr Label opposite(Label y) noexcept {
  return y == Label::Plus ? Label::Minus : Label::Plus;
}

using Point = std::vector<double>;
using PointView = std::span<const double>;
using DistanceFn = std::function<double(PointView, PointView)>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

inline double euclidean_distance(PointView a, PointView b) {
  if (a.size() != b.size()) {
    throw InputError("dimension mismatch: " + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()));
  }
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    acc += d * d;
  }
  return std::sqrt(acc);
}

/// Distance function plus the doubling-dimension parameter fed to the penalty.
/// An empty `fn` selects the Euclidean metric.
class MetricSpec {
 public:
  MetricSpec() = default;

  static MetricSpec euclidean(double ddim) { return MetricSpec({}, ddim); }

  static MetricSpec custom(DistanceFn fn, double ddim) {
    if (!fn) throw InputError("custom metric requires a distance function");
    return MetricSpec(std::move(fn), ddim);
  }

  bool is_euclidean() const noexcept { return !fn_; }
  double ddim() const noexcept { return ddim_; }

  double operator()(PointView a, PointView b) const {
    if (a.size() != b.size()) {
      throw InputError("dimension mismatch: " + std::to_string(a.size()) + " vs " +
                       std::to_string(b.size()));
    }
    return fn_ ? fn_(a, b) : euclidean_distance(a, b);
  }

 private:
  MetricSpec(DistanceFn fn, double ddim) : fn_(std::move(fn)), ddim_(ddim) {
    if (!(ddim > 0.0) || !std::isfinite(ddim)) {
      throw InputError("ddim must be positive and finite");
    }
  }

  DistanceFn fn_;
  double ddim_ = 1.0;
};

/// distance(m, a, b) with an explicit scale; the unscaled form is scale 1.
inline double distance(const MetricSpec& m, PointView a, PointView b, double scale = 1.0) {
  return m(a, b) / scale;
}

/// Unvalidated-but-typed input record: one raw point and its label.
struct LabeledPoint {
  Point x;
  Label y;
};

/// Training set in a metric space. Coordinates are stored row-major and
/// never rescaled; `scale` divides raw distances.
class LabeledSample {
 public:
  LabeledSample() = default;

  LabeledSample(std::size_t dim, std::vector<double> coords, std::vector<Label> labels,
                MetricSpec metric, double scale = 1.0)
      : dim_(dim),
        coords_(std::move(coords)),
        labels_(std::move(labels)),
        metric_(std::move(metric)),
        scale_(scale) {
    if (dim_ == 0 && !labels_.empty()) throw InputError("points must have at least one coordinate");
    if (coords_.size() != dim_ * labels_.size()) {
      throw InputError("coordinate buffer does not match dim * n");
    }
    for (double c : coords_) {
      if (!std::isfinite(c)) throw InputError("non-finite coordinate");
    }
    if (!(scale_ > 0.0) || !std::isfinite(scale_)) throw InputError("scale must be positive");
  }

  static LabeledSample from_points(const std::vector<LabeledPoint>& raw, MetricSpec metric,
                                   double scale = 1.0) {
    const std::size_t dim = raw.empty() ? 0 : raw.front().x.size();
    std::vector<double> coords;
    coords.reserve(dim * raw.size());
    std::vector<Label> labels;
    labels.reserve(raw.size());
    for (const auto& p : raw) {
      if (p.x.size() != dim) throw InputError("points have inconsistent dimensionality");
      coords.insert(coords.end(), p.x.begin(), p.x.end());
      labels.push_back(p.y);
    }
    return LabeledSample(dim, std::move(coords), std::move(labels), std::move(metric), scale);
  }

  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }
  std::size_t dim() const noexcept { return dim_; }
  double scale() const noexcept { return scale_; }
  const MetricSpec& metric() const noexcept { return metric_; }
  const std::vector<Label>& labels() const noexcept { return labels_; }
  const std::vector<double>& coords() const noexcept { return coords_; }

  PointView point(std::size_t i) const noexcept { return {coords_.data() + i * dim_, dim_}; }
  Label label(std::size_t i) const noexcept { return labels_[i]; }

  /// Normalized distance between two sample points.
  double distance(std::size_t i, std::size_t j) const {
    return metric_.is_euclidean() ? raw_euclidean(point(i), point(j)) / scale_
                                  : metric_(point(i), point(j)) / scale_;
  }

  /// Normalized distance from an external raw point to sample point i.
  double distance_to(PointView x, std::size_t i) const {
    if (x.size() != dim_) {
      throw InputError("query has dimension " + std::to_string(x.size()) + ", model expects " +
                       std::to_string(dim_));
    }
    return metric_.is_euclidean() ? raw_euclidean(x, point(i)) / scale_
                                  : metric_(x, point(i)) / scale_;
  }

  std::size_t count(Label y) const noexcept {
    return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), y));
  }

  /// Subsample keeping the given indices (in the given order), same metric and scale.
  LabeledSample select(std::span<const std::size_t> keep) const {
    std::vector<double> coords;
    coords.reserve(keep.size() * dim_);
    std::vector<Label> labels;
    labels.reserve(keep.size());
    for (std::size_t i : keep) {
      auto p = point(i);
      coords.insert(coords.end(), p.begin(), p.end());
      labels.push_back(labels_[i]);
    }
    return LabeledSample(dim_, std::move(coords), std::move(labels), metric_, scale_);
  }

  LabeledSample with_scale(double scale) const {
    return LabeledSample(dim_, coords_, labels_, metric_, scale);
  }

 private:
  static double raw_euclidean(PointView a, PointView b) noexcept {
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      const double d = a[k] - b[k];
      acc += d * d;
    }
    return std::sqrt(acc);
  }

  std::size_t dim_ = 0;
  std::vector<double> coords_;
  std::vector<Label> labels_;
  MetricSpec metric_ = MetricSpec::euclidean(1.0);
  double scale_ = 1.0;
};

/// Largest pairwise distance under the sample's current scale. O(n^2).
inline double diameter(const LabeledSample& s) {
  double best = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) best = std::max(best, s.distance(i, j));
  }
  return best;
}

/// Rescales so that the maximum pairwise distance becomes 1. Applied to an
/// already normalized sample the factor is 1, so the recorded scale composes.
inline LabeledSample normalize_sample(const LabeledSample& s) {
  if (s.empty()) throw InputError("cannot normalize an empty sample");
  const double d = diameter(s);
  const double factor = d > 0.0 ? d : 1.0;
  return s.with_scale(s.scale() * factor);
}

inline LabeledSample normalize_sample(const std::vector<LabeledPoint>& raw, MetricSpec metric) {
  if (raw.empty()) throw InputError("cannot normalize an empty sample");
  return normalize_sample(LabeledSample::from_points(raw, std::move(metric)));
}

inline LabeledSample normalize_sample(const std::vector<LabeledPoint>& raw) {
  if (raw.empty()) throw InputError("cannot normalize an empty sample");
  const auto dim = static_cast<double>(raw.front().x.size());
  return normalize_sample(raw, MetricSpec::euclidean(std::max(dim, 1.0)));
}

/// Minimum distance between opposite-labeled points; +infinity when a class is empty.
inline double margin(const LabeledSample& s) {
  double best = kInfinity;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.label(i) != Label::Plus) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (s.label(j) == Label::Minus) best = std::min(best, s.distance(i, j));
    }
  }
  return best;
}

}  // namespace marginnn
