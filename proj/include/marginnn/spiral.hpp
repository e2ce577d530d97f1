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

// Synthetic spiral distribution with a known conditional label law.
//
// T ~ U[0, 2pi], x = A sqrt(T) (cos wT, sin wT), P(Y = +1 | T) = (1 + cos wT) / 2.
// Each draw consumes two uniforms from one SplitMix64 stream: T first, then
// the label uniform U, with Y = +1 iff U < eta(T).

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "marginnn/error.hpp"
#include "marginnn/metric.hpp"
#include "marginnn/rng.hpp"

namespace marginnn {

/// Which conditional label law to use. Only `Spiral` is the benchmark law;
/// the constant laws exist to give the risk oracles known answers.
enum class LabelLaw { Spiral, AlwaysPlus, FairCoin };

struct SpiralParams {
  double amplitude = 5.0;
  double frequency = 3.0;
  std::uint64_t seed = 42;
  LabelLaw law = LabelLaw::Spiral;

  void validate() const {
    if (!(amplitude > 0.0) || !(frequency > 0.0) || !std::isfinite(amplitude) ||
        !std::isfinite(frequency)) {
      throw InputError("spiral amplitude and frequency must be positive");
    }
  }
};

inline double spiral_eta(const SpiralParams& p, double t) {
  switch (p.law) {
    case LabelLaw::AlwaysPlus:
      return 1.0;
    case LabelLaw::FairCoin:
      return 0.5;
    case LabelLaw::Spiral:
      break;
  }
  return 0.5 * (1.0 + std::cos(p.frequency * t));
}

struct SpiralDraw {
  double t;
  LabeledPoint point;
};

/// Draws with the latent parameter T kept alongside each point.
inline std::vector<SpiralDraw> draw_spiral(const SpiralParams& p, std::size_t n) {
  p.validate();
  SplitMix64 rng(p.seed);
  std::vector<SpiralDraw> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 2.0 * std::numbers::pi * rng.uniform();
    const double u = rng.uniform();
    const double r = p.amplitude * std::sqrt(t);
    const Label y = u < spiral_eta(p, t) ? Label::Plus : Label::Minus;
    out.push_back({t, {{r * std::cos(p.frequency * t), r * std::sin(p.frequency * t)}, y}});
  }
  return out;
}

/// Raw (unnormalized) spiral sample in R^2 with the Euclidean metric, ddim 2.
inline LabeledSample sample_spiral(const SpiralParams& p, std::size_t n) {
  if (n == 0) throw InputError("sample_spiral: n must be at least 1");
  std::vector<LabeledPoint> raw;
  raw.reserve(n);
  for (auto& d : draw_spiral(p, n)) raw.push_back(std::move(d.point));
  return LabeledSample::from_points(raw, MetricSpec::euclidean(2.0));
}

namespace detail {

template <class F>
double average_over_period(F&& f) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double error = 0.0;
  const double integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, 0.0, two_pi, 30, 1e-12, &error);
  return integral / two_pi;
}

}  // namespace detail

/// Bayes risk E[min(eta, 1 - eta)] over T ~ U[0, 2pi], by adaptive quadrature.
inline double bayes_risk(const SpiralParams& p) {
  return detail::average_over_period([&](double t) {
    const double eta = spiral_eta(p, t);
    return std::min(eta, 1.0 - eta);
  });
}

/// Asymptotic 1-NN risk E[2 eta (1 - eta)].
inline double one_nn_asymptote(const SpiralParams& p) {
  return detail::average_over_period([&](double t) {
    const double eta = spiral_eta(p, t);
    return 2.0 * eta * (1.0 - eta);
  });
}

}  // namespace marginnn
