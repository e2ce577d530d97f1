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

// Margin selection by structural risk minimization: the complexity penalty,
// the penalized objective swept over every candidate margin, and the
// surrogate-loss / stratification-grid diagnostics.

#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "marginnn/condense.hpp"
#include "marginnn/error.hpp"
#include "marginnn/metric.hpp"

namespace marginnn {

struct PenaltyParams {
  double c1 = 2.0;
  double c_dim = 1.0;
  double ddim = 1.0;

  void validate() const {
    if (!(c1 > 0.0) || !(c_dim > 0.0) || !(ddim > 0.0) || !std::isfinite(c1) ||
        !std::isfinite(c_dim) || !std::isfinite(ddim)) {
      throw InputError("penalty parameters c1, c_dim, ddim must be positive and finite");
    }
  }
};

/// r_pen(n, gamma) = (4/gamma) (c_dim/n)^(1/(2(ddim+1)))
///                 + sqrt( [ c1/(ddim+1) log(n/c_dim) + 2 c1 log log(2e/gamma) ] / n )
inline double penalty(double n, double gamma, const PenaltyParams& p) {
  p.validate();
  if (!(gamma > 0.0 && gamma <= 1.0)) throw InputError("penalty: gamma must lie in (0, 1]");
  if (!(n >= 2.0) || !(n > p.c_dim)) throw InputError("penalty: requires n >= 2 and n > c_dim");
  const double exponent = 1.0 / (2.0 * (p.ddim + 1.0));
  const double lipschitz_term = (4.0 / gamma) * std::pow(p.c_dim / n, exponent);
  const double log_term = (p.c1 / (p.ddim + 1.0)) * std::log(n / p.c_dim) +
                          2.0 * p.c1 * std::log(std::log(2.0 * M_E / gamma));
  return lipschitz_term + std::sqrt(log_term / n);
}

struct SrmRow {
  double gamma = 0.0;
  std::size_t removed = 0;
  double empirical = 0.0;
  double penalty = 0.0;
  double objective = 0.0;
};

struct SrmTrace {
  std::vector<SrmRow> rows;  // ascending gamma
  std::optional<std::size_t> chosen_index;

  const SrmRow& chosen() const { return rows.at(chosen_index.value()); }
};

/// Candidate margins clipped into (0, 1], deduplicated, ascending.
inline std::vector<double> clipped_candidates(std::span<const double> candidates) {
  std::vector<double> out;
  for (double g : candidates) {
    const double c = std::min(g, 1.0);
    if (c > 0.0 && (out.empty() || out.back() != c)) out.push_back(c);
  }
  return out;
}

/// Trace rows for a fixed candidate list; the chosen row minimizes the
/// objective, ties going to the larger gamma.
inline SrmTrace srm_trace(const LabeledSample& s, std::span<const Edge> sorted_pairs,
                          std::span<const double> gammas, const PenaltyParams& p,
                          CoverMode mode) {
  SrmTrace trace;
  const auto n = static_cast<double>(s.size());
  const auto removed = cover_sizes(s, sorted_pairs, gammas, mode);
  trace.rows.reserve(gammas.size());
  for (std::size_t k = 0; k < gammas.size(); ++k) {
    SrmRow row;
    row.gamma = gammas[k];
    row.removed = removed[k];
    row.empirical = static_cast<double>(removed[k]) / n;
    row.penalty = penalty(n, gammas[k], p);
    row.objective = row.empirical + row.penalty;
    if (!trace.chosen_index || row.objective <= trace.rows[*trace.chosen_index].objective) {
      trace.chosen_index = k;
    }
    trace.rows.push_back(row);
  }
  return trace;
}

struct SrmResult {
  CondensedModel model;
  SrmTrace trace;
};

/// Sweeps every candidate margin in (0, 1] and condenses at the minimizer of
/// empirical_upper + penalty. A single-class sample comes back unchanged
/// (gamma 1, empty trace), which predicts its only class everywhere.
inline SrmResult srm_select(const LabeledSample& s, const PenaltyParams& p, CoverMode mode) {
  p.validate();
  if (s.empty()) throw InputError("srm_select: empty sample");
  const auto pairs = opposite_pairs(s);
  const auto gammas = clipped_candidates(candidate_margins(pairs));
  if (gammas.empty()) {
    std::vector<std::size_t> all(s.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    CondensedModel m;
    m.subsample = s.select(all);
    m.retained = std::move(all);
    m.gamma = 1.0;
    m.n = s.size();
    m.exact = mode == CoverMode::Exact;
    return {std::move(m), {}};
  }
  SrmTrace trace = srm_trace(s, pairs, gammas, p, mode);
  CondensedModel model = inner(s, trace.chosen().gamma, mode);
  if (model.removed_count != trace.chosen().removed) {
    throw std::logic_error("srm_select: sweep and direct cover disagree at the chosen margin");
  }
  return {std::move(model), std::move(trace)};
}

/// Ramp between the margin indicators: 1 below gamma(1 - xi), 0 above gamma.
inline double surrogate_loss(double u, double gamma, double xi) {
  if (!(gamma > 0.0)) throw InputError("surrogate_loss: gamma must be positive");
  if (!(xi > 0.0 && xi <= 1.0)) throw InputError("surrogate_loss: xi must lie in (0, 1]");
  if (u <= gamma * (1.0 - xi)) return 1.0;
  if (u >= gamma) return 0.0;
  return (gamma - u) / (gamma * xi);
}

/// Mean surrogate loss of y_i f_i.
inline double empirical_surrogate_risk(std::span<const std::pair<double, Label>> values,
                                       double gamma, double xi) {
  if (values.empty()) throw InputError("empirical_surrogate_risk: empty input");
  double total = 0.0;
  for (const auto& [f, y] : values) total += surrogate_loss(to_int(y) * f, gamma, xi);
  return total / static_cast<double>(values.size());
}

/// Geometric margin grid gamma_l = (1 - xi)^(l-1) with resolution xi = 1/n_dim,
/// n_dim = (n / c_dim)^(1/(2(ddim+1))), and the matching deviation levels eps_l.
struct GridParams {
  double n = 0.0;
  double n_dim = 0.0;
  double xi = 0.0;
  std::size_t levels = 0;
  std::vector<double> gammas;    // gammas[l-1] = gamma_{n,l}
  std::vector<double> epsilons;  // epsilons[l-1] = eps_{n,l}
};

inline GridParams grid(double n, const PenaltyParams& p, std::size_t levels) {
  p.validate();
  GridParams g;
  g.n = n;
  g.levels = levels;
  g.n_dim = std::pow(n / p.c_dim, 1.0 / (2.0 * (p.ddim + 1.0)));
  if (!(g.n_dim > 1.0)) {
    throw InputError("grid requires n_dim > 1, i.e. n > c_dim = " + std::to_string(p.c_dim) +
                     " (got n = " + std::to_string(n) + ")");
  }
  g.xi = 1.0 / g.n_dim;
  g.gammas.reserve(levels);
  g.epsilons.reserve(levels);
  double gamma = 1.0;
  for (std::size_t l = 1; l <= levels; ++l) {
    const double first = 2.0 / (gamma * g.xi * g.n_dim * g.n_dim);
    const double second =
        std::sqrt(2.0 * p.c1 * std::log((1.0 / g.xi) * std::log(M_E / gamma)) / n);
    g.gammas.push_back(gamma);
    g.epsilons.push_back(first + second);
    gamma *= 1.0 - g.xi;
  }
  return g;
}

struct DominanceRow {
  std::size_t level = 0;   // l
  double penalty = 0.0;    // r_pen(n, gamma_{n,l-1})
  double epsilon = 0.0;    // eps_{n,l}
  bool holds() const noexcept { return penalty >= epsilon; }
};

struct DominanceReport {
  bool pass = true;
  std::vector<DominanceRow> rows;
  std::optional<DominanceRow> first_violation;
};

/// Checks r_pen(n, gamma_{n,l-1}) >= eps_{n,l} for l = 2..levels.
inline DominanceReport check_penalty_dominates(double n, const PenaltyParams& p,
                                               std::size_t levels) {
  const GridParams g = grid(n, p, levels);
  DominanceReport report;
  for (std::size_t l = 2; l <= levels; ++l) {
    DominanceRow row{l, penalty(n, g.gammas[l - 2], p), g.epsilons[l - 1]};
    if (!row.holds() && report.pass) {
      report.pass = false;
      report.first_violation = row;
    }
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace marginnn
