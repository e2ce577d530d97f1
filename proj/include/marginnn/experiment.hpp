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

// Benchmark harness on the spiral distribution: fits every configured method
// on fresh training samples, scores each on a shared per-trial test set, and
// writes one CSV row per (n, trial, method) plus a per-(method, n) summary.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "marginnn/classify.hpp"
#include "marginnn/condense.hpp"
#include "marginnn/error.hpp"
#include "marginnn/io.hpp"
#include "marginnn/metric.hpp"
#include "marginnn/rng.hpp"
#include "marginnn/spiral.hpp"
#include "marginnn/srm.hpp"

namespace marginnn {

enum class Method { SrmExact, SrmGreedy, SrmAuto, CvNn, KstarNn, PlainNn };

inline std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::SrmExact: return "srm-1nn-exact";
    case Method::SrmGreedy: return "srm-1nn-greedy";
    case Method::SrmAuto: return "srm-1nn";
    case Method::CvNn: return "cv-1nn";
    case Method::KstarNn: return "kstar-nn";
    case Method::PlainNn: return "plain-1nn";
  }
  return "?";
}

inline Method method_from_string(std::string_view s) {
  for (Method m : {Method::SrmExact, Method::SrmGreedy, Method::SrmAuto, Method::CvNn,
                   Method::KstarNn, Method::PlainNn}) {
    if (to_string(m) == s) return m;
  }
  throw InputError("unknown method '" + std::string(s) + "'");
}

/// Sizes above this use the greedy cover for the "srm-1nn" method.
inline constexpr std::size_t kExactCoverMaxN = 1000;

struct ExperimentConfig {
  std::vector<Method> methods{Method::SrmAuto, Method::CvNn, Method::KstarNn, Method::PlainNn};
  std::vector<std::size_t> sizes{100, 200, 500, 1000, 2000};
  std::size_t trials = 20;
  std::size_t folds = 5;
  SpiralParams spiral{};
  PenaltyParams penalty{2.0, 1.0, 2.0};
  std::size_t test_size = 10000;
  std::string output = "results.csv";
  std::string summary;  // empty: derived from output
  bool record_timing = true;
  bool resume = false;

  std::string summary_path() const {
    if (!summary.empty()) return summary;
    std::filesystem::path p(output);
    return (p.parent_path() / (p.stem().string() + "_summary.csv")).string();
  }

  void validate() const {
    if (methods.empty()) throw InputError("config: methods must be nonempty");
    if (trials < 1) throw InputError("config: trials must be at least 1");
    if (folds < 2) throw InputError("config: folds must be at least 2");
    if (sizes.empty()) throw InputError("config: sizes must be nonempty");
    for (std::size_t k = 0; k < sizes.size(); ++k) {
      if (sizes[k] < 2) throw InputError("config: sizes must be at least 2");
      if (k > 0 && sizes[k] <= sizes[k - 1]) throw InputError("config: sizes must be ascending");
    }
    if (test_size < 1) throw InputError("config: test_size must be at least 1");
    if (output.empty()) throw InputError("config: output path is required");
    spiral.validate();
    penalty.validate();
  }

  static ExperimentConfig from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    try {
      if (j.contains("methods")) {
        c.methods.clear();
        for (const auto& m : j.at("methods")) c.methods.push_back(method_from_string(m.get<std::string>()));
      }
      if (j.contains("sizes")) c.sizes = j.at("sizes").get<std::vector<std::size_t>>();
      if (j.contains("trials")) c.trials = j.at("trials").get<std::size_t>();
      if (j.contains("folds")) c.folds = j.at("folds").get<std::size_t>();
      if (j.contains("test_size")) c.test_size = j.at("test_size").get<std::size_t>();
      if (j.contains("output")) c.output = j.at("output").get<std::string>();
      if (j.contains("summary")) c.summary = j.at("summary").get<std::string>();
      if (j.contains("record_timing")) c.record_timing = j.at("record_timing").get<bool>();
      if (j.contains("resume")) c.resume = j.at("resume").get<bool>();
      if (j.contains("spiral")) {
        const auto& s = j.at("spiral");
        if (s.contains("amplitude")) c.spiral.amplitude = s.at("amplitude").get<double>();
        if (s.contains("frequency")) c.spiral.frequency = s.at("frequency").get<double>();
        if (s.contains("seed")) c.spiral.seed = s.at("seed").get<std::uint64_t>();
      }
      if (j.contains("penalty")) {
        const auto& p = j.at("penalty");
        if (p.contains("c1")) c.penalty.c1 = p.at("c1").get<double>();
        if (p.contains("c_dim")) c.penalty.c_dim = p.at("c_dim").get<double>();
        if (p.contains("ddim")) c.penalty.ddim = p.at("ddim").get<double>();
      }
    } catch (const nlohmann::json::exception& e) {
      throw InputError(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
  }
};

struct ExperimentRow {
  Method method{};
  std::size_t n = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double test_error = 0.0;
  double train_error = 0.0;
  double gamma_or_k = 0.0;
  double fit_millis = 0.0;
};

inline constexpr std::string_view kResultsHeader =
    "method,n,trial,seed,test_error,train_error,gamma_or_k,fit_millis";

inline std::string row_csv(const ExperimentRow& r) {
  return std::string(to_string(r.method)) + "," + std::to_string(r.n) + "," +
         std::to_string(r.trial) + "," + std::to_string(r.seed) + "," +
         io::format_double(r.test_error) + "," + io::format_double(r.train_error) + "," +
         io::format_double(r.gamma_or_k) + "," + io::format_fixed(r.fit_millis, 3);
}

inline ExperimentRow parse_row_csv(std::string_view line) {
  const auto f = io::detail::split(io::detail::trim(line));
  if (f.size() != 8) throw InputError("results CSV: expected 8 fields");
  auto num = [&](std::size_t k) {
    auto v = io::detail::parse_number(f[k]);
    if (!v) throw InputError("results CSV: bad number");
    return *v;
  };
  ExperimentRow r;
  r.method = method_from_string(io::detail::trim(f[0]));
  r.n = static_cast<std::size_t>(num(1));
  r.trial = static_cast<std::size_t>(num(2));
  r.seed = std::stoull(std::string(io::detail::trim(f[3])));
  r.test_error = num(4);
  r.train_error = num(5);
  r.gamma_or_k = num(6);
  r.fit_millis = num(7);
  return r;
}

inline std::uint64_t train_seed(std::uint64_t base, std::size_t n, std::size_t trial) {
  return derive_seed(base, {0x747261696eULL /* "train" */, n, trial});
}

inline std::uint64_t test_seed(std::uint64_t base, std::size_t trial) {
  return derive_seed(base, {0x74657374ULL /* "test" */, trial});
}

/// A fitted classifier plus its selected hyperparameter (gamma or k).
/// A condensed model that retained nothing cannot predict; it scores error 1.
struct FittedMethod {
  std::function<Label(PointView)> predict;
  double parameter = 0.0;
  bool usable = true;
};

inline CoverMode srm_mode(Method m, std::size_t n) {
  if (m == Method::SrmExact) return CoverMode::Exact;
  if (m == Method::SrmGreedy) return CoverMode::Greedy;
  return n > kExactCoverMaxN ? CoverMode::Greedy : CoverMode::Exact;
}

/// CV-1-NN: gamma chosen from the SRM candidate set by k-fold CV of the
/// greedy-condensed 1-NN, then condensed on the full sample at that gamma.
inline CondensedModel fit_cv_1nn(const LabeledSample& train, std::size_t folds,
                                 std::uint64_t seed) {
  const auto gammas = clipped_candidates(candidate_margins(train));
  if (gammas.empty()) return srm_select(train, PenaltyParams{}, CoverMode::Greedy).model;
  const auto cv = cross_validate<double>(train, gammas, folds, seed, condensed_nn_validation_errors,
                                         TiePreference::Larger);
  return inner(train, cv.best, CoverMode::Greedy);
}

/// k*-NN: odd k chosen by k-fold CV.
inline std::size_t fit_kstar(const LabeledSample& train, std::size_t folds, std::uint64_t seed) {
  const std::size_t smallest_train = train.size() - (train.size() + folds - 1) / folds;
  const auto ks = kstar_candidates(train.size(), std::max<std::size_t>(smallest_train, 1));
  const auto cv = cross_validate<std::size_t>(train, ks, folds, seed, knn_validation_errors,
                                              TiePreference::Smaller);
  return cv.best;
}

inline FittedMethod fit_method(Method method, const LabeledSample& train,
                               const ExperimentConfig& cfg, std::uint64_t seed) {
  const std::uint64_t cv_seed = derive_seed(seed, {0x6376ULL /* "cv" */});
  switch (method) {
    case Method::SrmExact:
    case Method::SrmGreedy:
    case Method::SrmAuto: {
      auto fit = srm_select(train, cfg.penalty, srm_mode(method, train.size()));
      const double gamma = fit.model.gamma;
      const bool usable = !fit.model.subsample.empty();
      return {[model = std::move(fit.model)](PointView x) { return nn1_predict(model, x); }, gamma,
              usable};
    }
    case Method::CvNn: {
      auto model = fit_cv_1nn(train, cfg.folds, cv_seed);
      const double gamma = model.gamma;
      const bool usable = !model.subsample.empty();
      return {[model = std::move(model)](PointView x) { return nn1_predict(model, x); }, gamma,
              usable};
    }
    case Method::KstarNn: {
      const std::size_t k = fit_kstar(train, cfg.folds, cv_seed);
      return {[&train, k](PointView x) { return knn_predict(train, x, k); }, static_cast<double>(k)};
    }
    case Method::PlainNn:
      return {[&train](PointView x) { return knn_predict(train, x, 1); }, 1.0};
  }
  throw InputError("unknown method");
}

struct SummaryRow {
  Method method{};
  std::size_t n = 0;
  std::size_t trials = 0;
  double mean_test_error = 0.0;
  double std_test_error = 0.0;
  double mean_train_error = 0.0;
  double mean_gamma_or_k = 0.0;
  double mean_fit_millis = 0.0;
  double std_fit_millis = 0.0;
};

inline std::vector<SummaryRow> summarize(const std::vector<ExperimentRow>& rows,
                                         const ExperimentConfig& cfg) {
  std::vector<SummaryRow> out;
  for (Method m : cfg.methods) {
    for (std::size_t n : cfg.sizes) {
      std::vector<const ExperimentRow*> group;
      for (const auto& r : rows) {
        if (r.method == m && r.n == n) group.push_back(&r);
      }
      if (group.empty()) continue;
      SummaryRow s{m, n, group.size()};
      const auto k = static_cast<double>(group.size());
      for (auto* r : group) {
        s.mean_test_error += r->test_error;
        s.mean_train_error += r->train_error;
        s.mean_gamma_or_k += r->gamma_or_k;
        s.mean_fit_millis += r->fit_millis;
      }
      s.mean_test_error /= k;
      s.mean_train_error /= k;
      s.mean_gamma_or_k /= k;
      s.mean_fit_millis /= k;
      if (group.size() > 1) {
        double vt = 0.0, vf = 0.0;
        for (auto* r : group) {
          vt += (r->test_error - s.mean_test_error) * (r->test_error - s.mean_test_error);
          vf += (r->fit_millis - s.mean_fit_millis) * (r->fit_millis - s.mean_fit_millis);
        }
        s.std_test_error = std::sqrt(vt / (k - 1.0));
        s.std_fit_millis = std::sqrt(vf / (k - 1.0));
      }
      out.push_back(s);
    }
  }
  return out;
}

inline std::string summary_csv(const std::vector<SummaryRow>& rows, const ExperimentConfig& cfg) {
  const double bayes = bayes_risk(cfg.spiral);
  const double nn_limit = one_nn_asymptote(cfg.spiral);
  std::string out =
      "method,n,trials,mean_test_error,std_test_error,mean_train_error,mean_gamma_or_k,"
      "mean_fit_millis,std_fit_millis,bayes_risk,one_nn_asymptote,amplitude,frequency,seed,"
      "c1,c_dim,ddim,folds,test_size";
  out += io::kCrlf;
  for (const auto& s : rows) {
    out += std::string(to_string(s.method)) + "," + std::to_string(s.n) + "," +
           std::to_string(s.trials) + "," + io::format_double(s.mean_test_error) + "," +
           io::format_double(s.std_test_error) + "," + io::format_double(s.mean_train_error) + "," +
           io::format_double(s.mean_gamma_or_k) + "," + io::format_fixed(s.mean_fit_millis, 3) + "," +
           io::format_fixed(s.std_fit_millis, 3) + "," + io::format_fixed(bayes, 9) + "," +
           io::format_fixed(nn_limit, 9) + "," + io::format_double(cfg.spiral.amplitude) + "," +
           io::format_double(cfg.spiral.frequency) + "," + std::to_string(cfg.spiral.seed) + "," +
           io::format_double(cfg.penalty.c1) + "," + io::format_double(cfg.penalty.c_dim) + "," +
           io::format_double(cfg.penalty.ddim) + "," + std::to_string(cfg.folds) + "," +
           std::to_string(cfg.test_size);
    out += io::kCrlf;
  }
  return out;
}

/// Complete rows already present in a results file; a torn last line is dropped.
inline std::vector<ExperimentRow> read_results(const std::string& path) {
  std::vector<ExperimentRow> rows;
  if (!std::filesystem::exists(path)) return rows;
  const std::string text = io::read_file(path);
  std::size_t pos = 0;
  bool header = true;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    if (nl == std::string::npos) break;  // torn
    const std::string_view line(text.data() + pos, nl - pos);
    pos = nl + 1;
    if (header) {
      header = false;
      if (io::detail::trim(line) != kResultsHeader) throw InputError("results CSV: unexpected header in " + path);
      continue;
    }
    if (!io::detail::trim(line).empty()) rows.push_back(parse_row_csv(line));
  }
  return rows;
}

struct ExperimentOutcome {
  std::vector<ExperimentRow> rows;
  std::vector<SummaryRow> summary;
};

/// Runs (n, trial, method) in that nesting order, appending each row to the
/// results file as soon as it is computed. With `resume`, rows already in
/// the file are kept and skipped, so an interrupted run completes to the same
/// file.
inline ExperimentOutcome run_experiment(const ExperimentConfig& cfg,
                                        std::function<void(const ExperimentRow&)> progress = {}) {
  cfg.validate();
  std::vector<ExperimentRow> rows;
  std::set<std::tuple<Method, std::size_t, std::size_t>> done;
  if (cfg.resume) {
    rows = read_results(cfg.output);
    for (const auto& r : rows) done.insert({r.method, r.n, r.trial});
  }
  {
    std::ofstream out(cfg.output, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + cfg.output);
    out << kResultsHeader << io::kCrlf;
    for (const auto& r : rows) out << row_csv(r) << io::kCrlf;
  }
  std::ofstream out(cfg.output, std::ios::binary | std::ios::app);

  for (std::size_t n : cfg.sizes) {
    for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
      bool pending = false;
      for (Method m : cfg.methods) pending = pending || !done.count({m, n, trial});
      if (!pending) continue;

      SpiralParams test_params = cfg.spiral;
      test_params.seed = test_seed(cfg.spiral.seed, trial);
      const LabeledSample test = sample_spiral(test_params, cfg.test_size);
      SpiralParams train_params = cfg.spiral;
      train_params.seed = train_seed(cfg.spiral.seed, n, trial);
      const LabeledSample train = normalize_sample(sample_spiral(train_params, n));

      for (Method m : cfg.methods) {
        if (done.count({m, n, trial})) continue;
        const auto start = std::chrono::steady_clock::now();
        const FittedMethod fit = fit_method(m, train, cfg, train_params.seed);
        const auto stop = std::chrono::steady_clock::now();
        ExperimentRow row;
        row.method = m;
        row.n = n;
        row.trial = trial;
        row.seed = train_params.seed;
        row.gamma_or_k = fit.parameter;
        row.fit_millis = cfg.record_timing
                             ? std::chrono::duration<double, std::milli>(stop - start).count()
                             : 0.0;
        row.train_error = fit.usable ? zero_one_error(fit.predict, train) : 1.0;
        row.test_error = fit.usable ? zero_one_error(fit.predict, test) : 1.0;
        out << row_csv(row) << io::kCrlf;
        out.flush();
        rows.push_back(row);
        if (progress) progress(row);
      }
    }
  }
  out.close();

  // Summaries are computed from the values as written, so they can be
  // recomputed exactly from the results file.
  std::vector<ExperimentRow> written = read_results(cfg.output);
  ExperimentOutcome outcome{written, summarize(written, cfg)};
  io::write_file(cfg.summary_path(), summary_csv(outcome.summary, cfg));
  return outcome;
}

}  // namespace marginnn
