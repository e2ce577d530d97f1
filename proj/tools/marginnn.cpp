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

// marginnn command line: fit, predict, experiment, gridcheck, sample.
//
// Exit codes: 0 success, 1 gridcheck failure, 2 input error, 3 model error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "marginnn/marginnn.hpp"

namespace {

using namespace marginnn;

constexpr int kExitCheckFailed = 1;
constexpr int kExitInput = 2;
constexpr int kExitModel = 3;

struct PenaltyFlags {
  double c1 = 2.0;
  double c_dim = 1.0;
  std::optional<double> ddim;
};

void add_penalty_flags(CLI::App* cmd, PenaltyFlags& f) {
  cmd->add_option("--c1", f.c1, "Penalty constant c1")->capture_default_str();
  cmd->add_option("--c-dim", f.c_dim, "Penalty constant c_dim")->capture_default_str();
  cmd->add_option("--ddim", f.ddim, "Doubling dimension (default: input dimension)");
}

int run_fit(const std::string& input, const std::string& model_path, const std::string& trace_path,
            const std::string& mode_name, const PenaltyFlags& flags) {
  const CoverMode mode = cover_mode_from_string(mode_name);
  const auto raw = io::load_sample(input);
  if (raw.empty()) throw InputError("sample file is empty");
  const double ddim = flags.ddim.value_or(static_cast<double>(raw.front().x.size()));
  const LabeledSample s = normalize_sample(raw, MetricSpec::euclidean(ddim));
  if (s.count(Label::Plus) == 0 || s.count(Label::Minus) == 0) {
    throw InputError("sample must contain both labels");
  }
  const PenaltyParams p{flags.c1, flags.c_dim, ddim};
  const SrmResult fit = srm_select(s, p, mode);
  io::write_file(model_path, io::model_json(fit.model));
  io::write_file(trace_path, io::trace_csv(fit.trace));
  const auto& row = fit.trace.chosen();
  std::printf("gamma* = %s\nremoved_count = %zu\nobjective = %s\n",
              io::format_double(fit.model.gamma).c_str(), fit.model.removed_count,
              io::format_double(row.objective).c_str());
  return 0;
}

int run_predict(const std::string& model_path, const std::string& points_path,
                const std::string& output) {
  const CondensedModel m = io::parse_model_json(io::read_file(model_path));
  const auto points = io::parse_points_csv(io::read_file(points_path));
  std::optional<LipschitzExtension> extension;
  if (m.subsample.count(Label::Plus) > 0 && m.subsample.count(Label::Minus) > 0) {
    extension.emplace(m);
  }
  std::string out;
  if (!points.empty()) {
    out = "index,label,f_value";
    out += io::kCrlf;
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != m.subsample.dim()) {
      throw InputError("point " + std::to_string(i) + " has dimension " +
                       std::to_string(points[i].size()) + ", model expects " +
                       std::to_string(m.subsample.dim()));
    }
    out += std::to_string(i) + "," + std::to_string(to_int(nn1_predict(m, points[i]))) + ",";
    if (extension) out += io::format_double((*extension)(points[i]));
    out += io::kCrlf;
  }
  if (output.empty() || output == "-") {
    std::cout << out;
  } else {
    io::write_file(output, out);
  }
  return 0;
}

int run_gridcheck(double n, const PenaltyFlags& flags, std::size_t levels) {
  const PenaltyParams p{flags.c1, flags.c_dim, flags.ddim.value_or(2.0)};
  const DominanceReport report = check_penalty_dominates(n, p, levels);
  const GridParams g = grid(n, p, levels);
  std::printf("n = %s, n_dim = %.9g, xi = %.9g, c1 = %g, c_dim = %g, ddim = %g\n",
              io::format_double(n).c_str(), g.n_dim, g.xi, p.c1, p.c_dim, p.ddim);
  std::printf("l,gamma_prev,penalty,epsilon,holds\n");
  for (const auto& row : report.rows) {
    std::printf("%zu,%.12g,%.12g,%.12g,%s\n", row.level, g.gammas[row.level - 2], row.penalty,
                row.epsilon, row.holds() ? "yes" : "no");
  }
  if (report.pass) {
    std::printf("PASS\n");
    return 0;
  }
  const auto& v = *report.first_violation;
  std::printf("FAIL at l = %zu: penalty %.12g < epsilon %.12g\n", v.level, v.penalty, v.epsilon);
  return kExitCheckFailed;
}

int run_sample(std::size_t n, const SpiralParams& p, const std::string& output, bool oracles) {
  const LabeledSample s = sample_spiral(p, n);
  const std::string csv = io::sample_csv(s);
  if (output.empty() || output == "-") {
    std::cout << csv;
  } else {
    io::write_file(output, csv);
  }
  if (oracles) {
    std::fprintf(stderr, "amplitude = %g, frequency = %g, seed = %llu\n", p.amplitude, p.frequency,
                 static_cast<unsigned long long>(p.seed));
    std::fprintf(stderr, "bayes_risk = %.9f\none_nn_asymptote = %.9f\n", bayes_risk(p),
                 one_nn_asymptote(p));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Margin-regularized 1-nearest-neighbor classification"};
  app.require_subcommand(1);

  // fit
  std::string fit_input, fit_model = "model.json", fit_trace = "trace.csv", fit_mode = "exact";
  PenaltyFlags fit_flags;
  auto* fit = app.add_subcommand("fit", "Condense a sample and select gamma by SRM");
  fit->add_option("input", fit_input, "Sample file (CSV x1..xd,label or JSON)")->required();
  fit->add_option("-m,--model", fit_model, "Model JSON output")->capture_default_str();
  fit->add_option("-t,--trace", fit_trace, "SRM trace CSV output")->capture_default_str();
  fit->add_option("--mode", fit_mode, "Cover mode: exact or greedy")->capture_default_str();
  add_penalty_flags(fit, fit_flags);

  // predict
  std::string pred_model, pred_points, pred_output;
  auto* predict = app.add_subcommand("predict", "Predict labels with a fitted model");
  predict->add_option("model", pred_model, "Model JSON")->required();
  predict->add_option("points", pred_points, "Points CSV (x1..xd)")->required();
  predict->add_option("-o,--output", pred_output, "Predictions CSV (default stdout)");

  // experiment
  std::string exp_config, exp_output;
  std::vector<std::string> exp_methods;
  std::vector<std::size_t> exp_sizes;
  std::size_t exp_trials = 0, exp_folds = 0, exp_test_size = 0;
  std::uint64_t exp_seed = 0;
  double exp_c1 = 0, exp_cdim = 0, exp_ddim = 0;
  bool exp_no_timing = false, exp_resume = false, exp_quiet = false;
  auto* experiment = app.add_subcommand("experiment", "Run the spiral benchmark");
  experiment->add_option("config", exp_config, "Experiment config JSON");
  auto* o_output = experiment->add_option("-o,--output", exp_output, "Results CSV path");
  auto* o_methods = experiment->add_option("--methods", exp_methods, "Methods to run");
  auto* o_sizes = experiment->add_option("--sizes", exp_sizes, "Ascending sample sizes");
  auto* o_trials = experiment->add_option("--trials", exp_trials, "Trials per size");
  auto* o_folds = experiment->add_option("--folds", exp_folds, "Cross-validation folds");
  auto* o_test = experiment->add_option("--test-size", exp_test_size, "Test points per trial");
  auto* o_seed = experiment->add_option("--seed", exp_seed, "Base seed");
  auto* o_c1 = experiment->add_option("--c1", exp_c1, "Penalty constant c1");
  auto* o_cdim = experiment->add_option("--c-dim", exp_cdim, "Penalty constant c_dim");
  auto* o_ddim = experiment->add_option("--ddim", exp_ddim, "Doubling dimension");
  experiment->add_flag("--no-timing", exp_no_timing, "Write fit_millis as 0");
  experiment->add_flag("--resume", exp_resume, "Keep rows already in the results file");
  experiment->add_flag("-q,--quiet", exp_quiet, "No progress output");

  // gridcheck
  double grid_n = 1e8;
  std::size_t grid_levels = 50;
  PenaltyFlags grid_flags;
  auto* gridcheck = app.add_subcommand("gridcheck", "Check penalty dominance on the margin grid");
  gridcheck->add_option("-n,--n", grid_n, "Sample size")->capture_default_str();
  gridcheck->add_option("--levels", grid_levels, "Grid levels")->capture_default_str();
  add_penalty_flags(gridcheck, grid_flags);

  // sample
  std::size_t sample_n = 1000;
  SpiralParams sample_params;
  std::string sample_output;
  bool sample_oracles = false;
  auto* sample = app.add_subcommand("sample", "Emit a spiral sample as CSV");
  sample->add_option("-n,--n", sample_n, "Number of points")->capture_default_str();
  sample->add_option("--amplitude", sample_params.amplitude, "Spiral amplitude A")->capture_default_str();
  sample->add_option("--frequency", sample_params.frequency, "Spiral frequency omega")->capture_default_str();
  sample->add_option("--seed", sample_params.seed, "Seed")->capture_default_str();
  sample->add_option("-o,--output", sample_output, "Output CSV (default stdout)");
  sample->add_flag("--oracles", sample_oracles, "Print Bayes risk and 1-NN asymptote to stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*fit) return run_fit(fit_input, fit_model, fit_trace, fit_mode, fit_flags);
    if (*predict) return run_predict(pred_model, pred_points, pred_output);
    if (*gridcheck) return run_gridcheck(grid_n, grid_flags, grid_levels);
    if (*sample) return run_sample(sample_n, sample_params, sample_output, sample_oracles);
    if (*experiment) {
      ExperimentConfig cfg;
      if (!exp_config.empty()) {
        nlohmann::json j;
        try {
          j = nlohmann::json::parse(io::read_file(exp_config));
        } catch (const nlohmann::json::exception& e) {
          throw InputError(std::string("config: ") + e.what());
        }
        cfg = ExperimentConfig::from_json(j);
      }
      if (o_output->count()) cfg.output = exp_output;
      if (o_methods->count()) {
        cfg.methods.clear();
        for (const auto& m : exp_methods) cfg.methods.push_back(method_from_string(m));
      }
      if (o_sizes->count()) cfg.sizes = exp_sizes;
      if (o_trials->count()) cfg.trials = exp_trials;
      if (o_folds->count()) cfg.folds = exp_folds;
      if (o_test->count()) cfg.test_size = exp_test_size;
      if (o_seed->count()) cfg.spiral.seed = exp_seed;
      if (o_c1->count()) cfg.penalty.c1 = exp_c1;
      if (o_cdim->count()) cfg.penalty.c_dim = exp_cdim;
      if (o_ddim->count()) cfg.penalty.ddim = exp_ddim;
      if (exp_no_timing) cfg.record_timing = false;
      if (exp_resume) cfg.resume = true;
      cfg.validate();
      const auto outcome = run_experiment(cfg, [&](const ExperimentRow& r) {
        if (!exp_quiet) {
          std::fprintf(stderr, "%s n=%zu trial=%zu test_error=%.4f fit=%.1fms\n",
                       std::string(to_string(r.method)).c_str(), r.n, r.trial, r.test_error,
                       r.fit_millis);
        }
      });
      std::printf("method,n,mean_test_error,std_test_error,mean_fit_millis\n");
      for (const auto& s : outcome.summary) {
        std::printf("%s,%zu,%.6f,%.6f,%.3f\n", std::string(to_string(s.method)).c_str(), s.n,
                    s.mean_test_error, s.std_test_error, s.mean_fit_millis);
      }
      std::printf("bayes_risk = %.9f\none_nn_asymptote = %.9f\n", bayes_risk(cfg.spiral),
                  one_nn_asymptote(cfg.spiral));
      return 0;
    }
  } catch (const InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  } catch (const ModelError& e) {
    std::fprintf(stderr, "model error: %s\n", e.what());
    return kExitModel;
  }
  return kExitInput;
}
