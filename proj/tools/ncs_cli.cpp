/*
 * Copyright 2026 The NCS Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// ncs: neuron-concept saliency and selectivity toolkit.
//
//   ncs analyze   --activations A --concepts B --out report.json [...]
//   ncs calibrate --out calibration.json [...]
//   ncs probe     --method shap|optimal --activations A --concepts B --out probe.json
//   ncs gen       --kind null|planted --activations-out A --concepts-out B [...]
//
// Exit codes: 0 success, 2 usage, 3 data validation, 4 numeric failure.
// Failures print one JSON line {"error": ..., "message": ...} on stderr.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ncs/ncs.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

int exit_code_for(ncs::ErrorCode code) {
  switch (code) {
    case ncs::ErrorCode::kInvalidArgument:
      return kExitUsage;
    case ncs::ErrorCode::kNumericFailure:
    case ncs::ErrorCode::kNonPositiveProbability:
      return kExitNumeric;
    default:
      return kExitData;
  }
}

void report_error(std::string_view name, const std::string& message) {
  std::cerr << ncs::Json{{"error", name}, {"message", message}}.dump() << std::endl;
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  ncs::detail::write_file(path, text);
}

std::vector<ncs::ProbeMethod> parse_methods(const std::string& list) {
  std::vector<ncs::ProbeMethod> out;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(ncs::parse_probe_method(item));
  }
  return out;
}

ncs::MatrixFormat parse_format(const std::string& s) {
  if (s == "csv") return ncs::MatrixFormat::kCsv;
  if (s == "binary") return ncs::MatrixFormat::kBinary;
  ncs::fail(ncs::ErrorCode::kInvalidArgument, "unknown format '" + s + "'");
}

struct CommonOptions {
  std::string activations;
  std::string concepts;
  std::size_t layer_width = 0;
  std::size_t bins = 16;
  std::string scope = "pooled";
  std::string knee_scale = "front";
  double alpha = 0.05;
  double l2 = 1e-4;
  int max_iter = 100;
  double tol = 1e-8;
  std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--activations", o.activations, "activation matrix (CSV or NCIM)")
      ->required();
  cmd->add_option("--concepts", o.concepts, "concept matrix (CSV or NCIM)")->required();
  cmd->add_option("--layer-width", o.layer_width,
                  "units per layer for NCIM activations (0 = one layer)");
  cmd->add_option("--bins", o.bins, "equal-frequency bins for MI")->check(CLI::Range(2, 1 << 20));
  cmd->add_option("--scope", o.scope, "p_tail ranking population")
      ->check(CLI::IsMember({"pooled", "per_layer"}));
  cmd->add_option("--knee-scale", o.knee_scale, "min-max scaling population for the knee")
      ->check(CLI::IsMember({"front", "all"}));
  cmd->add_option("--alpha", o.alpha, "significance level");
  cmd->add_option("--l2", o.l2, "ridge penalty for probes");
  cmd->add_option("--max-iter", o.max_iter, "Newton iterations for probes");
  cmd->add_option("--tol", o.tol, "gradient tolerance for probes");
  cmd->add_option("--seed", o.seed, "seed (echoed in the report)");
}

ncs::AnalysisConfig make_config(const CommonOptions& o) {
  ncs::AnalysisConfig cfg;
  cfg.spec.n_bins = o.bins;
  cfg.scope = ncs::parse_scope(o.scope);
  cfg.knee_scale = ncs::parse_knee_scale(o.knee_scale);
  cfg.alpha = o.alpha;
  cfg.probe = {o.l2, o.max_iter, o.tol};
  cfg.seed = o.seed;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neuron-concept saliency and selectivity search"};
  app.require_subcommand(1);

  // analyze
  CommonOptions analyze_opts;
  std::string features_path, baselines, dump_mi, plot_path, analyze_out;
  std::size_t top_k = 3;
  bool plot_cutoff = false;
  auto* analyze = app.add_subcommand("analyze", "score all pairs and pick the knee point");
  add_common(analyze, analyze_opts);
  analyze->add_option("--features", features_path, "input feature table (CSV)");
  analyze->add_option("--top-k", top_k, "features reported for the knee")->check(CLI::PositiveNumber);
  analyze->add_option("--baselines", baselines, "comma-separated: shap,optimal");
  analyze->add_option("--dump-mi", dump_mi, "write the N x C MI matrix (NCIM f64)");
  analyze->add_option("--plot-csv", plot_path, "write per-pair plot data");
  analyze->add_flag("--plot-cutoff", plot_cutoff, "omit near-zero rows from plot data");
  analyze->add_option("--out", analyze_out, "report path ('-' = stdout)")->required();

  // calibrate
  ncs::CalibrationConfig cal;
  std::string cal_out;
  auto* calibrate = app.add_subcommand("calibrate", "Monte-Carlo check of the null distributions");
  calibrate->add_option("--M", cal.samples, "samples per null dataset");
  calibrate->add_option("--N", cal.neurons, "neurons");
  calibrate->add_option("--C", cal.concepts, "concepts");
  calibrate->add_option("--trials", cal.trials, "null datasets");
  calibrate->add_option("--seed", cal.seed, "master seed");
  calibrate->add_option("--bins", cal.spec.n_bins, "equal-frequency bins for MI");
  calibrate->add_option("--label-rate", cal.label_rate, "Bernoulli rate of concept labels");
  calibrate->add_option("--alpha", cal.alpha, "significance level");
  calibrate->add_option("--out", cal_out, "report path ('-' = stdout)")->required();

  // probe
  CommonOptions probe_opts;
  std::string method, probe_out;
  auto* probe = app.add_subcommand("probe", "sparse-probing baseline selections");
  add_common(probe, probe_opts);
  probe->add_option("--method", method, "shap or optimal")->required();
  probe->add_option("--out", probe_out, "output path ('-' = stdout)")->required();

  // gen
  std::string kind = "null", gen_format, act_out, con_out;
  std::size_t gen_m = 2000, gen_n = 200, gen_c = 8, gen_width = 0;
  std::uint64_t gen_seed = 0;
  double label_rate = 0.5, noise = 0.1;
  auto* gen = app.add_subcommand("gen", "write synthetic null or planted data");
  gen->add_option("--kind", kind, "null or planted")->check(CLI::IsMember({"null", "planted"}));
  gen->add_option("--M", gen_m, "samples");
  gen->add_option("--N", gen_n, "neurons");
  gen->add_option("--C", gen_c, "concepts");
  gen->add_option("--seed", gen_seed, "seed");
  gen->add_option("--label-rate", label_rate, "Bernoulli rate of concept labels");
  gen->add_option("--noise", noise, "Gaussian noise scale on the planted neuron");
  gen->add_option("--layer-width", gen_width, "units per layer in CSV headers (0 = one layer)");
  gen->add_option("--format", gen_format, "csv or binary (default: from the output extension)")->check(CLI::IsMember({"csv", "binary"}));
  gen->add_option("--activations-out", act_out, "activation output path")->required();
  gen->add_option("--concepts-out", con_out, "concept output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("UsageError", e.what());
    return kExitUsage;
  }

  try {
    if (*analyze) {
      auto cfg = make_config(analyze_opts);
      cfg.baselines = parse_methods(baselines);
      cfg.top_k = top_k;
      const auto a = ncs::load_activations(analyze_opts.activations, analyze_opts.layer_width);
      const auto b = ncs::load_concepts(analyze_opts.concepts);
      std::optional<ncs::FeatureTable> features;
      if (!features_path.empty()) features = ncs::load_features(features_path);
      const auto out = ncs::run_analyze(a, b, features ? &*features : nullptr, cfg);
      if (!dump_mi.empty()) {
        ncs::write_ncim(dump_mi, {ncs::Dtype::kFloat64, out.mi.neurons(), out.mi.concepts(),
                                  out.mi.values()});
      }
      if (!plot_path.empty()) {
        write_text(plot_path, ncs::plot_csv(out.scores, a, out.pareto, plot_cutoff));
      }
      write_text(analyze_out, ncs::dump_json(ncs::to_json(out.report)));
    } else if (*calibrate) {
      if (cal.trials == 0) {
        report_error("UsageError", "--trials must be at least 1");
        return kExitUsage;
      }
      const auto report = ncs::calibrate(cal);
      ncs::Json j{{"format_version", ncs::kReportFormatVersion},
                  {"config",
                   {{"M", cal.samples},
                    {"N", cal.neurons},
                    {"C", cal.concepts},
                    {"trials", cal.trials},
                    {"seed", cal.seed},
                    {"bins", cal.spec.n_bins},
                    {"label_rate", cal.label_rate},
                    {"alpha", cal.alpha}}},
                  {"calibration", ncs::to_json(report)}};
      write_text(cal_out, ncs::dump_json(j));
    } else if (*probe) {
      const auto m = ncs::parse_probe_method(method);
      const auto cfg = make_config(probe_opts);
      const auto a = ncs::load_activations(probe_opts.activations, probe_opts.layer_width);
      const auto b = ncs::load_concepts(probe_opts.concepts);
      const auto section = ncs::run_probe(a, b, m, cfg);
      ncs::Json j{{"format_version", ncs::kReportFormatVersion},
                  {"baselines", ncs::Json::array({ncs::to_json(section)})}};
      write_text(probe_out, ncs::dump_json(j));
    } else if (*gen) {
      if (gen_format.empty()) {
        gen_format = std::filesystem::path(act_out).extension() == ".csv" ? "csv" : "binary";
      }
      const auto format = parse_format(gen_format);
      ncs::ActivationMatrix a;
      ncs::ConceptMatrix b;
      if (kind == "planted") {
        auto d = ncs::generate_planted(gen_m, gen_n, gen_c, gen_seed, label_rate, noise);
        a = std::move(d.activations);
        b = std::move(d.concepts);
      } else {
        auto d = ncs::generate_null(gen_m, gen_n, gen_c, gen_seed, label_rate);
        a = std::move(d.activations);
        b = std::move(d.concepts);
      }
      if (gen_width > 0) {
        a = ncs::ActivationMatrix(a.rows(), a.cols(), a.column_major(),
                                  ncs::layered_meta(a.cols(), gen_width));
      }
      ncs::save_activations(act_out, a, format);
      ncs::save_concepts(con_out, b, format);
    }
  } catch (const ncs::Error& e) {
    report_error(ncs::error_name(e.code()), e.detail());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    report_error("NumericFailure", e.what());
    return kExitNumeric;
  }
  return kExitOk;
}
