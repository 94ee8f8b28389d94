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

#ifndef NCS_REPORT_HPP_
#define NCS_REPORT_HPP_

// End-to-end analysis and its JSON report. Reports carry no timestamps or
// host information, so equal inputs and config give byte-identical output.

#include <json.hpp>  // nlohmann/json, vendored

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ncs/error.hpp"
#include "ncs/features.hpp"
#include "ncs/io.hpp"
#include "ncs/matrix.hpp"
#include "ncs/metrics.hpp"
#include "ncs/mi.hpp"
#include "ncs/pareto.hpp"
#include "ncs/probes.hpp"
#include "ncs/significance.hpp"

namespace ncs {

inline constexpr std::string_view kReportFormatVersion = "ncs-report/1";

using Json = nlohmann::ordered_json;

constexpr std::string_view scope_name(Scope s) {
  return s == Scope::kPooled ? "pooled" : "per_layer";
}

inline Scope parse_scope(std::string_view s) {
  if (s == "pooled") return Scope::kPooled;
  if (s == "per_layer") return Scope::kPerLayer;
  fail(ErrorCode::kInvalidArgument, "unknown scope '" + std::string(s) + "'");
}

constexpr std::string_view knee_scale_name(KneeScale s) {
  return s == KneeScale::kFront ? "front" : "all";
}

inline KneeScale parse_knee_scale(std::string_view s) {
  if (s == "front") return KneeScale::kFront;
  if (s == "all") return KneeScale::kAll;
  fail(ErrorCode::kInvalidArgument, "unknown knee scale '" + std::string(s) + "'");
}

struct AnalysisConfig {
  BinningSpec spec{};
  Scope scope = Scope::kPooled;
  double alpha = 0.05;
  KneeScale knee_scale = KneeScale::kFront;
  LogisticOptions probe{};
  std::uint64_t seed = 0;
  std::vector<ProbeMethod> baselines;
  std::size_t top_k = 3;

  bool operator==(const AnalysisConfig&) const = default;
};

/// A pair together with the labels needed to read it without the inputs.
struct ReportPair {
  PairScore score;
  int layer = 1;
  std::size_t unit = 0;
  std::string concept_name;

  bool operator==(const ReportPair&) const = default;
};

struct KneeSection {
  ReportPair pair;
  double scaled_sum = 0.0;
  SignificanceRecord significance;
  std::optional<FeatureRanking> top_features;

  bool operator==(const KneeSection&) const = default;
};

struct BaselineEntry {
  ProbeSelection selection;
  ReportPair pair;

  bool operator==(const BaselineEntry&) const = default;
};

struct BaselineSection {
  ProbeMethod method = ProbeMethod::kShap;
  std::vector<BaselineEntry> entries;
  bool pareto_dominated = true;

  bool operator==(const BaselineSection&) const = default;
};

struct ReportDims {
  std::size_t samples = 0;
  std::size_t neurons = 0;
  std::size_t concepts = 0;
  std::size_t layers = 0;

  bool operator==(const ReportDims&) const = default;
};

struct AnalysisReport {
  std::string format_version{kReportFormatVersion};
  AnalysisConfig config;
  ReportDims dims;
  KneeSection knee;
  std::vector<ReportPair> front;
  std::vector<BaselineSection> baselines;
  std::optional<CalibrationReport> calibration;
  bool probe_inputs_standardized = true;

  bool operator==(const AnalysisReport&) const = default;
};

/// Everything a run produces; the report plus the intermediates it is
/// derived from.
struct AnalysisOutputs {
  AnalysisReport report;
  MIMatrix mi;
  std::vector<PairScore> scores;
  ParetoResult pareto;
};

inline ReportPair make_report_pair(const PairScore& p, const ActivationMatrix& a,
                                   const ConceptMatrix& b) {
  return {p, a.meta()[p.neuron].layer_index, a.meta()[p.neuron].unit_index,
          b.names()[p.concept_id]};
}

inline BaselineSection build_baseline(ProbeMethod method, const ActivationMatrix& a,
                                      const ConceptMatrix& b,
                                      const std::vector<PairScore>& scores,
                                      const std::vector<PairScore>& front,
                                      const LogisticOptions& opts) {
  BaselineSection section;
  section.method = method;
  std::vector<PairScore> picked;
  for (const auto& sel : run_probes(a, b, method, opts)) {
    const auto pair = score_baseline(sel, scores, b.cols());
    picked.push_back(pair);
    section.entries.push_back({sel, make_report_pair(pair, a, b)});
  }
  section.pareto_dominated = check_baseline_domination(front, picked);
  return section;
}

/// load -> MI -> scores -> front -> knee -> significance -> features ->
/// baselines, minus the file handling.
inline AnalysisOutputs run_analyze(const ActivationMatrix& a, const ConceptMatrix& b,
                                   const FeatureTable* features,
                                   const AnalysisConfig& config) {
  require_same_rows(a, b);
  require(config.alpha > 0.0 && config.alpha <= 1.0, ErrorCode::kInvalidArgument,
          "alpha must lie in (0, 1]");
  AnalysisOutputs out;
  out.mi = mi_matrix(a, b, config.spec);
  out.scores = score_all(out.mi, a.meta(), config.scope);
  out.pareto = extract_pareto(out.scores, config.knee_scale);

  auto& report = out.report;
  report.config = config;
  report.dims = {a.rows(), a.cols(), b.cols(), a.layer_count()};
  report.knee.pair = make_report_pair(out.pareto.knee, a, b);
  report.knee.scaled_sum = out.pareto.knee_scaled_sum;
  report.knee.significance = assess(out.pareto.knee, a.cols(), b.cols(), config.alpha);
  if (features != nullptr) {
    const auto& knee = out.pareto.knee;
    report.knee.top_features =
        top_features(*features, a.column(knee.neuron), b.column(knee.concept_id), config.top_k,
                     config.spec, knee.neuron, knee.concept_id);
  }
  for (const auto& p : out.pareto.front) report.front.push_back(make_report_pair(p, a, b));
  for (auto method : config.baselines) {
    report.baselines.push_back(
        build_baseline(method, a, b, out.scores, out.pareto.front, config.probe));
  }
  return out;
}

/// Baseline section only; scores are still computed so picks can be placed
/// in surprisal-selectivity space.
inline BaselineSection run_probe(const ActivationMatrix& a, const ConceptMatrix& b,
                                 ProbeMethod method, const AnalysisConfig& config) {
  const auto mi = mi_matrix(a, b, config.spec);
  const auto scores = score_all(mi, a.meta(), config.scope);
  const auto pareto = extract_pareto(scores, config.knee_scale);
  return build_baseline(method, a, b, scores, pareto.front, config.probe);
}

// ---------------------------------------------------------------------------
// JSON

inline Json to_json(const ReportPair& p) {
  return Json{{"neuron", p.score.neuron},
              {"layer", p.layer},
              {"unit", p.unit},
              {"concept", p.score.concept_id},
              {"concept_name", p.concept_name},
              {"mi", p.score.mi},
              {"p_tail", p.score.p_tail},
              {"surprisal", p.score.surprisal},
              {"selectivity", p.score.selectivity},
              {"degenerate_selectivity", p.score.degenerate_selectivity}};
}

inline ReportPair report_pair_from_json(const Json& j) {
  ReportPair p;
  p.score.neuron = j.at("neuron").get<std::size_t>();
  p.score.concept_id = j.at("concept").get<std::size_t>();
  p.score.mi = j.at("mi").get<double>();
  p.score.p_tail = j.at("p_tail").get<double>();
  p.score.surprisal = j.at("surprisal").get<double>();
  p.score.selectivity = j.at("selectivity").get<double>();
  p.score.degenerate_selectivity = j.at("degenerate_selectivity").get<bool>();
  p.layer = j.at("layer").get<int>();
  p.unit = j.at("unit").get<std::size_t>();
  p.concept_name = j.at("concept_name").get<std::string>();
  return p;
}

inline Json to_json(const SignificanceRecord& s) {
  return Json{{"p_surprisal", s.p_surprisal},
              {"p_selectivity", s.p_selectivity},
              {"p_comb", s.p_comb},
              {"alpha", s.alpha},
              {"significant", s.significant}};
}

inline SignificanceRecord significance_from_json(const Json& j) {
  return {j.at("p_surprisal").get<double>(), j.at("p_selectivity").get<double>(),
          j.at("p_comb").get<double>(), j.at("alpha").get<double>(),
          j.at("significant").get<bool>()};
}

inline Json to_json(const FeatureRanking& f) {
  Json ranked = Json::array();
  for (const auto& [name, mi] : f.ranked) ranked.push_back(Json{{"feature", name}, {"mi", mi}});
  return Json{{"neuron", f.neuron}, {"concept", f.concept_id}, {"k", f.k}, {"ranked", ranked}};
}

inline FeatureRanking feature_ranking_from_json(const Json& j) {
  FeatureRanking f;
  f.neuron = j.at("neuron").get<std::size_t>();
  f.concept_id = j.at("concept").get<std::size_t>();
  f.k = j.at("k").get<std::size_t>();
  for (const auto& r : j.at("ranked")) {
    f.ranked.emplace_back(r.at("feature").get<std::string>(), r.at("mi").get<double>());
  }
  return f;
}

inline Json to_json(const ProbeSelection& s) {
  return Json{{"concept", s.concept_id},
              {"neuron", s.neuron},
              {"score", s.score},
              {"method", probe_method_name(s.method)}};
}

inline ProbeSelection probe_selection_from_json(const Json& j) {
  return {j.at("concept").get<std::size_t>(), j.at("neuron").get<std::size_t>(),
          j.at("score").get<double>(), parse_probe_method(j.at("method").get<std::string>())};
}

inline Json to_json(const BaselineSection& b) {
  Json entries = Json::array();
  for (const auto& e : b.entries) {
    entries.push_back(Json{{"selection", to_json(e.selection)}, {"pair", to_json(e.pair)}});
  }
  return Json{{"method", probe_method_name(b.method)},
              {"pareto_dominated", b.pareto_dominated},
              {"selections", entries}};
}

inline BaselineSection baseline_from_json(const Json& j) {
  BaselineSection b;
  b.method = parse_probe_method(j.at("method").get<std::string>());
  b.pareto_dominated = j.at("pareto_dominated").get<bool>();
  for (const auto& e : j.at("selections")) {
    b.entries.push_back(
        {probe_selection_from_json(e.at("selection")), report_pair_from_json(e.at("pair"))});
  }
  return b;
}

inline Json to_json(const CalibrationReport& c) {
  return Json{{"ks_ptail_vs_uniform", c.ks_ptail_vs_uniform},
              {"ks_surprisal_vs_exp1", c.ks_surprisal_vs_exp1},
              {"ks_selectivity_vs_beta", c.ks_selectivity_vs_beta},
              {"null_fpr_at_alpha", c.null_fpr_at_alpha},
              {"trials", c.trials}};
}

inline CalibrationReport calibration_from_json(const Json& j) {
  return {j.at("ks_ptail_vs_uniform").get<double>(), j.at("ks_surprisal_vs_exp1").get<double>(),
          j.at("ks_selectivity_vs_beta").get<double>(), j.at("null_fpr_at_alpha").get<double>(),
          j.at("trials").get<std::size_t>()};
}

inline Json to_json(const AnalysisReport& r) {
  Json baselines_json = Json::array();
  for (const auto& b : r.baselines) baselines_json.push_back(to_json(b));
  Json method_names = Json::array();
  for (auto m : r.config.baselines) method_names.push_back(probe_method_name(m));
  Json front = Json::array();
  for (const auto& p : r.front) front.push_back(to_json(p));

  Json knee = to_json(r.knee.pair);
  knee["scaled_sum"] = r.knee.scaled_sum;
  knee["significance"] = to_json(r.knee.significance);
  knee["top_features"] = r.knee.top_features ? to_json(*r.knee.top_features) : Json(nullptr);

  return Json{
      {"format_version", r.format_version},
      {"config",
       {{"bins", r.config.spec.n_bins},
        {"scope", scope_name(r.config.scope)},
        {"alpha", r.config.alpha},
        {"l2", r.config.probe.l2},
        {"max_iter", r.config.probe.max_iter},
        {"tol", r.config.probe.tol},
        {"knee_scale", knee_scale_name(r.config.knee_scale)},
        {"seed", r.config.seed},
        {"top_k", r.config.top_k},
        {"baselines", method_names}}},
      {"dims",
       {{"M", r.dims.samples},
        {"N", r.dims.neurons},
        {"C", r.dims.concepts},
        {"layers", r.dims.layers}}},
      {"preprocessing", {{"probe_inputs_standardized", r.probe_inputs_standardized}}},
      {"knee", knee},
      {"front", front},
      {"baselines", baselines_json},
      {"calibration", r.calibration ? to_json(*r.calibration) : Json(nullptr)},
  };
}

inline AnalysisReport report_from_json(const Json& j) {
  AnalysisReport r;
  r.format_version = j.at("format_version").get<std::string>();
  require(r.format_version == kReportFormatVersion, ErrorCode::kMalformedHeader,
          "unsupported report version '" + r.format_version + "'");
  const auto& c = j.at("config");
  r.config.spec.n_bins = c.at("bins").get<std::size_t>();
  r.config.scope = parse_scope(c.at("scope").get<std::string>());
  r.config.alpha = c.at("alpha").get<double>();
  r.config.probe.l2 = c.at("l2").get<double>();
  r.config.probe.max_iter = c.at("max_iter").get<int>();
  r.config.probe.tol = c.at("tol").get<double>();
  r.config.knee_scale = parse_knee_scale(c.at("knee_scale").get<std::string>());
  r.config.seed = c.at("seed").get<std::uint64_t>();
  r.config.top_k = c.at("top_k").get<std::size_t>();
  for (const auto& m : c.at("baselines")) {
    r.config.baselines.push_back(parse_probe_method(m.get<std::string>()));
  }
  const auto& d = j.at("dims");
  r.dims = {d.at("M").get<std::size_t>(), d.at("N").get<std::size_t>(),
            d.at("C").get<std::size_t>(), d.at("layers").get<std::size_t>()};
  r.probe_inputs_standardized =
      j.at("preprocessing").at("probe_inputs_standardized").get<bool>();
  const auto& k = j.at("knee");
  r.knee.pair = report_pair_from_json(k);
  r.knee.scaled_sum = k.at("scaled_sum").get<double>();
  r.knee.significance = significance_from_json(k.at("significance"));
  if (!k.at("top_features").is_null()) {
    r.knee.top_features = feature_ranking_from_json(k.at("top_features"));
  }
  for (const auto& p : j.at("front")) r.front.push_back(report_pair_from_json(p));
  for (const auto& b : j.at("baselines")) r.baselines.push_back(baseline_from_json(b));
  if (!j.at("calibration").is_null()) r.calibration = calibration_from_json(j.at("calibration"));
  return r;
}

inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Plot data

/// One row per pair. With `cutoff`, rows whose surprisal is below 1% of the
/// maximum and whose selectivity is below 0.01 are left out.
inline std::string plot_csv(const std::vector<PairScore>& scores, const ActivationMatrix& a,
                            const ParetoResult& pareto, bool cutoff) {
  double max_surprisal = 0.0;
  for (const auto& p : scores) max_surprisal = std::max(max_surprisal, p.surprisal);
  const auto key = [](const PairScore& p) { return std::pair{p.neuron, p.concept_id}; };
  std::set<std::pair<std::size_t, std::size_t>> on_front;
  for (const auto& p : pareto.front) on_front.insert(key(p));

  std::string out = "pair_id,neuron,layer,concept,surprisal,selectivity,on_front,is_knee\n";
  const std::size_t concepts = scores.empty() ? 1 : scores.back().concept_id + 1;
  for (const auto& p : scores) {
    if (cutoff && p.surprisal < 0.01 * max_surprisal && p.selectivity < 0.01) continue;
    out += std::to_string(p.neuron * concepts + p.concept_id) + ',' + std::to_string(p.neuron) +
           ',' + std::to_string(a.meta()[p.neuron].layer_index) + ',' +
           std::to_string(p.concept_id) + ',' + detail::format_double(p.surprisal) + ',' +
           detail::format_double(p.selectivity) + ',' + (on_front.count(key(p)) ? '1' : '0') +
           ',' + (key(p) == key(pareto.knee) ? '1' : '0') + '\n';
  }
  return out;
}

}  // namespace ncs

#endif  // NCS_REPORT_HPP_
