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

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "ncs/io.hpp"
#include "ncs/report.hpp"
#include "ncs/synth.hpp"

namespace ncs {
namespace {

AnalysisConfig full_config() {
  AnalysisConfig cfg;
  cfg.baselines = {ProbeMethod::kShap, ProbeMethod::kOptimal};
  return cfg;
}

TEST(RunAnalyze, PlantedPairIsSignificantKnee) {
  const auto d = generate_planted(2000, 200, 8, 11, 0.5, 0.0);
  const auto out = run_analyze(d.activations, d.concepts, nullptr, full_config());
  const auto& r = out.report;
  EXPECT_EQ(r.knee.pair.score.neuron, 0u);
  EXPECT_EQ(r.knee.pair.score.concept_id, 0u);
  EXPECT_TRUE(r.knee.significance.significant);
  EXPECT_NEAR(r.knee.pair.score.surprisal, std::log(200.0), 1e-12);
  EXPECT_EQ(r.dims.samples, 2000u);
  EXPECT_EQ(r.dims.neurons, 200u);
  EXPECT_EQ(r.dims.concepts, 8u);
  ASSERT_EQ(r.baselines.size(), 2u);
  for (const auto& section : r.baselines) {
    EXPECT_EQ(section.entries.size(), 8u);
    EXPECT_TRUE(section.pareto_dominated);
    EXPECT_EQ(section.entries[0].selection.neuron, 0u);
  }
}

TEST(RunAnalyze, NullDataIsRarelySignificant) {
  AnalysisConfig cfg;
  int significant = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto d = generate_null(500, 500, 24, 1000 + seed, 0.5);
    significant += run_analyze(d.activations, d.concepts, nullptr, cfg).report.knee.significance.significant;
  }
  EXPECT_LE(significant, 1);
}

TEST(Report, RoundTripsThroughJson) {
  const auto d = generate_planted(300, 12, 3, 12, 0.5, 0.2);
  std::vector<double> feat(300);
  for (std::size_t i = 0; i < 300; ++i) feat[i] = d.activations(i, 0) * 2.0;
  const FeatureTable table({{"f", FeatureKind::kNumeric, feat},
                            {"g", FeatureKind::kCategorical, std::vector<double>(300, 1.0)}});
  auto cfg = full_config();
  cfg.scope = Scope::kPerLayer;
  cfg.knee_scale = KneeScale::kAll;
  auto out = run_analyze(d.activations, d.concepts, &table, cfg);
  out.report.calibration = CalibrationReport{0.01, 0.02, 0.03, 0.0, 5};
  const auto text = dump_json(to_json(out.report));
  const auto back = report_from_json(Json::parse(text));
  EXPECT_EQ(back, out.report);
  EXPECT_EQ(dump_json(to_json(back)), text);
  ASSERT_TRUE(back.knee.top_features.has_value());
  EXPECT_EQ(back.knee.top_features->ranked.front().first, "f");
  EXPECT_EQ(Json::parse(text)["format_version"], std::string(kReportFormatVersion));
}

TEST(Report, IsDeterministic) {
  const auto d = generate_null(200, 30, 4, 13, 0.5);
  const auto a = dump_json(to_json(run_analyze(d.activations, d.concepts, nullptr, full_config()).report));
  const auto b = dump_json(to_json(run_analyze(d.activations, d.concepts, nullptr, full_config()).report));
  EXPECT_EQ(a, b);
}

TEST(Report, ScoresRecomputableFromMiDump) {
  const auto d = generate_planted(600, 40, 5, 14, 0.5, 0.1);
  const auto out = run_analyze(d.activations, d.concepts, nullptr, AnalysisConfig{});
  // Reload the MI matrix through the binary dump format.
  const auto dumped = decode_ncim(encode_ncim({Dtype::kFloat64, 40, 5, out.mi.values()}));
  const MIMatrix mi(40, 5, dumped.row_major);
  const std::size_t n = 40, c = 5;
  for (const auto& rp : out.report.front) {
    const auto& p = rp.score;
    std::size_t at_least = 0;
    for (std::size_t i = 0; i < n; ++i) at_least += mi(i, p.concept_id) >= mi(p.neuron, p.concept_id);
    const double tail = static_cast<double>(at_least) / n;
    EXPECT_NEAR(p.p_tail, tail, 1e-12);
    EXPECT_NEAR(p.surprisal, -std::log(tail), 1e-12);
    double total = 0;
    for (std::size_t j = 0; j < c; ++j) {
      std::size_t k = 0;
      for (std::size_t i = 0; i < n; ++i) k += mi(i, j) >= mi(p.neuron, j);
      total += -std::log(static_cast<double>(k) / n);
    }
    EXPECT_NEAR(p.selectivity, p.surprisal / total, 1e-12);
  }
  const auto& knee = out.report.knee;
  const double psel = std::pow(1.0 - knee.pair.score.selectivity, c - 1);
  EXPECT_NEAR(knee.significance.p_comb,
              std::min(2.0 * n * c * std::min(knee.pair.score.p_tail, psel), 1.0), 1e-12);
}

TEST(PlotCsv, CutoffOnlyDropsLowRows) {
  const auto d = generate_null(300, 50, 4, 15, 0.5);
  const auto out = run_analyze(d.activations, d.concepts, nullptr, AnalysisConfig{});
  const auto full = plot_csv(out.scores, d.activations, out.pareto, false);
  const auto cut = plot_csv(out.scores, d.activations, out.pareto, true);
  auto lines = [](const std::string& s) { return std::count(s.begin(), s.end(), '\n'); };
  EXPECT_EQ(lines(full), 1 + 200);
  double max_s = 0;
  std::size_t dropped = 0;
  for (const auto& p : out.scores) max_s = std::max(max_s, p.surprisal);
  for (const auto& p : out.scores) dropped += p.surprisal < 0.01 * max_s && p.selectivity < 0.01;
  EXPECT_GT(dropped, 0u);
  EXPECT_EQ(lines(cut), 1 + 200 - static_cast<long>(dropped));
  EXPECT_EQ(full.substr(0, full.find('\n')),
            "pair_id,neuron,layer,concept,surprisal,selectivity,on_front,is_knee");
  // Exactly one knee row.
  std::istringstream in(full);
  std::string line;
  std::getline(in, line);
  int knees = 0;
  while (std::getline(in, line)) knees += line.back() == '1';
  EXPECT_EQ(knees, 1);
}

TEST(Report, ParsesEnumNames) {
  EXPECT_EQ(parse_scope("per_layer"), Scope::kPerLayer);
  EXPECT_EQ(parse_knee_scale("all"), KneeScale::kAll);
  EXPECT_THROW(parse_scope("global"), Error);
  EXPECT_THROW(parse_knee_scale("pairs"), Error);
}

}  // namespace
}  // namespace ncs
