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

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <cmath>
#include <vector>

#include "ncs/significance.hpp"
#include "oracles.hpp"

namespace ncs {
namespace {

using Big = boost::multiprecision::cpp_dec_float_50;

double big_pow(const char* base, int exponent) {
  return pow(Big(base), exponent).convert_to<double>();
}

PairScore pair_with(double p_tail, double selectivity, bool degenerate = false) {
  PairScore p;
  p.p_tail = p_tail;
  p.surprisal = -std::log(p_tail);
  p.selectivity = selectivity;
  p.degenerate_selectivity = degenerate;
  return p;
}

TEST(PValueSurprisal, EqualsTailProbability) {
  EXPECT_EQ(p_value_surprisal(pair_with(0.01, 0.1)), 0.01);
  EXPECT_EQ(p_value_surprisal(pair_with(1.0, 0.1)), 1.0);
  EXPECT_EQ(p_value_surprisal(pair_with(5.0 / 2304.0, 0.1)), 5.0 / 2304.0);
}

TEST(PValueSelectivity, Examples) {
  EXPECT_EQ(p_value_selectivity(0.0, 24), 1.0);
  EXPECT_EQ(p_value_selectivity(1.0, 2), 0.0);
  EXPECT_EQ(p_value_selectivity(0.7, 1), 1.0);
  EXPECT_NEAR(p_value_selectivity(0.5, 24), big_pow("0.5", 23), 1e-22);
  EXPECT_NEAR(p_value_selectivity(0.5, 24), 1.1920928955078125e-07, 1e-22);
  EXPECT_EQ(p_value_selectivity(pair_with(0.1, 0.0, true), 24), 1.0);
}

TEST(PValueSelectivity, StableNearOne) {
  const double s = 1.0 - 1e-9;
  EXPECT_NEAR(p_value_selectivity(s, 3) / 1e-18, 1.0, 1e-6);
  EXPECT_GT(p_value_selectivity(s, 3), 0.0);
}

TEST(PValueSelectivity, MatchesIntegratedBetaDensity) {
  for (std::size_t c : {2u, 3u, 8u, 24u}) {
    const long double k = static_cast<long double>(c - 1);
    for (int g = 0; g < 10; ++g) {
      const double s = g / 9.0 * 0.95;
      const long double tail = oracle::integrate(
          [k](long double x) { return k * std::pow(1.0L - x, k - 1.0L); }, s, 1.0L);
      EXPECT_NEAR(p_value_selectivity(s, c), static_cast<double>(tail), 1e-10)
          << "C=" << c << " s=" << s;
    }
  }
}

TEST(PCombined, Examples) {
  EXPECT_EQ(p_combined(1.0, 1.0, 10, 5), 1.0);
  const double expected = 4800.0 * big_pow("0.4", 23);
  EXPECT_NEAR(expected, 3.377699720527872e-06, 1e-20);
  EXPECT_NEAR(p_combined(pair_with(0.01, 0.6), 100, 24), expected, 1e-18);
  EXPECT_EQ(p_combined(pair_with(0.25, 0.5), 4, 3), 1.0);
}

TEST(PCombined, IsMonotone) {
  double prev = 0.0;
  for (double p = 1e-8; p <= 1.0; p *= 1.7) {
    const double v = p_combined(p, 1e-3, 50, 4);
    EXPECT_GE(v, prev);
    EXPECT_LE(v, 1.0);
    prev = v;
  }
}

TEST(Assess, SignificantIffBelowAlpha) {
  const auto rec = assess(pair_with(1.0 / 200, 0.99), 200, 8, 0.05);
  EXPECT_EQ(rec.p_surprisal, 1.0 / 200);
  EXPECT_TRUE(rec.significant);
  EXPECT_EQ(rec.significant, rec.p_comb < rec.alpha);
  const auto weak = assess(pair_with(1.0 / 200, 0.3), 200, 8, 0.05);
  EXPECT_FALSE(weak.significant);
}

TEST(Ks, MatchesHandComputedStatistic) {
  // Sorted 0.1, 0.5, 0.6 against U(0,1); the largest gap is 1 - 0.6 after the last jump.
  EXPECT_NEAR(ks_statistic({0.6, 0.1, 0.5}, uniform_cdf), 0.4, 1e-15);
  EXPECT_NEAR(ks_statistic({0.5, 0.5}, uniform_cdf), 0.5, 1e-15);
  EXPECT_THROW(ks_statistic({}, uniform_cdf), Error);
}

TEST(Calibrate, SmallRunIsFinite) {
  CalibrationConfig cfg;
  cfg.samples = 200;
  cfg.neurons = 10;
  cfg.concepts = 3;
  cfg.trials = 1;
  const auto r = calibrate(cfg);
  for (double v : {r.ks_ptail_vs_uniform, r.ks_surprisal_vs_exp1, r.ks_selectivity_vs_beta,
                   r.null_fpr_at_alpha}) {
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
  EXPECT_EQ(r.trials, 1u);
}

TEST(Calibrate, IndependentOfWorkerCount) {
  CalibrationConfig cfg;
  cfg.samples = 300;
  cfg.neurons = 60;
  cfg.concepts = 4;
  cfg.trials = 6;
  cfg.seed = 77;
  EXPECT_EQ(calibrate(cfg, 1), calibrate(cfg, 4));
  EXPECT_THROW(calibrate(CalibrationConfig{.trials = 0}), Error);
}

TEST(Calibrate, TiedColumnHasUnitPValues) {
  const MIMatrix mi(5, 2, {0.2, 0.1, 0.2, 0.3, 0.2, 0.5, 0.2, 0.7, 0.2, 0.9});
  for (const auto& p : score_all(mi)) {
    if (p.concept_id == 0) {
      EXPECT_EQ(p_value_surprisal(p), 1.0);
    }
  }
}

}  // namespace
}  // namespace ncs
