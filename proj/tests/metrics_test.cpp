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
#include <vector>

#include "ncs/metrics.hpp"
#include "ncs/rng.hpp"
#include "ncs/synth.hpp"
#include "oracles.hpp"

namespace ncs {
namespace {

TEST(PTail, CountsTiesWithGreaterEqual) {
  const std::vector<double> col = {0.3, 0.3, 0.1};
  EXPECT_DOUBLE_EQ(p_tail(col, 0), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(p_tail(col, 2), 1.0);
  const std::vector<double> top = {0.1, 0.9, 0.2, 0.4};
  EXPECT_DOUBLE_EQ(p_tail(top, 1), 0.25);
  EXPECT_THROW(p_tail(top, 4), Error);
}

TEST(PTail, IsAntitoneInOwnValue) {
  CounterRng rng(1, 0);
  std::vector<double> col(50);
  for (auto& v : col) v = rng.uniform();
  double prev = 2.0;
  for (double v = -0.1; v <= 1.1; v += 0.01) {
    col[7] = v;
    const double p = p_tail(col, 7);
    EXPECT_LE(p, prev);
    prev = p;
  }
}

TEST(Surprisal, Values) {
  EXPECT_EQ(surprisal(1.0), 0.0);
  EXPECT_NEAR(surprisal(1.0 / 2304.0), 7.742402021815782, 1e-12);
  EXPECT_NEAR(surprisal(5.0 / 2304.0), 6.132964109381681, 1e-12);
  EXPECT_THROW(surprisal(0.0), Error);
  EXPECT_THROW(surprisal(1.5), Error);
}

TEST(Selectivity, Examples) {
  const std::vector<double> row = {std::log(4.0), std::log(2.0), 0.0};
  const auto s = selectivity(row, 0);
  EXPECT_NEAR(s.value, 2.0 / 3.0, 1e-15);
  EXPECT_FALSE(s.degenerate);
  const std::vector<double> flat(6, 0.7);
  for (std::size_t j = 0; j < 6; ++j) EXPECT_NEAR(selectivity(flat, j).value, 1.0 / 6.0, 1e-15);
  EXPECT_EQ(selectivity(std::vector<double>{0.2}, 0).value, 1.0);
  const auto zero = selectivity(std::vector<double>{0.0, 0.0}, 1);
  EXPECT_TRUE(zero.degenerate);
  EXPECT_EQ(zero.value, 0.0);
  EXPECT_THROW(selectivity(row, 3), Error);
}

TEST(ScoreAll, SingleNeuronIsDegenerate) {
  const MIMatrix mi(1, 3, {0.1, 0.2, 0.3});
  for (const auto& p : score_all(mi)) {
    EXPECT_EQ(p.p_tail, 1.0);
    EXPECT_EQ(p.surprisal, 0.0);
    EXPECT_TRUE(p.degenerate_selectivity);
  }
}

TEST(ScoreAll, MatchesDirectCounts) {
  CounterRng rng(2, 0);
  const std::size_t n = 40, c = 5;
  std::vector<double> v(n * c);
  // Coarse values force plenty of ties.
  for (auto& x : v) x = static_cast<double>(rng.below(6)) * 0.01;
  const MIMatrix mi(n, c, v);
  const auto scores = score_all(mi);
  ASSERT_EQ(scores.size(), n * c);
  for (std::size_t j = 0; j < c; ++j) {
    const auto col = mi.column(j);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& p = scores[i * c + j];
      EXPECT_EQ(p.neuron, i);
      EXPECT_EQ(p.concept_id, j);
      EXPECT_EQ(p.p_tail, oracle::tail_fraction(col, i));
      EXPECT_EQ(p.surprisal, -std::log(p.p_tail));
      const double k = p.p_tail * n;
      EXPECT_NEAR(k, std::round(k), 1e-9);
    }
  }
}

TEST(ScoreAll, SelectivityRowsSumToOne) {
  const auto d = generate_null(300, 60, 6, 3, 0.5);
  const auto scores = score_all(mi_matrix(d.activations, d.concepts));
  for (std::size_t i = 0; i < 60; ++i) {
    double sum = 0;
    bool degenerate = scores[i * 6].degenerate_selectivity;
    for (std::size_t j = 0; j < 6; ++j) {
      const auto& p = scores[i * 6 + j];
      EXPECT_EQ(p.degenerate_selectivity, degenerate);
      EXPECT_GE(p.selectivity, 0.0);
      EXPECT_LE(p.selectivity, 1.0);
      EXPECT_GE(p.surprisal, 0.0);
      EXPECT_LE(p.surprisal, std::log(60.0) + 1e-15);
      sum += p.selectivity;
    }
    if (!degenerate) {
      EXPECT_NEAR(sum, 1.0, 1e-12);
    }
  }
}

TEST(ScoreAll, ColumnTransformKeepsTails) {
  CounterRng rng(4, 0);
  const std::size_t n = 30, c = 3;
  std::vector<double> v(n * c), w(n * c);
  for (std::size_t k = 0; k < v.size(); ++k) {
    v[k] = rng.uniform();
    w[k] = k % c == 1 ? std::sqrt(v[k]) * 10.0 + 1.0 : v[k];
  }
  const auto a = score_all(MIMatrix(n, c, v));
  const auto b = score_all(MIMatrix(n, c, w));
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k].p_tail, b[k].p_tail);
}

TEST(ScoreAll, UniqueColumnMaxReachesLnN) {
  const auto d = generate_planted(400, 25, 4, 9, 0.5, 0.0);
  const auto mi = mi_matrix(d.activations, d.concepts);
  const auto scores = score_all(mi);
  EXPECT_NEAR(scores[0].surprisal, std::log(25.0), 1e-15);
  for (std::size_t j = 0; j < 4; ++j) {
    const auto col = mi.column(j);
    for (std::size_t i = 0; i < 25; ++i) {
      const auto& p = scores[i * 4 + j];
      std::size_t above = 0;
      for (double x : col) above += x >= col[i];
      EXPECT_EQ(p.surprisal == std::log(25.0), above == 1);
    }
  }
}

TEST(ScoreAll, PerLayerRanksWithinLayer) {
  // Two layers of two neurons; each layer's max gets p_tail 1/2.
  const MIMatrix mi(4, 1, {0.1, 0.4, 0.3, 0.2});
  const auto meta = layered_meta(4, 2);
  const auto per = score_all(mi, meta, Scope::kPerLayer);
  EXPECT_EQ(per[1].p_tail, 0.5);
  EXPECT_EQ(per[2].p_tail, 0.5);
  EXPECT_EQ(per[0].p_tail, 1.0);
  const auto pooled = score_all(mi, meta, Scope::kPooled);
  EXPECT_EQ(pooled[1].p_tail, 0.25);
  EXPECT_EQ(pooled[2].p_tail, 0.5);
  EXPECT_THROW(score_all(mi, {}, Scope::kPerLayer), Error);
}

}  // namespace
}  // namespace ncs
