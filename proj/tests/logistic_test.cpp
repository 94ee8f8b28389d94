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

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <vector>

#include "ncs/logistic.hpp"
#include "ncs/rng.hpp"

namespace ncs {
namespace {

struct Problem {
  Eigen::MatrixXd x;
  std::vector<std::uint8_t> y;
};

Problem random_problem(std::size_t m, std::size_t d, std::uint64_t seed) {
  CounterRng rng(seed, 0);
  Problem p{Eigen::MatrixXd(m, d), std::vector<std::uint8_t>(m)};
  Eigen::VectorXd truth(d);
  for (std::size_t k = 0; k < d; ++k) truth[k] = rng.normal();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < d; ++k) p.x(i, k) = rng.normal();
    const double z = p.x.row(i).dot(truth);
    p.y[i] = rng.uniform() < 1.0 / (1.0 + std::exp(-z)) ? 1 : 0;
  }
  p.y[0] = 0;
  p.y[1] = 1;
  return p;
}

// Central differences of the penalized objective over (w, b).
Eigen::VectorXd numeric_gradient(const Problem& p, const Eigen::VectorXd& w, double b, double l2) {
  const Eigen::Index d = w.size();
  Eigen::VectorXd g(d + 1);
  for (Eigen::Index k = 0; k <= d; ++k) {
    const double h = 1e-5;
    Eigen::VectorXd wp = w, wm = w;
    double bp = b, bm = b;
    if (k < d) {
      wp[k] += h;
      wm[k] -= h;
    } else {
      bp += h;
      bm -= h;
    }
    g[k] = (logistic_objective(p.x, p.y, wp, bp, l2) - logistic_objective(p.x, p.y, wm, bm, l2)) /
           (2 * h);
  }
  return g;
}

TEST(LogisticGradient, MatchesFiniteDifferences) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto p = random_problem(80, 4, seed);
    CounterRng rng(seed, 1);
    Eigen::VectorXd w(4);
    for (int k = 0; k < 4; ++k) w[k] = rng.normal();
    const double b = rng.normal();
    const auto g = logistic_gradient(p.x, p.y, w, b, 0.3);
    const auto fd = numeric_gradient(p, w, b, 0.3);
    EXPECT_LE((g - fd).norm(), 1e-5 * std::max(1.0, fd.norm()));
  }
}

TEST(FitLogistic, AllZeroDesignGivesZeroModel) {
  const std::vector<std::uint8_t> y = {0, 1, 0, 1, 1, 0};
  const auto model = fit_logistic(Eigen::MatrixXd::Zero(6, 3), y);
  EXPECT_EQ(model.weights, Eigen::VectorXd::Zero(3));
  EXPECT_EQ(model.bias, 0.0);
  EXPECT_NEAR(model.log_likelihood, -6 * std::log(2.0), 1e-12);
  EXPECT_TRUE(model.converged);
}

TEST(FitLogistic, SeparableDataStaysFinite) {
  Eigen::MatrixXd x(10, 1);
  std::vector<std::uint8_t> y(10);
  for (int i = 0; i < 10; ++i) {
    x(i, 0) = i - 4.5;
    y[i] = i >= 5;
  }
  const auto model = fit_logistic(x, y, {.l2 = 1e-2});
  EXPECT_TRUE(model.converged);
  EXPECT_TRUE(model.weights.allFinite());
  EXPECT_LE(model.final_grad_norm, 1e-8);
  EXPECT_LE(model.log_likelihood, 0.0);
  EXPECT_GT(model.weights[0], 0.0);
}

TEST(FitLogistic, OptimumHasZeroGradient) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto p = random_problem(200, 5, seed + 100);
    const auto model = fit_logistic(p.x, p.y);
    ASSERT_TRUE(model.converged);
    const auto fd = numeric_gradient(p, model.weights, model.bias, 1e-4);
    // Finite differences at the optimum carry only truncation and rounding error.
    EXPECT_LE(fd.lpNorm<Eigen::Infinity>(), 1e-5);
    EXPECT_LE(logistic_gradient(p.x, p.y, model.weights, model.bias, 1e-4).lpNorm<Eigen::Infinity>(),
              1e-8);
  }
}

TEST(FitLogistic, ObjectiveNeverDecreases) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto p = random_problem(60, 6, seed + 200);
    // Scale columns apart to stress the line search.
    for (int k = 0; k < 6; ++k) p.x.col(k) *= std::pow(10.0, k - 3);
    std::vector<double> trace;
    fit_logistic(p.x, p.y, {}, &trace);
    ASSERT_GE(trace.size(), 2u);
    for (std::size_t i = 1; i < trace.size(); ++i) {
      EXPECT_GE(trace[i], trace[i - 1] - 1e-12 * std::abs(trace[i - 1]));
    }
  }
}

TEST(FitLogistic, SingleClassIsRejected) {
  try {
    fit_logistic(Eigen::MatrixXd::Ones(4, 1), std::vector<std::uint8_t>(4, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSingleClassLabels);
  }
}

TEST(FitLogistic, MatchesKnownInterceptOnlyOptimum) {
  // With X = 0, the bias converges to logit(mean(y)).
  const std::vector<std::uint8_t> y = {1, 1, 1, 0};
  const auto model = fit_logistic(Eigen::MatrixXd::Zero(4, 1), y);
  EXPECT_NEAR(model.bias, std::log(3.0), 1e-9);
  EXPECT_NEAR(model.log_likelihood, 3 * std::log(0.75) + std::log(0.25), 1e-12);
}

}  // namespace
}  // namespace ncs
