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

#ifndef NCS_LOGISTIC_HPP_
#define NCS_LOGISTIC_HPP_

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ncs/error.hpp"

namespace ncs {

struct LogisticOptions {
  double l2 = 1e-4;
  int max_iter = 100;
  double tol = 1e-8;  // on the max-norm of the gradient

  bool operator==(const LogisticOptions&) const = default;
};

struct LogisticModel {
  Eigen::VectorXd weights;
  double bias = 0.0;
  bool converged = false;
  double final_grad_norm = 0.0;
  double log_likelihood = 0.0;  // unpenalized
  int iterations = 0;
};

namespace detail {

// log(sigmoid(z)) without overflow.
inline double log_sigmoid(double z) {
  return z >= 0.0 ? -std::log1p(std::exp(-z)) : z - std::log1p(std::exp(z));
}

inline double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

inline void check_labels(const Eigen::MatrixXd& x, std::span<const std::uint8_t> y) {
  require(static_cast<std::size_t>(x.rows()) == y.size(), ErrorCode::kLengthMismatch,
          "design rows differ from label count");
  require(x.rows() >= 2, ErrorCode::kInvalidArgument, "need at least 2 samples");
  std::size_t ones = 0;
  for (auto v : y) {
    require(v <= 1, ErrorCode::kNonBinaryConceptValue, "label is not 0 or 1");
    ones += v;
  }
  require(ones > 0 && ones < y.size(), ErrorCode::kSingleClassLabels,
          "labels contain a single class");
}

inline Eigen::VectorXd label_vector(std::span<const std::uint8_t> y) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(y.size()));
  for (std::size_t i = 0; i < y.size(); ++i) out[static_cast<Eigen::Index>(i)] = y[i];
  return out;
}

}  // namespace detail

/// sum_m [y ln s(z) + (1 - y) ln(1 - s(z))] with z = Xw + b.
inline double logistic_log_likelihood(const Eigen::MatrixXd& x, std::span<const std::uint8_t> y,
                                      const Eigen::VectorXd& w, double b) {
  const Eigen::VectorXd z = (x * w).array() + b;
  double ll = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    ll += y[static_cast<std::size_t>(i)] ? detail::log_sigmoid(z[i]) : detail::log_sigmoid(-z[i]);
  }
  return ll;
}

/// Penalized objective: log-likelihood - (l2 / 2) |w|^2; the bias is free.
inline double logistic_objective(const Eigen::MatrixXd& x, std::span<const std::uint8_t> y,
                                 const Eigen::VectorXd& w, double b, double l2) {
  return logistic_log_likelihood(x, y, w, b) - 0.5 * l2 * w.squaredNorm();
}

/// Gradient of the penalized objective; the last entry is d/d(bias).
inline Eigen::VectorXd logistic_gradient(const Eigen::MatrixXd& x,
                                         std::span<const std::uint8_t> y,
                                         const Eigen::VectorXd& w, double b, double l2) {
  const Eigen::Index d = x.cols();
  Eigen::VectorXd residual(x.rows());
  const Eigen::VectorXd z = (x * w).array() + b;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    residual[i] = static_cast<double>(y[static_cast<std::size_t>(i)]) - detail::sigmoid(z[i]);
  }
  Eigen::VectorXd g(d + 1);
  g.head(d) = x.transpose() * residual - l2 * w;
  g[d] = residual.sum();
  return g;
}

/// Ridge logistic regression by damped Newton. Steps must pass Armijo
/// backtracking, except within rounding distance of the optimum, where a
/// step is accepted if it shrinks the gradient. When the Newton system is
/// unusable the step falls back to scaled gradient ascent.
/// `objective_trace`, if given, receives the objective after each accepted
/// iteration (starting with the initial point).
inline LogisticModel fit_logistic(const Eigen::MatrixXd& x, std::span<const std::uint8_t> y,
                                  const LogisticOptions& opts = {},
                                  std::vector<double>* objective_trace = nullptr) {
  detail::check_labels(x, y);
  require(opts.l2 >= 0.0, ErrorCode::kInvalidArgument, "l2 must be non-negative");
  const Eigen::Index d = x.cols();
  const Eigen::Index m = x.rows();

  // Upper bound on the curvature, for the gradient fallback step.
  const double lipschitz = 0.25 * (x.squaredNorm() + static_cast<double>(m)) + opts.l2;

  Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
  double b = 0.0;
  double obj = logistic_objective(x, y, w, b, opts.l2);
  if (objective_trace) objective_trace->assign(1, obj);
  Eigen::VectorXd g = logistic_gradient(x, y, w, b, opts.l2);

  LogisticModel model;
  int iter = 0;
  for (; iter < opts.max_iter && g.lpNorm<Eigen::Infinity>() > opts.tol; ++iter) {
    const Eigen::VectorXd z = (x * w).array() + b;
    Eigen::VectorXd curvature(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const double p = detail::sigmoid(z[i]);
      curvature[i] = p * (1.0 - p);
    }
    // Negative Hessian over (w, b).
    Eigen::MatrixXd h(d + 1, d + 1);
    const Eigen::MatrixXd xw = x.array().colwise() * curvature.array();
    h.topLeftCorner(d, d) = x.transpose() * xw;
    h.topLeftCorner(d, d).diagonal().array() += opts.l2;
    h.topRightCorner(d, 1) = xw.colwise().sum().transpose();
    h.bottomLeftCorner(1, d) = h.topRightCorner(d, 1).transpose();
    h(d, d) = curvature.sum();

    Eigen::VectorXd step;
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
    bool newton_ok = ldlt.info() == Eigen::Success && ldlt.isPositive();
    if (newton_ok) {
      step = ldlt.solve(g);
      newton_ok = step.allFinite() && g.dot(step) > 0.0;
    }
    if (!newton_ok) step = g / lipschitz;

    const double slope = g.dot(step);
    const double g_norm = g.lpNorm<Eigen::Infinity>();
    double t = 1.0;
    bool accepted = false;
    Eigen::VectorXd g_new;
    for (int halving = 0; halving < 60; ++halving, t *= 0.5) {
      const Eigen::VectorXd w_new = w + t * step.head(d);
      const double b_new = b + t * step[d];
      const double obj_new = logistic_objective(x, y, w_new, b_new, opts.l2);
      if (!std::isfinite(obj_new)) continue;
      const double required = 1e-4 * t * slope;
      bool ok = false;
      if (required > 1e-13 * std::max(1.0, std::abs(obj))) {
        ok = obj_new >= obj + required;
      } else {
        // The predicted gain is below the objective's rounding error; judge
        // the step by the gradient instead.
        g_new = logistic_gradient(x, y, w_new, b_new, opts.l2);
        ok = g_new.lpNorm<Eigen::Infinity>() < g_norm;
      }
      if (ok) {
        w = w_new;
        b = b_new;
        obj = obj_new;
        accepted = true;
        break;
      }
      g_new.resize(0);
    }
    if (!accepted) break;
    if (objective_trace) objective_trace->push_back(obj);
    g = g_new.size() > 0 ? std::move(g_new) : logistic_gradient(x, y, w, b, opts.l2);
  }

  require(w.allFinite() && std::isfinite(b), ErrorCode::kNumericFailure,
          "logistic fit produced non-finite parameters");
  model.weights = std::move(w);
  model.bias = b;
  model.final_grad_norm = g.lpNorm<Eigen::Infinity>();
  model.converged = model.final_grad_norm <= opts.tol;
  model.log_likelihood = logistic_log_likelihood(x, y, model.weights, model.bias);
  model.iterations = iter;
  return model;
}

}  // namespace ncs

#endif  // NCS_LOGISTIC_HPP_
