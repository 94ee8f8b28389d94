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

#ifndef NCS_PROBES_HPP_
#define NCS_PROBES_HPP_

// Sparse-probing baselines: one neuron per concept, chosen either by the mean
// absolute interventional SHAP value of a multivariate logistic probe or by
// the best univariate logistic probe.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "ncs/error.hpp"
#include "ncs/logistic.hpp"
#include "ncs/matrix.hpp"
#include "ncs/metrics.hpp"
#include "ncs/parallel.hpp"

namespace ncs {

enum class ProbeMethod { kShap, kOptimal };

constexpr std::string_view probe_method_name(ProbeMethod m) {
  return m == ProbeMethod::kShap ? "shap" : "optimal";
}

inline ProbeMethod parse_probe_method(std::string_view name) {
  if (name == "shap") return ProbeMethod::kShap;
  if (name == "optimal") return ProbeMethod::kOptimal;
  fail(ErrorCode::kInvalidArgument, "unknown probe method '" + std::string(name) + "'");
}

struct ProbeSelection {
  std::size_t concept_id = 0;
  std::size_t neuron = 0;
  double score = 0.0;
  ProbeMethod method = ProbeMethod::kShap;

  bool operator==(const ProbeSelection&) const = default;
};

/// Columns shifted to mean 0 and scaled to variance 1; constant columns
/// become all-zero.
inline Eigen::MatrixXd standardize(const ActivationMatrix& a) {
  const auto m = static_cast<Eigen::Index>(a.rows());
  const auto n = static_cast<Eigen::Index>(a.cols());
  Eigen::MatrixXd x(m, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    const auto col = a.column(static_cast<std::size_t>(c));
    double mean = 0.0;
    for (double v : col) mean += v;
    mean /= static_cast<double>(m);
    double var = 0.0;
    for (double v : col) var += (v - mean) * (v - mean);
    var /= static_cast<double>(m);
    const double sd = std::sqrt(var);
    for (Eigen::Index r = 0; r < m; ++r) {
      x(r, c) = sd > 0.0 ? (col[static_cast<std::size_t>(r)] - mean) / sd : 0.0;
    }
  }
  return x;
}

/// Mean |SHAP| per feature of a linear logit with independent-feature
/// (interventional) semantics and the design's own rows as background:
/// |w_n| * mean_m |x_mn - mu_n|.
inline std::vector<double> linear_shap_importance(const Eigen::MatrixXd& x,
                                                  const Eigen::VectorXd& weights) {
  std::vector<double> scores(static_cast<std::size_t>(x.cols()));
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    const double mu = x.col(c).mean();
    const double dev = (x.col(c).array() - mu).abs().mean();
    scores[static_cast<std::size_t>(c)] = std::abs(weights[c]) * dev;
  }
  return scores;
}

namespace detail {

// First index of the maximum.
inline std::size_t argmax_first(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

}  // namespace detail

inline ProbeSelection shap_select(const Eigen::MatrixXd& standardized,
                                  std::span<const std::uint8_t> labels, std::size_t concept_id,
                                  const LogisticOptions& opts = {}) {
  const auto model = fit_logistic(standardized, labels, opts);
  const auto scores = linear_shap_importance(standardized, model.weights);
  const std::size_t best = detail::argmax_first(scores);
  return {concept_id, best, scores[best], ProbeMethod::kShap};
}

inline ProbeSelection shap_select(const ActivationMatrix& a, std::span<const std::uint8_t> labels,
                                  std::size_t concept_id, const LogisticOptions& opts = {}) {
  return shap_select(standardize(a), labels, concept_id, opts);
}

/// Unpenalized log-likelihood of each neuron's univariate probe.
inline std::vector<double> univariate_log_likelihoods(const Eigen::MatrixXd& standardized,
                                                      std::span<const std::uint8_t> labels,
                                                      const LogisticOptions& opts = {},
                                                      std::size_t workers = 1) {
  std::vector<double> ll(static_cast<std::size_t>(standardized.cols()));
  parallel_for(
      ll.size(),
      [&](std::size_t n) {
        const Eigen::MatrixXd column = standardized.col(static_cast<Eigen::Index>(n));
        ll[n] = fit_logistic(column, labels, opts).log_likelihood;
      },
      workers);
  return ll;
}

inline ProbeSelection optimal_select(const Eigen::MatrixXd& standardized,
                                     std::span<const std::uint8_t> labels, std::size_t concept_id,
                                     const LogisticOptions& opts = {}, std::size_t workers = 1) {
  const auto ll = univariate_log_likelihoods(standardized, labels, opts, workers);
  const std::size_t best = detail::argmax_first(ll);
  return {concept_id, best, ll[best], ProbeMethod::kOptimal};
}

inline ProbeSelection optimal_select(const ActivationMatrix& a,
                                     std::span<const std::uint8_t> labels, std::size_t concept_id,
                                     const LogisticOptions& opts = {}, std::size_t workers = 1) {
  return optimal_select(standardize(a), labels, concept_id, opts, workers);
}

/// One selection per concept.
inline std::vector<ProbeSelection> run_probes(const ActivationMatrix& a, const ConceptMatrix& b,
                                              ProbeMethod method,
                                              const LogisticOptions& opts = {},
                                              std::size_t workers = thread_count()) {
  require_same_rows(a, b);
  const Eigen::MatrixXd x = standardize(a);
  std::vector<ProbeSelection> out(b.cols());
  parallel_for(
      b.cols(),
      [&](std::size_t j) {
        out[j] = method == ProbeMethod::kShap ? shap_select(x, b.column(j), j, opts)
                                              : optimal_select(x, b.column(j), j, opts);
      },
      workers);
  return out;
}

/// The main scoring pass's record for a baseline pick; `scores` is
/// neuron-major with `concepts` entries per neuron.
inline PairScore score_baseline(const ProbeSelection& selection,
                                std::span<const PairScore> scores, std::size_t concepts) {
  require(concepts > 0 && scores.size() % concepts == 0, ErrorCode::kDimensionMismatch,
          "score list is not neuron-major over the given concept count");
  const std::size_t neurons = scores.size() / concepts;
  require(selection.neuron < neurons, ErrorCode::kIndexOutOfRange,
          "selected neuron out of range");
  require(selection.concept_id < concepts, ErrorCode::kIndexOutOfRange,
          "selected concept out of range");
  return scores[selection.neuron * concepts + selection.concept_id];
}

}  // namespace ncs

#endif  // NCS_PROBES_HPP_
