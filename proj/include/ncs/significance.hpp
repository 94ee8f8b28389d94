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

#ifndef NCS_SIGNIFICANCE_HPP_
#define NCS_SIGNIFICANCE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "ncs/error.hpp"
#include "ncs/metrics.hpp"
#include "ncs/mi.hpp"
#include "ncs/parallel.hpp"
#include "ncs/rng.hpp"
#include "ncs/synth.hpp"

namespace ncs {

/// Under exchangeability the surprisal p-value is the tail fraction itself.
inline double p_value_surprisal(const PairScore& pair) { return pair.p_tail; }

/// Survival function of Beta(1, C-1): (1 - s)^(C-1), evaluated in log space.
inline double p_value_selectivity(double selectivity, std::size_t concepts) {
  if (concepts <= 1 || selectivity <= 0.0) return 1.0;
  if (selectivity >= 1.0) return 0.0;
  return std::exp(static_cast<double>(concepts - 1) * std::log1p(-selectivity));
}

/// Degenerate-selectivity pairs carry no evidence and get 1.
inline double p_value_selectivity(const PairScore& pair, std::size_t concepts) {
  if (pair.degenerate_selectivity) return 1.0;
  return p_value_selectivity(pair.selectivity, concepts);
}

/// Bonferroni over the 2*N*C tests of one analysis.
inline double p_combined(double p_surprisal, double p_selectivity, std::size_t neurons,
                         std::size_t concepts) {
  const double tests = 2.0 * static_cast<double>(neurons) * static_cast<double>(concepts);
  return std::min(tests * std::min(p_surprisal, p_selectivity), 1.0);
}

inline double p_combined(const PairScore& pair, std::size_t neurons, std::size_t concepts) {
  return p_combined(p_value_surprisal(pair), p_value_selectivity(pair, concepts), neurons,
                    concepts);
}

struct SignificanceRecord {
  double p_surprisal = 1.0;
  double p_selectivity = 1.0;
  double p_comb = 1.0;
  double alpha = 0.05;
  bool significant = false;

  bool operator==(const SignificanceRecord&) const = default;
};

inline SignificanceRecord assess(const PairScore& pair, std::size_t neurons,
                                 std::size_t concepts, double alpha = 0.05) {
  SignificanceRecord rec;
  rec.p_surprisal = p_value_surprisal(pair);
  rec.p_selectivity = p_value_selectivity(pair, concepts);
  rec.p_comb = p_combined(rec.p_surprisal, rec.p_selectivity, neurons, concepts);
  rec.alpha = alpha;
  rec.significant = rec.p_comb < alpha;
  return rec;
}

/// One-sample Kolmogorov-Smirnov statistic sup |F_n - F|. Ties are handled
/// exactly: both sides of every jump of F_n are compared.
inline double ks_statistic(std::vector<double> samples,
                           const std::function<double(double)>& cdf) {
  require(!samples.empty(), ErrorCode::kEmptyInput, "KS statistic needs samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return std::clamp(d, 0.0, 1.0);
}

inline double uniform_cdf(double x) { return std::clamp(x, 0.0, 1.0); }

inline double exponential_cdf(double x) { return x <= 0.0 ? 0.0 : -std::expm1(-x); }

/// CDF of Beta(1, C-1); C = 1 is the point mass at 1.
inline double beta_1_cdf(double x, std::size_t concepts) {
  if (concepts <= 1) return x >= 1.0 ? 1.0 : 0.0;
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return -std::expm1(static_cast<double>(concepts - 1) * std::log1p(-x));
}

struct CalibrationConfig {
  std::size_t samples = 2000;   // M
  std::size_t neurons = 500;    // N
  std::size_t concepts = 24;    // C
  std::size_t trials = 50;
  std::uint64_t seed = 0;
  BinningSpec spec{};
  double label_rate = 0.5;
  double alpha = 0.05;
};

struct CalibrationReport {
  double ks_ptail_vs_uniform = 0.0;
  double ks_surprisal_vs_exp1 = 0.0;
  double ks_selectivity_vs_beta = 0.0;
  double null_fpr_at_alpha = 0.0;
  std::size_t trials = 0;

  bool operator==(const CalibrationReport&) const = default;
};

/// Monte-Carlo check of the asymptotic nulls. Trial t uses seed
/// derive_seed(seed, t); values are pooled in trial order, so the report does
/// not depend on scheduling. The error rate is family-wise: a trial counts
/// once if any of its pairs is significant.
inline CalibrationReport calibrate(const CalibrationConfig& cfg,
                                   std::size_t workers = thread_count()) {
  require(cfg.trials >= 1, ErrorCode::kInvalidArgument, "trials must be at least 1");
  struct TrialOutput {
    std::vector<double> p_tail, surprisal, selectivity;
    bool any_rejection = false;
  };
  std::vector<TrialOutput> outputs(cfg.trials);
  parallel_for(
      cfg.trials,
      [&](std::size_t t) {
        const auto data = generate_null(cfg.samples, cfg.neurons, cfg.concepts,
                                        derive_seed(cfg.seed, t), cfg.label_rate);
        const auto mi = mi_matrix(data.activations, data.concepts, cfg.spec, 1);
        const auto scores = score_all(mi);
        auto& out = outputs[t];
        out.p_tail.reserve(scores.size());
        out.surprisal.reserve(scores.size());
        for (const auto& p : scores) {
          out.p_tail.push_back(p.p_tail);
          out.surprisal.push_back(p.surprisal);
          if (!p.degenerate_selectivity) out.selectivity.push_back(p.selectivity);
          if (p_combined(p, cfg.neurons, cfg.concepts) < cfg.alpha) out.any_rejection = true;
        }
      },
      workers);

  std::vector<double> p_tails, surprisals, selectivities;
  std::size_t rejecting_trials = 0;
  for (auto& out : outputs) {
    p_tails.insert(p_tails.end(), out.p_tail.begin(), out.p_tail.end());
    surprisals.insert(surprisals.end(), out.surprisal.begin(), out.surprisal.end());
    selectivities.insert(selectivities.end(), out.selectivity.begin(), out.selectivity.end());
    rejecting_trials += out.any_rejection;
  }

  CalibrationReport report;
  report.trials = cfg.trials;
  report.ks_ptail_vs_uniform = ks_statistic(std::move(p_tails), uniform_cdf);
  report.ks_surprisal_vs_exp1 = ks_statistic(std::move(surprisals), exponential_cdf);
  report.ks_selectivity_vs_beta =
      selectivities.empty()
          ? 1.0
          : ks_statistic(std::move(selectivities), [c = cfg.concepts](double x) {
              return beta_1_cdf(x, c);
            });
  report.null_fpr_at_alpha =
      static_cast<double>(rejecting_trials) / static_cast<double>(cfg.trials);
  return report;
}

}  // namespace ncs

#endif  // NCS_SIGNIFICANCE_HPP_
