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

#ifndef NCS_PARETO_HPP_
#define NCS_PARETO_HPP_

#include <algorithm>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "ncs/error.hpp"
#include "ncs/metrics.hpp"

namespace ncs {

/// Population used for min-max scaling when picking the knee.
enum class KneeScale { kFront, kAll };

/// q weakly dominates p: at least as good in both coordinates, better in one.
inline bool dominates(const PairScore& q, const PairScore& p) {
  return q.surprisal >= p.surprisal && q.selectivity >= p.selectivity &&
         (q.surprisal > p.surprisal || q.selectivity > p.selectivity);
}

/// (surprisal desc, selectivity desc, neuron asc, concept asc)
inline bool front_order(const PairScore& a, const PairScore& b) {
  if (a.surprisal != b.surprisal) return a.surprisal > b.surprisal;
  if (a.selectivity != b.selectivity) return a.selectivity > b.selectivity;
  if (a.neuron != b.neuron) return a.neuron < b.neuron;
  return a.concept_id < b.concept_id;
}

/// Non-dominated pairs under (surprisal up, selectivity up). Pairs with
/// identical coordinates are all kept.
//
// Sweep in front order: within a block of equal surprisal only the block's
// best selectivity can survive, and only if it beats everything with strictly
// higher surprisal.
inline std::vector<PairScore> pareto_front(std::span<const PairScore> pairs) {
  require(!pairs.empty(), ErrorCode::kEmptyInput, "Pareto front of an empty set");
  std::vector<PairScore> sorted(pairs.begin(), pairs.end());
  std::sort(sorted.begin(), sorted.end(), front_order);
  std::vector<PairScore> front;
  double best_above = -std::numeric_limits<double>::infinity();
  for (std::size_t begin = 0; begin < sorted.size();) {
    std::size_t end = begin;
    while (end < sorted.size() && sorted[end].surprisal == sorted[begin].surprisal) ++end;
    const double block_best = sorted[begin].selectivity;
    if (block_best > best_above) {
      for (std::size_t k = begin; k < end && sorted[k].selectivity == block_best; ++k) {
        front.push_back(sorted[k]);
      }
      best_above = block_best;
    }
    begin = end;
  }
  return front;
}

struct MinMax {
  double lo = 0.0;
  double hi = 0.0;

  double scale(double v) const { return hi > lo ? (v - lo) / (hi - lo) : 0.0; }
};

struct KneeChoice {
  PairScore pair;
  double scaled_sum = 0.0;
};

inline constexpr double kKneeTieTolerance = 1e-12;

/// Front member maximizing scaled surprisal + scaled selectivity, scaled over
/// `reference` (the front itself unless a wider population is given). Ties
/// go to higher surprisal, then lower neuron, then lower concept.
inline KneeChoice knee_point(std::span<const PairScore> front,
                             std::span<const PairScore> reference = {}) {
  require(!front.empty(), ErrorCode::kEmptyFront, "knee point of an empty front");
  if (reference.empty()) reference = front;
  MinMax s{reference.front().surprisal, reference.front().surprisal};
  MinMax q{reference.front().selectivity, reference.front().selectivity};
  for (const auto& p : reference) {
    s.lo = std::min(s.lo, p.surprisal);
    s.hi = std::max(s.hi, p.surprisal);
    q.lo = std::min(q.lo, p.selectivity);
    q.hi = std::max(q.hi, p.selectivity);
  }
  const PairScore* best = nullptr;
  double best_sum = 0.0;
  for (const auto& p : front) {
    const double sum = s.scale(p.surprisal) + q.scale(p.selectivity);
    bool better = best == nullptr || sum > best_sum + kKneeTieTolerance;
    if (!better && sum >= best_sum - kKneeTieTolerance) {
      if (p.surprisal != best->surprisal) {
        better = p.surprisal > best->surprisal;
      } else if (p.neuron != best->neuron) {
        better = p.neuron < best->neuron;
      } else {
        better = p.concept_id < best->concept_id;
      }
    }
    if (better) {
      best = &p;
      best_sum = sum;
    }
  }
  return {*best, best_sum};
}

struct ParetoResult {
  std::vector<PairScore> front;
  PairScore knee;
  double knee_scaled_sum = 0.0;
};

/// Front and knee over the non-degenerate pairs of a scoring pass.
inline ParetoResult extract_pareto(std::span<const PairScore> scores,
                                   KneeScale scale = KneeScale::kFront) {
  std::vector<PairScore> eligible;
  for (const auto& p : scores) {
    if (!p.degenerate_selectivity) eligible.push_back(p);
  }
  require(!eligible.empty(), ErrorCode::kEmptyInput,
          "every pair has degenerate selectivity");
  ParetoResult result;
  result.front = pareto_front(eligible);
  const auto knee = scale == KneeScale::kAll ? knee_point(result.front, eligible)
                                             : knee_point(result.front);
  result.knee = knee.pair;
  result.knee_scaled_sum = knee.scaled_sum;
  return result;
}

/// True iff every baseline pair is matched or weakly dominated by a front
/// member.
inline bool check_baseline_domination(std::span<const PairScore> front,
                                      std::span<const PairScore> baseline) {
  return std::all_of(baseline.begin(), baseline.end(), [&](const PairScore& b) {
    return std::any_of(front.begin(), front.end(), [&](const PairScore& f) {
      return f.surprisal >= b.surprisal && f.selectivity >= b.selectivity;
    });
  });
}

}  // namespace ncs

#endif  // NCS_PARETO_HPP_
