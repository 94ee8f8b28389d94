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

#ifndef NCS_METRICS_HPP_
#define NCS_METRICS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <numeric>
#include <span>
#include <vector>

#include "ncs/error.hpp"
#include "ncs/matrix.hpp"
#include "ncs/mi.hpp"

namespace ncs {

/// Population over which a concept's MI values are ranked.
enum class Scope { kPooled, kPerLayer };

struct PairScore {
  std::size_t neuron = 0;
  std::size_t concept_id = 0;
  double mi = 0.0;
  double p_tail = 1.0;
  double surprisal = 0.0;
  double selectivity = 0.0;
  bool degenerate_selectivity = false;

  bool operator==(const PairScore&) const = default;
};

/// Fraction of entries whose MI is >= that of entry i (i itself included).
inline double p_tail(std::span<const double> mi_col, std::size_t i) {
  require(i < mi_col.size(), ErrorCode::kIndexOutOfRange, "neuron index out of range");
  const double ref = mi_col[i];
  const auto count = std::count_if(mi_col.begin(), mi_col.end(),
                                   [ref](double v) { return v >= ref; });
  return static_cast<double>(count) / static_cast<double>(mi_col.size());
}

inline double surprisal(double p_tail) {
  require(p_tail > 0.0 && p_tail <= 1.0, ErrorCode::kNonPositiveProbability,
          "tail probability must lie in (0, 1]");
  return -std::log(p_tail);
}

struct Selectivity {
  double value = 0.0;
  bool degenerate = false;
};

/// Share of a neuron's total surprisal that falls on concept j. An all-zero
/// row is degenerate and yields 0.
inline Selectivity selectivity(std::span<const double> surprisal_row, std::size_t j) {
  require(j < surprisal_row.size(), ErrorCode::kIndexOutOfRange,
          "concept index out of range");
  double total = 0.0;
  for (double s : surprisal_row) total += s;
  if (total == 0.0) return {0.0, true};
  return {surprisal_row[j] / total, false};
}

namespace detail {

// Tail counts for every member of `group` within one MI column.
inline void rank_group(const MIMatrix& mi, std::size_t concept_id,
                       const std::vector<std::size_t>& group, std::vector<PairScore>& out) {
  std::vector<double> sorted;
  sorted.reserve(group.size());
  for (auto i : group) sorted.push_back(mi(i, concept_id));
  std::sort(sorted.begin(), sorted.end());
  const double size = static_cast<double>(group.size());
  for (auto i : group) {
    const double v = mi(i, concept_id);
    const auto at_least =
        sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), v);
    auto& pair = out[i * mi.concepts() + concept_id];
    pair.p_tail = static_cast<double>(at_least) / size;
    pair.surprisal = -std::log(pair.p_tail);
  }
}

}  // namespace detail

/// Surprisal and selectivity for all N*C pairs, ordered neuron-major
/// (index = neuron * C + concept). `meta` is only consulted for per-layer
/// ranking.
inline std::vector<PairScore> score_all(const MIMatrix& mi,
                                        std::span<const NeuronMeta> meta = {},
                                        Scope scope = Scope::kPooled) {
  const std::size_t n = mi.neurons(), c = mi.concepts();
  std::vector<PairScore> out(n * c);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      auto& p = out[i * c + j];
      p.neuron = i;
      p.concept_id = j;
      p.mi = mi(i, j);
    }
  }

  std::vector<std::vector<std::size_t>> groups;
  if (scope == Scope::kPerLayer) {
    require(meta.size() == n, ErrorCode::kDimensionMismatch,
            "per-layer scope needs metadata for every neuron");
    std::map<int, std::vector<std::size_t>> by_layer;
    for (std::size_t i = 0; i < n; ++i) by_layer[meta[i].layer_index].push_back(i);
    for (auto& [_, g] : by_layer) groups.push_back(std::move(g));
  } else {
    groups.emplace_back(n);
    std::iota(groups.front().begin(), groups.front().end(), std::size_t{0});
  }
  for (std::size_t j = 0; j < c; ++j) {
    for (const auto& g : groups) detail::rank_group(mi, j, g, out);
  }

  std::vector<double> row(c);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < c; ++j) row[j] = out[i * c + j].surprisal;
    for (std::size_t j = 0; j < c; ++j) {
      const auto s = selectivity(row, j);
      out[i * c + j].selectivity = s.value;
      out[i * c + j].degenerate_selectivity = s.degenerate;
    }
  }
  return out;
}

}  // namespace ncs

#endif  // NCS_METRICS_HPP_
