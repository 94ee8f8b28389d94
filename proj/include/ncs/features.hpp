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

#ifndef NCS_FEATURES_HPP_
#define NCS_FEATURES_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ncs/error.hpp"
#include "ncs/matrix.hpp"
#include "ncs/mi.hpp"

namespace ncs {

inline constexpr std::size_t kMinConceptPositives = 4;

struct FeatureRanking {
  std::size_t neuron = 0;
  std::size_t concept_id = 0;
  std::vector<std::pair<std::string, double>> ranked;  // (name, MI in nats)
  std::size_t k = 3;

  bool operator==(const FeatureRanking&) const = default;
};

/// Input features ranked by MI with one neuron's activations, using only the
/// rows where the concept is present. Ties go to the lexicographically
/// smaller feature name.
inline FeatureRanking top_features(const FeatureTable& table,
                                   std::span<const double> activations,
                                   std::span<const std::uint8_t> concept_col, std::size_t k = 3,
                                   BinningSpec spec = {}, std::size_t neuron = 0,
                                   std::size_t concept_id = 0) {
  require(k >= 1, ErrorCode::kInvalidArgument, "k must be at least 1");
  require(activations.size() == concept_col.size(), ErrorCode::kLengthMismatch,
          "activation and concept lengths differ");
  require(table.columns().empty() || table.rows() == activations.size(),
          ErrorCode::kLengthMismatch, "feature table rows differ from activation length");
  std::size_t positives = 0;
  for (auto v : concept_col) positives += v != 0;
  require(positives >= kMinConceptPositives, ErrorCode::kTooFewPositives,
          "concept has " + std::to_string(positives) + " positive samples, need " +
              std::to_string(kMinConceptPositives));

  FeatureRanking out;
  out.neuron = neuron;
  out.concept_id = concept_id;
  out.k = k;
  for (const auto& col : table.columns()) {
    out.ranked.emplace_back(col.name,
                            mi_general(col.values, col.kind, activations, concept_col, spec));
  }
  std::sort(out.ranked.begin(), out.ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (out.ranked.size() > k) out.ranked.resize(k);
  return out;
}

}  // namespace ncs

#endif  // NCS_FEATURES_HPP_
