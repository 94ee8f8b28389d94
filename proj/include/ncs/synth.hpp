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

#ifndef NCS_SYNTH_HPP_
#define NCS_SYNTH_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "ncs/error.hpp"
#include "ncs/matrix.hpp"
#include "ncs/rng.hpp"

namespace ncs {

/// Rebalancing target: reduce both classes to the minority count, or cap
/// each class independently at `cap` rows.
struct UndersampleTarget {
  std::optional<std::size_t> cap;  // empty = balance

  static UndersampleTarget balance() { return {}; }
  static UndersampleTarget capped(std::size_t k) { return {k}; }
};

namespace detail {

// k indices drawn uniformly without replacement (partial Fisher-Yates).
inline std::vector<std::size_t> sample_without_replacement(std::vector<std::size_t> pool,
                                                           std::size_t k,
                                                           CounterRng& rng) {
  k = std::min(k, pool.size());
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace detail

/// Majority-class undersampling. Returned indices are unique and ascending.
inline std::vector<std::size_t> undersample(std::span<const std::uint8_t> labels,
                                            std::uint64_t seed,
                                            UndersampleTarget target) {
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < labels.size(); ++i) {
    require(labels[i] <= 1, ErrorCode::kNonBinaryConceptValue, "label is not 0 or 1");
    by_class[labels[i]].push_back(i);
  }
  std::size_t keep[2];
  if (!target.cap) {
    require(!by_class[0].empty() && !by_class[1].empty(), ErrorCode::kSingleClassInput,
            "balancing requires both classes");
    keep[0] = keep[1] = std::min(by_class[0].size(), by_class[1].size());
  } else {
    keep[0] = std::min(by_class[0].size(), *target.cap);
    keep[1] = std::min(by_class[1].size(), *target.cap);
  }
  std::vector<std::size_t> out;
  for (int c = 0; c < 2; ++c) {
    CounterRng rng(seed, static_cast<std::uint64_t>(c));
    auto picked = detail::sample_without_replacement(by_class[c], keep[c], rng);
    out.insert(out.end(), picked.begin(), picked.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct SyntheticData {
  ActivationMatrix activations;
  ConceptMatrix concepts;
};

struct PlantedData {
  ActivationMatrix activations;
  ConceptMatrix concepts;
  std::size_t planted_neuron = 0;
  std::size_t planted_concept = 0;
};

inline constexpr int kMaxLabelAttempts = 100;

namespace detail {

// Stream layout: activation column n on stream n; concept column j, attempt t
// on stream kConceptStreamBase + j * kMaxLabelAttempts + t; planted noise on
// kNoiseStream.
inline constexpr std::uint64_t kConceptStreamBase = std::uint64_t{1} << 40;
inline constexpr std::uint64_t kNoiseStream = std::uint64_t{1} << 62;

inline void check_generator_args(std::size_t m, std::size_t n, std::size_t c,
                                 double label_rate) {
  require(m >= 2, ErrorCode::kInvalidArgument, "M must be at least 2");
  require(n >= 1 && c >= 1, ErrorCode::kInvalidArgument, "N and C must be positive");
  require(label_rate > 0.0 && label_rate < 1.0, ErrorCode::kInvalidArgument,
          "label rate must lie in (0, 1)");
  require(label_rate * static_cast<double>(m) >= 1.0, ErrorCode::kInvalidArgument,
          "label_rate * M must be at least 1");
}

}  // namespace detail

/// Null-model data: i.i.d. standard normal activations and independent
/// Bernoulli(label_rate) concepts. Columns that come out constant are
/// redrawn from a fresh stream.
inline SyntheticData generate_null(std::size_t m, std::size_t n, std::size_t c,
                                   std::uint64_t seed, double label_rate) {
  detail::check_generator_args(m, n, c, label_rate);
  std::vector<double> acts(m * n);
  for (std::size_t col = 0; col < n; ++col) {
    CounterRng rng(seed, col);
    for (std::size_t r = 0; r < m; ++r) acts[col * m + r] = rng.normal();
  }
  std::vector<std::uint8_t> labels(m * c);
  for (std::size_t j = 0; j < c; ++j) {
    bool mixed = false;
    for (int attempt = 0; attempt < kMaxLabelAttempts && !mixed; ++attempt) {
      CounterRng rng(seed, detail::kConceptStreamBase +
                               j * kMaxLabelAttempts + static_cast<std::uint64_t>(attempt));
      std::size_t ones = 0;
      for (std::size_t r = 0; r < m; ++r) {
        const bool hit = rng.bernoulli(label_rate);
        labels[j * m + r] = hit ? 1 : 0;
        ones += hit;
      }
      mixed = ones > 0 && ones < m;
    }
    require(mixed, ErrorCode::kDegenerateRate,
            "concept column " + std::to_string(j) + " stayed constant after " +
                std::to_string(kMaxLabelAttempts) + " attempts");
  }
  return {ActivationMatrix(m, n, std::move(acts)), ConceptMatrix(m, c, std::move(labels))};
}

/// Positive control: neuron 0 carries concept 0's label plus Gaussian noise
/// of scale `noise_rate`; everything else is null.
inline PlantedData generate_planted(std::size_t m, std::size_t n, std::size_t c,
                                    std::uint64_t seed, double label_rate,
                                    double noise_rate) {
  require(n >= 2 && c >= 2, ErrorCode::kInvalidArgument,
          "planted data needs N >= 2 and C >= 2");
  require(noise_rate >= 0.0 && noise_rate < 0.5, ErrorCode::kInvalidArgument,
          "noise rate must lie in [0, 0.5)");
  auto base = generate_null(m, n, c, seed, label_rate);
  std::vector<double> acts = base.activations.column_major();
  const auto label = base.concepts.column(0);
  CounterRng noise(seed, detail::kNoiseStream);
  for (std::size_t r = 0; r < m; ++r) {
    acts[r] = static_cast<double>(label[r]);
    if (noise_rate > 0.0) acts[r] += noise_rate * noise.normal();
  }
  return {ActivationMatrix(m, n, std::move(acts)), std::move(base.concepts), 0, 0};
}

}  // namespace ncs

#endif  // NCS_SYNTH_HPP_
