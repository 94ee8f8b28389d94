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

#ifndef NCS_MI_HPP_
#define NCS_MI_HPP_

// Plug-in mutual information on equal-frequency bins, in nats.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "ncs/error.hpp"
#include "ncs/matrix.hpp"
#include "ncs/parallel.hpp"

namespace ncs {

struct BinningSpec {
  std::size_t n_bins = 16;

  bool operator==(const BinningSpec&) const = default;
};

/// Integer level per sample; levels are dense in [0, levels).
struct Discretized {
  std::vector<std::uint32_t> codes;
  std::size_t levels = 0;
};

namespace detail {

inline Discretized compress_levels(std::vector<std::uint32_t> raw, std::size_t max_level) {
  std::vector<std::uint32_t> remap(max_level + 1, 0);
  for (auto code : raw) remap[code] = 1;
  std::uint32_t next = 0;
  for (auto& r : remap) r = r ? next++ : 0;
  for (auto& code : raw) code = remap[code];
  return {std::move(raw), next};
}

}  // namespace detail

/// Rank-based equal-frequency binning. Equal values always share a bin.
/// When there are at most n_bins distinct values, each value is its own bin;
/// otherwise edges sit at the order statistics floor(k*M/n_bins), duplicate
/// edges are merged, and empty bins dropped.
inline Discretized discretize_equal_frequency(std::span<const double> x, std::size_t n_bins) {
  require(n_bins >= 2, ErrorCode::kInvalidArgument, "n_bins must be at least 2");
  const std::size_t m = x.size();
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> distinct = sorted;
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  std::vector<std::uint32_t> codes(m);
  if (distinct.size() <= n_bins) {
    for (std::size_t i = 0; i < m; ++i) {
      codes[i] = static_cast<std::uint32_t>(
          std::lower_bound(distinct.begin(), distinct.end(), x[i]) - distinct.begin());
    }
    return {std::move(codes), distinct.size()};
  }

  std::vector<double> edges;
  for (std::size_t k = 1; k < n_bins; ++k) edges.push_back(sorted[k * m / n_bins]);
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  for (std::size_t i = 0; i < m; ++i) {
    codes[i] = static_cast<std::uint32_t>(
        std::upper_bound(edges.begin(), edges.end(), x[i]) - edges.begin());
  }
  return detail::compress_levels(std::move(codes), edges.size());
}

/// Native codes of a categorical vector, relabelled densely in sorted order.
inline Discretized discretize_categorical(std::span<const double> x) {
  std::map<double, std::uint32_t> levels;
  for (double v : x) levels.emplace(v, 0);
  std::uint32_t next = 0;
  for (auto& [_, code] : levels) code = next++;
  Discretized out;
  out.codes.reserve(x.size());
  for (double v : x) out.codes.push_back(levels.at(v));
  out.levels = levels.size();
  return out;
}

inline double plugin_entropy(const Discretized& x) {
  std::vector<std::size_t> counts(x.levels, 0);
  for (auto c : x.codes) ++counts[c];
  const double m = static_cast<double>(x.codes.size());
  double h = 0.0;
  for (auto n : counts) {
    if (n == 0) continue;
    const double p = static_cast<double>(n) / m;
    h -= p * std::log(p);
  }
  return h;
}

/// sum_{u,v} p(u,v) ln(p(u,v) / (p(u) p(v))), clamped to >= 0.
inline double plugin_mi(const Discretized& x, const Discretized& y) {
  require(x.codes.size() == y.codes.size(), ErrorCode::kLengthMismatch,
          "discretized vectors differ in length");
  const std::size_t m = x.codes.size();
  if (m == 0 || x.levels < 2 || y.levels < 2) return 0.0;
  std::vector<std::size_t> joint(x.levels * y.levels, 0);
  std::vector<std::size_t> nx(x.levels, 0), ny(y.levels, 0);
  for (std::size_t i = 0; i < m; ++i) {
    ++joint[x.codes[i] * y.levels + y.codes[i]];
    ++nx[x.codes[i]];
    ++ny[y.codes[i]];
  }
  const double total = static_cast<double>(m);
  double mi = 0.0;
  for (std::size_t u = 0; u < x.levels; ++u) {
    for (std::size_t v = 0; v < y.levels; ++v) {
      const auto n = joint[u * y.levels + v];
      if (n == 0) continue;
      const double nuv = static_cast<double>(n);
      mi += nuv / total *
            std::log(nuv * total / (static_cast<double>(nx[u]) * static_cast<double>(ny[v])));
    }
  }
  return std::max(mi, 0.0);
}

namespace detail {

// Fast path for a binary label against pre-binned activations.
inline double mi_codes_binary(const Discretized& a, std::span<const std::uint8_t> b,
                              std::size_t positives) {
  const std::size_t m = b.size();
  if (positives == 0 || positives == m || a.levels < 2) return 0.0;
  std::vector<std::size_t> bin_total(a.levels, 0), bin_pos(a.levels, 0);
  for (std::size_t i = 0; i < m; ++i) {
    ++bin_total[a.codes[i]];
    bin_pos[a.codes[i]] += b[i];
  }
  const double total = static_cast<double>(m);
  const double ny[2] = {static_cast<double>(m - positives), static_cast<double>(positives)};
  double mi = 0.0;
  for (std::size_t u = 0; u < a.levels; ++u) {
    const std::size_t cell[2] = {bin_total[u] - bin_pos[u], bin_pos[u]};
    const double nu = static_cast<double>(bin_total[u]);
    for (int v = 0; v < 2; ++v) {
      if (cell[v] == 0) continue;
      const double nuv = static_cast<double>(cell[v]);
      mi += nuv / total * std::log(nuv * total / (nu * ny[v]));
    }
  }
  return std::max(mi, 0.0);
}

inline std::size_t count_positives(std::span<const std::uint8_t> b) {
  std::size_t n = 0;
  for (auto v : b) {
    require(v <= 1, ErrorCode::kNonBinaryConceptValue, "label is not 0 or 1");
    n += v;
  }
  return n;
}

}  // namespace detail

/// MI between activations `a` and a binary label `b`. Constant `b` gives 0.
inline double mi_binary(std::span<const double> a, std::span<const std::uint8_t> b,
                        BinningSpec spec = {}) {
  require(a.size() == b.size(), ErrorCode::kLengthMismatch,
          "activation and label lengths differ");
  require(spec.n_bins <= a.size(), ErrorCode::kInvalidArgument,
          "n_bins exceeds the number of samples");
  const std::size_t positives = detail::count_positives(b);
  if (positives == 0 || positives == b.size()) return 0.0;
  return detail::mi_codes_binary(discretize_equal_frequency(a, spec.n_bins), b, positives);
}

/// MI between a feature and a real vector over the rows selected by `mask`.
/// Numeric sides are quantile-binned, categorical sides keep native codes.
/// Bins shrink to floor(selected / 2) (minimum 2) when fewer than
/// 2 * n_bins rows are selected.
inline double mi_general(std::span<const double> x, FeatureKind x_kind,
                         std::span<const double> y, std::span<const std::uint8_t> mask,
                         BinningSpec spec = {}) {
  require(x.size() == y.size() && x.size() == mask.size(), ErrorCode::kLengthMismatch,
          "feature, activation and mask lengths differ");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) continue;
    xs.push_back(x[i]);
    ys.push_back(y[i]);
  }
  require(!xs.empty(), ErrorCode::kEmptyMask, "mask selects no rows");
  std::size_t bins = spec.n_bins;
  if (xs.size() < 2 * bins) bins = std::max<std::size_t>(2, xs.size() / 2);
  const auto dx = x_kind == FeatureKind::kCategorical ? discretize_categorical(xs)
                                                      : discretize_equal_frequency(xs, bins);
  return plugin_mi(dx, discretize_equal_frequency(ys, bins));
}

/// N x C matrix of MI estimates, row-major by neuron.
class MIMatrix {
 public:
  MIMatrix() = default;
  MIMatrix(std::size_t neurons, std::size_t concepts, std::vector<double> values)
      : neurons_(neurons), concepts_(concepts), values_(std::move(values)) {
    require(values_.size() == neurons_ * concepts_, ErrorCode::kDimensionMismatch,
            "MI payload does not match N*C");
    for (double v : values_) {
      require(std::isfinite(v) && v >= 0.0, ErrorCode::kNumericFailure,
              "MI values must be finite and non-negative");
    }
  }

  std::size_t neurons() const { return neurons_; }
  std::size_t concepts() const { return concepts_; }
  double operator()(std::size_t neuron, std::size_t concept_id) const {
    return values_[neuron * concepts_ + concept_id];
  }
  const std::vector<double>& values() const { return values_; }

  std::vector<double> column(std::size_t concept_id) const {
    std::vector<double> out(neurons_);
    for (std::size_t i = 0; i < neurons_; ++i) out[i] = (*this)(i, concept_id);
    return out;
  }

  std::span<const double> row(std::size_t neuron) const {
    return {values_.data() + neuron * concepts_, concepts_};
  }

  bool operator==(const MIMatrix&) const = default;

 private:
  std::size_t neurons_ = 0;
  std::size_t concepts_ = 0;
  std::vector<double> values_;
};

/// Every neuron is binned once; each cell depends only on its own pair.
inline MIMatrix mi_matrix(const ActivationMatrix& a, const ConceptMatrix& b,
                          BinningSpec spec = {}, std::size_t workers = thread_count()) {
  require_same_rows(a, b);
  require(spec.n_bins <= a.rows(), ErrorCode::kInvalidArgument,
          "n_bins exceeds the number of samples");
  const std::size_t n = a.cols(), c = b.cols();
  std::vector<std::size_t> positives(c);
  for (std::size_t j = 0; j < c; ++j) positives[j] = detail::count_positives(b.column(j));
  std::vector<double> values(n * c);
  parallel_for(
      n,
      [&](std::size_t i) {
        const auto binned = discretize_equal_frequency(a.column(i), spec.n_bins);
        for (std::size_t j = 0; j < c; ++j) {
          values[i * c + j] = detail::mi_codes_binary(binned, b.column(j), positives[j]);
        }
      },
      workers);
  return MIMatrix(n, c, std::move(values));
}

}  // namespace ncs

#endif  // NCS_MI_HPP_
