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

#ifndef NCS_MATRIX_HPP_
#define NCS_MATRIX_HPP_

#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ncs/error.hpp"

namespace ncs {

/// Position of a neuron inside the network: 1-based layer, 0-based unit.
struct NeuronMeta {
  int layer_index = 1;
  std::size_t unit_index = 0;

  auto operator<=>(const NeuronMeta&) const = default;
};

/// One layer holding `count` units, numbered 0..count-1.
inline std::vector<NeuronMeta> single_layer_meta(std::size_t count) {
  std::vector<NeuronMeta> meta(count);
  for (std::size_t i = 0; i < count; ++i) meta[i] = {1, i};
  return meta;
}

/// Columns split into consecutive layers of `width` units.
inline std::vector<NeuronMeta> layered_meta(std::size_t count, std::size_t width) {
  require(width > 0 && count % width == 0, ErrorCode::kDimensionMismatch,
          "neuron count " + std::to_string(count) +
              " is not a multiple of layer width " + std::to_string(width));
  std::vector<NeuronMeta> meta(count);
  for (std::size_t i = 0; i < count; ++i) {
    meta[i] = {static_cast<int>(i / width) + 1, i % width};
  }
  return meta;
}

/// M samples by N neurons, stored column-major so each neuron is contiguous.
class ActivationMatrix {
 public:
  ActivationMatrix() = default;

  ActivationMatrix(std::size_t rows, std::size_t cols,
                   std::vector<double> column_major,
                   std::vector<NeuronMeta> meta)
      : rows_(rows), cols_(cols), values_(std::move(column_major)),
        meta_(std::move(meta)) {
    validate();
  }

  ActivationMatrix(std::size_t rows, std::size_t cols,
                   std::vector<double> column_major)
      : ActivationMatrix(rows, cols, std::move(column_major),
                         single_layer_meta(cols)) {}

  static ActivationMatrix from_row_major(std::size_t rows, std::size_t cols,
                                         std::span<const double> row_major,
                                         std::vector<NeuronMeta> meta) {
    require(row_major.size() == rows * cols, ErrorCode::kDimensionMismatch,
            "payload size does not match rows*cols");
    std::vector<double> values(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        values[c * rows + r] = row_major[r * cols + c];
      }
    }
    return ActivationMatrix(rows, cols, std::move(values), std::move(meta));
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double operator()(std::size_t row, std::size_t col) const {
    return values_[col * rows_ + row];
  }

  std::span<const double> column(std::size_t col) const {
    return {values_.data() + col * rows_, rows_};
  }

  const std::vector<NeuronMeta>& meta() const { return meta_; }
  const std::vector<double>& column_major() const { return values_; }

  std::size_t layer_count() const {
    std::set<int> layers;
    for (const auto& m : meta_) layers.insert(m.layer_index);
    return layers.size();
  }

  std::vector<double> row_major() const {
    std::vector<double> out(rows_ * cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < cols_; ++c) out[r * cols_ + c] = (*this)(r, c);
    }
    return out;
  }

  bool operator==(const ActivationMatrix&) const = default;

 private:
  void validate() const {
    require(rows_ >= 2, ErrorCode::kDimensionMismatch,
            "activation matrix needs at least 2 rows");
    require(cols_ >= 1, ErrorCode::kDimensionMismatch,
            "activation matrix needs at least 1 column");
    require(values_.size() == rows_ * cols_, ErrorCode::kDimensionMismatch,
            "activation payload size does not match rows*cols");
    require(meta_.size() == cols_, ErrorCode::kDimensionMismatch,
            "neuron metadata length differs from column count");
    for (double v : values_) {
      require(std::isfinite(v), ErrorCode::kNonFiniteValue,
              "activation matrix contains a non-finite value");
    }
    std::set<NeuronMeta> seen;
    for (const auto& m : meta_) {
      require(m.layer_index >= 1, ErrorCode::kMalformedHeader,
              "layer index must be 1-based");
      require(seen.insert(m).second, ErrorCode::kMalformedHeader,
              "duplicate (layer, unit) pair L" + std::to_string(m.layer_index) +
                  "_U" + std::to_string(m.unit_index));
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
  std::vector<NeuronMeta> meta_;
};

inline std::vector<std::string> default_concept_names(std::size_t count) {
  std::vector<std::string> names(count);
  for (std::size_t j = 0; j < count; ++j) names[j] = "c" + std::to_string(j);
  return names;
}

/// M samples by C binary concepts, column-major. Rows may be multi-hot.
class ConceptMatrix {
 public:
  ConceptMatrix() = default;

  ConceptMatrix(std::size_t rows, std::size_t cols,
                std::vector<std::uint8_t> column_major,
                std::vector<std::string> names)
      : rows_(rows), cols_(cols), values_(std::move(column_major)),
        names_(std::move(names)) {
    validate();
  }

  ConceptMatrix(std::size_t rows, std::size_t cols,
                std::vector<std::uint8_t> column_major)
      : ConceptMatrix(rows, cols, std::move(column_major),
                      default_concept_names(cols)) {}

  static ConceptMatrix from_row_major(std::size_t rows, std::size_t cols,
                                      std::span<const std::uint8_t> row_major,
                                      std::vector<std::string> names) {
    require(row_major.size() == rows * cols, ErrorCode::kDimensionMismatch,
            "payload size does not match rows*cols");
    std::vector<std::uint8_t> values(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        values[c * rows + r] = row_major[r * cols + c];
      }
    }
    return ConceptMatrix(rows, cols, std::move(values), std::move(names));
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::uint8_t operator()(std::size_t row, std::size_t col) const {
    return values_[col * rows_ + row];
  }

  std::span<const std::uint8_t> column(std::size_t col) const {
    return {values_.data() + col * rows_, rows_};
  }

  const std::vector<std::string>& names() const { return names_; }
  const std::vector<std::uint8_t>& column_major() const { return values_; }

  std::vector<std::uint8_t> row_major() const {
    std::vector<std::uint8_t> out(rows_ * cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < cols_; ++c) out[r * cols_ + c] = (*this)(r, c);
    }
    return out;
  }

  bool operator==(const ConceptMatrix&) const = default;

 private:
  void validate() const {
    require(cols_ >= 1, ErrorCode::kDimensionMismatch,
            "concept matrix needs at least 1 column");
    require(values_.size() == rows_ * cols_, ErrorCode::kDimensionMismatch,
            "concept payload size does not match rows*cols");
    require(names_.size() == cols_, ErrorCode::kDimensionMismatch,
            "concept name count differs from column count");
    for (auto v : values_) {
      require(v <= 1, ErrorCode::kNonBinaryConceptValue,
              "concept value " + std::to_string(v) + " is not 0 or 1");
    }
    std::set<std::string> seen;
    for (const auto& name : names_) {
      require(!name.empty(), ErrorCode::kMalformedHeader, "empty concept name");
      require(seen.insert(name).second, ErrorCode::kMalformedHeader,
              "duplicate concept name '" + name + "'");
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint8_t> values_;
  std::vector<std::string> names_;
};

inline void require_same_rows(const ActivationMatrix& a, const ConceptMatrix& b) {
  require(a.rows() == b.rows(), ErrorCode::kDimensionMismatch,
          "activation rows (" + std::to_string(a.rows()) +
              ") differ from concept rows (" + std::to_string(b.rows()) + ")");
}

enum class FeatureKind { kNumeric, kCategorical };

struct FeatureColumn {
  std::string name;
  FeatureKind kind = FeatureKind::kNumeric;
  // Categorical levels are stored as integer codes.
  std::vector<double> values;
};

inline constexpr std::size_t kMaxCategoricalCodes = std::size_t{1} << 16;

/// Input features aligned with the activation rows.
class FeatureTable {
 public:
  FeatureTable() = default;

  explicit FeatureTable(std::vector<FeatureColumn> columns)
      : columns_(std::move(columns)) {
    validate();
  }

  std::size_t rows() const {
    return columns_.empty() ? 0 : columns_.front().values.size();
  }
  const std::vector<FeatureColumn>& columns() const { return columns_; }

 private:
  void validate() const {
    std::set<std::string> names;
    for (const auto& col : columns_) {
      require(!col.name.empty(), ErrorCode::kMalformedHeader, "empty feature name");
      require(names.insert(col.name).second, ErrorCode::kMalformedHeader,
              "duplicate feature name '" + col.name + "'");
      require(col.values.size() == rows(), ErrorCode::kDimensionMismatch,
              "feature '" + col.name + "' has a different length");
      for (double v : col.values) {
        require(std::isfinite(v), ErrorCode::kNonFiniteValue,
                "feature '" + col.name + "' contains a non-finite value");
      }
      if (col.kind == FeatureKind::kCategorical) {
        std::set<double> codes(col.values.begin(), col.values.end());
        require(codes.size() <= kMaxCategoricalCodes, ErrorCode::kMalformedValue,
                "feature '" + col.name + "' has too many categories");
      }
    }
  }

  std::vector<FeatureColumn> columns_;
};

}  // namespace ncs

#endif  // NCS_MATRIX_HPP_
