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

#ifndef NCS_IO_HPP_
#define NCS_IO_HPP_

// File formats:
//
//   NCIM binary: "NCIM" | version u8 = 1 | dtype u8 (1 = f64, 2 = u8) |
//                reserved u16 = 0 | rows u64 | cols u64 | row-major payload.
//                All fields little-endian.
//   CSV:         header row, comma separated. Activation headers are
//                "L<layer>_U<unit>", concept headers are concept names.

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ncs/error.hpp"
#include "ncs/matrix.hpp"

namespace ncs {

enum class MatrixFormat { kCsv, kBinary };

enum class Dtype : std::uint8_t { kFloat64 = 1, kUint8 = 2 };

inline constexpr std::array<std::uint8_t, 4> kNcimMagic = {0x4E, 0x43, 0x49, 0x4D};
inline constexpr std::uint8_t kNcimVersion = 1;
inline constexpr std::size_t kNcimHeaderSize = 4 + 1 + 1 + 2 + 8 + 8;

/// Decoded NCIM payload. Values are widened to double; u8 payloads stay
/// integral so re-encoding is exact.
struct NcimMatrix {
  Dtype dtype = Dtype::kFloat64;
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  std::vector<double> row_major;

  bool operator==(const NcimMatrix&) const = default;
};

namespace detail {

inline void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline std::uint64_t get_u64(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::kIoError, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return std::move(buffer).str();
}

inline void write_file(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorCode::kIoError,
          "cannot open '" + path + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  require(static_cast<bool>(out), ErrorCode::kIoError, "write to '" + path + "' failed");
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return cells;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string_view>> rows;
  std::string storage;
};

inline CsvTable parse_csv(std::string text) {
  CsvTable table;
  table.storage = std::move(text);
  std::string_view all = table.storage;
  if (all.size() >= 3 && all.substr(0, 3) == "\xEF\xBB\xBF") all.remove_prefix(3);
  bool first = true;
  std::size_t line_no = 0;
  while (!all.empty()) {
    const std::size_t nl = all.find('\n');
    std::string_view line = all.substr(0, nl);
    all = nl == std::string_view::npos ? std::string_view{} : all.substr(nl + 1);
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_csv_line(line);
    if (first) {
      for (auto c : cells) table.header.emplace_back(c);
      first = false;
    } else {
      require(cells.size() == table.header.size(), ErrorCode::kDimensionMismatch,
              "line " + std::to_string(line_no) + " has " +
                  std::to_string(cells.size()) + " fields, header has " +
                  std::to_string(table.header.size()));
      table.rows.push_back(std::move(cells));
    }
  }
  require(!first, ErrorCode::kMalformedHeader, "CSV input has no header row");
  return table;
}

// Decimal-point format with optional exponent; leading '+' accepted.
inline bool parse_double(std::string_view cell, double& out) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  if (cell.empty()) return false;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return ec == std::errc{} && ptr == cell.data() + cell.size();
}

inline double parse_cell(std::string_view cell, std::size_t row, std::size_t col) {
  double v = 0.0;
  require(parse_double(cell, v), ErrorCode::kMalformedValue,
          "cannot parse '" + std::string(cell) + "' at data row " +
              std::to_string(row + 1) + ", column " + std::to_string(col + 1));
  return v;
}

inline NeuronMeta parse_neuron_header(std::string_view cell) {
  const auto bad = [&] {
    fail(ErrorCode::kMalformedHeader,
         "activation header '" + std::string(cell) + "' is not L<layer>_U<unit>");
  };
  if (cell.size() < 4 || cell.front() != 'L') bad();
  const std::size_t sep = cell.find("_U");
  if (sep == std::string_view::npos || sep == 1) bad();
  long long layer = 0;
  unsigned long long unit = 0;
  const auto layer_part = cell.substr(1, sep - 1);
  const auto unit_part = cell.substr(sep + 2);
  auto r1 = std::from_chars(layer_part.data(), layer_part.data() + layer_part.size(), layer);
  auto r2 = std::from_chars(unit_part.data(), unit_part.data() + unit_part.size(), unit);
  if (r1.ec != std::errc{} || r1.ptr != layer_part.data() + layer_part.size() ||
      r2.ec != std::errc{} || r2.ptr != unit_part.data() + unit_part.size() ||
      unit_part.empty() || layer < 1) {
    bad();
  }
  return {static_cast<int>(layer), static_cast<std::size_t>(unit)};
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// NCIM

inline std::vector<std::uint8_t> encode_ncim(const NcimMatrix& m) {
  require(m.row_major.size() == m.rows * m.cols, ErrorCode::kDimensionMismatch,
          "NCIM payload size does not match rows*cols");
  std::vector<std::uint8_t> out(kNcimMagic.begin(), kNcimMagic.end());
  out.push_back(kNcimVersion);
  out.push_back(static_cast<std::uint8_t>(m.dtype));
  out.push_back(0);
  out.push_back(0);
  detail::put_u64(out, m.rows);
  detail::put_u64(out, m.cols);
  if (m.dtype == Dtype::kFloat64) {
    out.reserve(out.size() + 8 * m.row_major.size());
    for (double v : m.row_major) detail::put_u64(out, std::bit_cast<std::uint64_t>(v));
  } else {
    out.reserve(out.size() + m.row_major.size());
    for (double v : m.row_major) {
      require(v >= 0.0 && v <= 255.0 && v == std::floor(v), ErrorCode::kMalformedValue,
              "value does not fit dtype u8");
      out.push_back(static_cast<std::uint8_t>(v));
    }
  }
  return out;
}

inline NcimMatrix decode_ncim(std::span<const std::uint8_t> bytes) {
  require(bytes.size() >= kNcimHeaderSize, ErrorCode::kMalformedHeader,
          "file shorter than the NCIM header");
  require(std::equal(kNcimMagic.begin(), kNcimMagic.end(), bytes.begin()),
          ErrorCode::kMalformedHeader, "bad NCIM magic");
  require(bytes[4] == kNcimVersion, ErrorCode::kMalformedHeader,
          "unsupported NCIM version " + std::to_string(bytes[4]));
  require(bytes[5] == 1 || bytes[5] == 2, ErrorCode::kMalformedHeader,
          "unknown NCIM dtype " + std::to_string(bytes[5]));
  require(bytes[6] == 0 && bytes[7] == 0, ErrorCode::kMalformedHeader,
          "NCIM reserved field is not zero");
  NcimMatrix m;
  m.dtype = static_cast<Dtype>(bytes[5]);
  m.rows = detail::get_u64(bytes.data() + 8);
  m.cols = detail::get_u64(bytes.data() + 16);
  const std::size_t width = m.dtype == Dtype::kFloat64 ? 8 : 1;
  const std::size_t payload = bytes.size() - kNcimHeaderSize;
  require(m.cols == 0 || m.rows <= payload / width / m.cols,
          ErrorCode::kDimensionMismatch, "NCIM payload shorter than rows*cols");
  const std::size_t count = static_cast<std::size_t>(m.rows * m.cols);
  require(payload == count * width, ErrorCode::kDimensionMismatch,
          "NCIM payload size " + std::to_string(payload) +
              " does not match rows*cols*width " + std::to_string(count * width));
  m.row_major.resize(count);
  const std::uint8_t* p = bytes.data() + kNcimHeaderSize;
  for (std::size_t i = 0; i < count; ++i) {
    m.row_major[i] = m.dtype == Dtype::kFloat64
                         ? std::bit_cast<double>(detail::get_u64(p + 8 * i))
                         : static_cast<double>(p[i]);
  }
  return m;
}

inline NcimMatrix read_ncim(const std::string& path) {
  const std::string bytes = detail::read_file(path);
  return decode_ncim({reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()});
}

inline void write_ncim(const std::string& path, const NcimMatrix& m) {
  const auto bytes = encode_ncim(m);
  detail::write_file(path, {reinterpret_cast<const char*>(bytes.data()), bytes.size()});
}

/// Binary when the file starts with the NCIM magic, CSV otherwise.
inline MatrixFormat detect_format(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::kIoError, "cannot open '" + path + "'");
  std::array<char, 4> head{};
  in.read(head.data(), 4);
  if (in.gcount() == 4 &&
      std::equal(kNcimMagic.begin(), kNcimMagic.end(), head.begin(),
                 [](std::uint8_t a, char b) { return a == static_cast<std::uint8_t>(b); })) {
    return MatrixFormat::kBinary;
  }
  return MatrixFormat::kCsv;
}

// ---------------------------------------------------------------------------
// Typed loaders

/// Binary files carry no layer map; `layer_width` > 0 splits columns into
/// consecutive layers, 0 keeps one layer.
inline ActivationMatrix activations_from_ncim(const NcimMatrix& m,
                                              std::size_t layer_width = 0) {
  const auto cols = static_cast<std::size_t>(m.cols);
  auto meta = layer_width == 0 ? single_layer_meta(cols) : layered_meta(cols, layer_width);
  return ActivationMatrix::from_row_major(static_cast<std::size_t>(m.rows), cols,
                                          m.row_major, std::move(meta));
}

inline ConceptMatrix concepts_from_ncim(const NcimMatrix& m,
                                        std::vector<std::string> names = {}) {
  const auto cols = static_cast<std::size_t>(m.cols);
  if (names.empty()) names = default_concept_names(cols);
  std::vector<std::uint8_t> values(m.row_major.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = m.row_major[i];
    require(std::isfinite(v), ErrorCode::kNonFiniteValue, "non-finite concept value");
    require(v == 0.0 || v == 1.0, ErrorCode::kNonBinaryConceptValue,
            "concept value " + detail::format_double(v) + " is not 0 or 1");
    values[i] = static_cast<std::uint8_t>(v);
  }
  return ConceptMatrix::from_row_major(static_cast<std::size_t>(m.rows), cols, values,
                                       std::move(names));
}

inline NcimMatrix to_ncim(const ActivationMatrix& a) {
  return {Dtype::kFloat64, a.rows(), a.cols(), a.row_major()};
}

inline NcimMatrix to_ncim(const ConceptMatrix& b) {
  const auto rm = b.row_major();
  return {Dtype::kUint8, b.rows(), b.cols(), std::vector<double>(rm.begin(), rm.end())};
}

inline ActivationMatrix parse_activations_csv(std::string text) {
  const auto table = detail::parse_csv(std::move(text));
  std::vector<NeuronMeta> meta;
  for (const auto& h : table.header) meta.push_back(detail::parse_neuron_header(h));
  const std::size_t rows = table.rows.size();
  const std::size_t cols = table.header.size();
  std::vector<double> values(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double v = detail::parse_cell(table.rows[r][c], r, c);
      require(std::isfinite(v), ErrorCode::kNonFiniteValue,
              "non-finite activation at data row " + std::to_string(r + 1));
      values[c * rows + r] = v;
    }
  }
  return ActivationMatrix(rows, cols, std::move(values), std::move(meta));
}

inline ConceptMatrix parse_concepts_csv(std::string text) {
  const auto table = detail::parse_csv(std::move(text));
  const std::size_t rows = table.rows.size();
  const std::size_t cols = table.header.size();
  std::vector<std::uint8_t> values(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double v = detail::parse_cell(table.rows[r][c], r, c);
      require(std::isfinite(v), ErrorCode::kNonFiniteValue, "non-finite concept value");
      require(v == 0.0 || v == 1.0, ErrorCode::kNonBinaryConceptValue,
              "concept value '" + std::string(table.rows[r][c]) + "' at data row " +
                  std::to_string(r + 1) + " is not 0 or 1");
      values[c * rows + r] = static_cast<std::uint8_t>(v);
    }
  }
  return ConceptMatrix(rows, cols, std::move(values), table.header);
}

inline std::string activations_to_csv(const ActivationMatrix& a) {
  std::string out;
  for (std::size_t c = 0; c < a.cols(); ++c) {
    if (c) out += ',';
    out += "L" + std::to_string(a.meta()[c].layer_index) + "_U" +
           std::to_string(a.meta()[c].unit_index);
  }
  out += '\n';
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      if (c) out += ',';
      out += detail::format_double(a(r, c));
    }
    out += '\n';
  }
  return out;
}

inline std::string concepts_to_csv(const ConceptMatrix& b) {
  std::string out;
  for (std::size_t c = 0; c < b.cols(); ++c) {
    if (c) out += ',';
    out += b.names()[c];
  }
  out += '\n';
  for (std::size_t r = 0; r < b.rows(); ++r) {
    for (std::size_t c = 0; c < b.cols(); ++c) {
      if (c) out += ',';
      out += b(r, c) ? '1' : '0';
    }
    out += '\n';
  }
  return out;
}

inline ActivationMatrix load_activations(const std::string& path, MatrixFormat format,
                                         std::size_t layer_width = 0) {
  if (format == MatrixFormat::kBinary) {
    return activations_from_ncim(read_ncim(path), layer_width);
  }
  return parse_activations_csv(detail::read_file(path));
}

inline ActivationMatrix load_activations(const std::string& path,
                                         std::size_t layer_width = 0) {
  return load_activations(path, detect_format(path), layer_width);
}

inline ConceptMatrix load_concepts(const std::string& path, MatrixFormat format) {
  if (format == MatrixFormat::kBinary) return concepts_from_ncim(read_ncim(path));
  return parse_concepts_csv(detail::read_file(path));
}

inline ConceptMatrix load_concepts(const std::string& path) {
  return load_concepts(path, detect_format(path));
}

inline void save_activations(const std::string& path, const ActivationMatrix& a,
                             MatrixFormat format) {
  if (format == MatrixFormat::kBinary) {
    write_ncim(path, to_ncim(a));
  } else {
    detail::write_file(path, activations_to_csv(a));
  }
}

inline void save_concepts(const std::string& path, const ConceptMatrix& b,
                          MatrixFormat format) {
  if (format == MatrixFormat::kBinary) {
    write_ncim(path, to_ncim(b));
  } else {
    detail::write_file(path, concepts_to_csv(b));
  }
}

/// Feature CSV. A column is categorical when its header ends in ":cat" or
/// when any of its cells is not a number; categorical levels are coded by
/// their sorted distinct strings.
inline FeatureTable parse_features_csv(std::string text) {
  const auto table = detail::parse_csv(std::move(text));
  std::vector<FeatureColumn> columns;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    FeatureColumn col;
    std::string_view name = table.header[c];
    bool categorical = false;
    if (name.size() > 4 && name.substr(name.size() - 4) == ":cat") {
      name.remove_suffix(4);
      categorical = true;
    }
    col.name = std::string(name);
    std::vector<double> numeric(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size() && !categorical; ++r) {
      if (!detail::parse_double(table.rows[r][c], numeric[r])) categorical = true;
    }
    if (categorical) {
      std::map<std::string_view, double> codes;
      for (const auto& row : table.rows) codes.emplace(row[c], 0.0);
      double next = 0.0;
      for (auto& [_, code] : codes) code = next++;
      for (std::size_t r = 0; r < table.rows.size(); ++r) {
        numeric[r] = codes.at(table.rows[r][c]);
      }
      col.kind = FeatureKind::kCategorical;
    }
    col.values = std::move(numeric);
    columns.push_back(std::move(col));
  }
  return FeatureTable(std::move(columns));
}

inline FeatureTable load_features(const std::string& path) {
  return parse_features_csv(detail::read_file(path));
}

}  // namespace ncs

#endif  // NCS_IO_HPP_
