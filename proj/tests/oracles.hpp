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

#ifndef NCS_TESTS_ORACLES_HPP_
#define NCS_TESTS_ORACLES_HPP_

// Independent reference implementations used only by tests. None of these
// call into the code paths they check.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "ncs/metrics.hpp"

namespace ncs::oracle {

// Plug-in MI from exact joint counts over distinct activation values.
inline double joint_count_mi(const std::vector<double>& a, const std::vector<std::uint8_t>& b) {
  std::map<std::pair<double, int>, double> joint;
  std::map<double, double> pa;
  std::map<int, double> pb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    joint[{a[i], b[i]}] += 1.0;
    pa[a[i]] += 1.0;
    pb[b[i]] += 1.0;
  }
  const double m = static_cast<double>(a.size());
  double mi = 0.0;
  for (const auto& [key, n] : joint) {
    const double pxy = n / m;
    mi += pxy * std::log(pxy / ((pa[key.first] / m) * (pb[key.second] / m)));
  }
  return mi < 0.0 ? 0.0 : mi;
}

// Plug-in entropy of a discrete sample.
template <typename T>
double entropy(const std::vector<T>& x) {
  std::map<T, double> counts;
  for (const auto& v : x) counts[v] += 1.0;
  const double m = static_cast<double>(x.size());
  double h = 0.0;
  for (const auto& [_, n] : counts) h -= n / m * std::log(n / m);
  return h;
}

// O(n^2) dominance filter.
inline std::vector<std::pair<std::size_t, std::size_t>> brute_front(
    const std::vector<PairScore>& pairs) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& p : pairs) {
    bool dominated = false;
    for (const auto& q : pairs) {
      if (q.surprisal >= p.surprisal && q.selectivity >= p.selectivity &&
          (q.surprisal > p.surprisal || q.selectivity > p.selectivity)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) out.emplace_back(p.neuron, p.concept_id);
  }
  return out;
}

// Direct count for a tail fraction, with no sorting.
inline double tail_fraction(const std::vector<double>& col, std::size_t i) {
  std::size_t n = 0;
  for (double v : col) n += v >= col[i];
  return static_cast<double>(n) / static_cast<double>(col.size());
}

// Composite Gauss-Legendre (5-point) integral of f over [lo, hi].
template <typename F>
long double integrate(F f, long double lo, long double hi, int panels = 2000) {
  static const long double nodes[5] = {0.0L, -0.5384693101056830910363144L,
                                       0.5384693101056830910363144L,
                                       -0.9061798459386639927976269L,
                                       0.9061798459386639927976269L};
  static const long double weights[5] = {0.5688888888888888888888889L,
                                         0.4786286704993664680412915L,
                                         0.4786286704993664680412915L,
                                         0.2369268850561890875142640L,
                                         0.2369268850561890875142640L};
  const long double h = (hi - lo) / panels;
  long double total = 0.0L;
  for (int p = 0; p < panels; ++p) {
    const long double mid = lo + (p + 0.5L) * h;
    for (int k = 0; k < 5; ++k) total += weights[k] * f(mid + 0.5L * h * nodes[k]);
  }
  return total * 0.5L * h;
}

}  // namespace ncs::oracle

#endif  // NCS_TESTS_ORACLES_HPP_
