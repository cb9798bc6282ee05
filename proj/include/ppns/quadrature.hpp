//
// Copyright 2026 The PPNS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Globally adaptive 7/15-point Gauss-Kronrod quadrature on a finite interval.

#ifndef PPNS_QUADRATURE_HPP_
#define PPNS_QUADRATURE_HPP_

#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <vector>

namespace ppns {

struct QuadratureResult {
  double value = 0;
  double abs_error = 0;
  std::size_t evaluations = 0;
  bool converged = false;
};

namespace detail {

// Kronrod abscissae on [0, 1); the odd-indexed ones are the Gauss points.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

template <typename F>
Segment gauss_kronrod15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[j] * sum;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * sum;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace detail

// Bisects the segment with the largest error estimate until the summed
// estimate drops below abs_tol or max_evaluations is reached.
template <typename F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, double abs_tol,
                                    std::size_t max_evaluations = 1'000'000) {
  constexpr std::size_t kPerSegment = 15;
  std::priority_queue<detail::Segment> heap;
  QuadratureResult result;
  auto first = detail::gauss_kronrod15(f, a, b);
  result.evaluations = kPerSegment;
  heap.push(first);
  double value = first.value;
  double error = first.error;

  while (error > abs_tol &&
         result.evaluations + 2 * kPerSegment <= max_evaluations) {
    const detail::Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // no room left to split
    heap.pop();
    auto left = detail::gauss_kronrod15(f, worst.a, mid);
    auto right = detail::gauss_kronrod15(f, mid, worst.b);
    result.evaluations += 2 * kPerSegment;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum to shed the drift of the running updates.
  value = 0;
  error = 0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  result.value = value;
  result.abs_error = error;
  result.converged = error <= abs_tol;
  return result;
}

}  // namespace ppns

#endif  // PPNS_QUADRATURE_HPP_
