// Copyright 2026 The dirlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dirlab/hermite.hpp"

#include <cmath>

#include "dirlab/errors.hpp"

namespace dirlab {

double HermiteCoefficients::eval_power_sum(double t) const {
  double acc = 0.0;
  double tk = 1.0;
  for (int k = 0; k <= degree; ++k) {
    if (coeffs[k] != 0) acc += static_cast<double>(coeffs[k]) * tk;
    tk *= t;
  }
  return acc;
}

HermiteCoefficients hermite_coefficients(int n) {
  if (n < 0) throw DomainError("hermite_coefficients: negative degree");
  HermiteCoefficients h;
  h.degree = n;
  h.coeffs.assign(static_cast<std::size_t>(n) + 1, 0);
  // alpha_{n,m} = n! / ((n-2m)! 2^m m!), built by the exact integer ratio
  // alpha_{n,m+1} = alpha_{n,m} (n-2m)(n-2m-1) / (2(m+1)).
  std::int64_t alpha = 1;
  int sign = 1;
  for (int m = 0; 2 * m <= n; ++m) {
    h.coeffs[static_cast<std::size_t>(n - 2 * m)] = sign * alpha;
    const std::int64_t num =
        static_cast<std::int64_t>(n - 2 * m) * static_cast<std::int64_t>(n - 2 * m - 1);
    alpha = alpha * num / (2 * (m + 1));
    sign = -sign;
  }
  return h;
}

HermiteCoefficients hermite_coefficients_recurrence(int n) {
  if (n < 0) throw DomainError("hermite_coefficients_recurrence: negative degree");
  std::vector<std::int64_t> prev = {1};      // H_0
  if (n == 0) return {0, prev};
  std::vector<std::int64_t> cur = {0, 1};    // H_1
  for (int k = 1; k < n; ++k) {
    std::vector<std::int64_t> next(cur.size() + 1, 0);
    for (std::size_t j = 0; j < cur.size(); ++j) next[j + 1] = cur[j];
    for (std::size_t j = 0; j < prev.size(); ++j) next[j] -= static_cast<std::int64_t>(k) * prev[j];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return {n, cur};
}

double hermite_eval(int n, double t) {
  if (n < 0) throw DomainError("hermite_eval: negative degree");
  if (n == 0) return 1.0;
  double hkm1 = 1.0;
  double hk = t;
  for (int k = 1; k < n; ++k) {
    const double hkp1 = t * hk - static_cast<double>(k) * hkm1;
    hkm1 = hk;
    hk = hkp1;
  }
  return hk;
}

double wick_power(double z, double c, int n) {
  if (n < 0) throw DomainError("wick_power: negative degree");
  if (!(c > 0.0)) throw DomainError("wick_power: variance must be positive");
  if (n == 0) return 1.0;
  return std::pow(c, 0.5 * n) * hermite_eval(n, z / std::sqrt(c));
}

}  // namespace dirlab
