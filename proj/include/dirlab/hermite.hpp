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

#ifndef DIRLAB_HERMITE_HPP
#define DIRLAB_HERMITE_HPP

#include <cstdint>
#include <vector>

namespace dirlab {

// Probabilists' (monic) Hermite polynomials H_n and the Wick powers built
// from them. Coefficients are exact integers for every n used here, so the
// closed-form path can be cross-checked against the three-term recurrence
// H_{n+1}(t) = t H_n(t) - n H_{n-1}(t) in integer arithmetic.

/// Exact coefficients of H_n; coeffs[k] multiplies t^k. Monic, alternating
/// parity (entries of the opposite parity are zero).
struct HermiteCoefficients {
  int degree = 0;
  std::vector<std::int64_t> coeffs;

  double eval_power_sum(double t) const;
};

/// Coefficients from the closed-form factorial expression. n <= 20 keeps all
/// intermediates inside int64.
HermiteCoefficients hermite_coefficients(int n);

/// Coefficients built by the three-term recurrence, for cross-checking.
HermiteCoefficients hermite_coefficients_recurrence(int n);

/// H_n(t) by the recurrence (the numerically stable path for all t).
double hermite_eval(int n, double t);

/// Wick power :z^n: with local variance c > 0: c^{n/2} H_n(c^{-1/2} z).
double wick_power(double z, double c, int n);

}  // namespace dirlab

#endif  // DIRLAB_HERMITE_HPP
