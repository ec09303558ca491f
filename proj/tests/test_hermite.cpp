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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dirlab/errors.hpp"
#include "dirlab/hermite.hpp"
#include "dirlab/rng.hpp"

using namespace dirlab;

TEST_CASE("hermite values") {
  CHECK(hermite_eval(0, -3.7) == 1.0);
  CHECK(hermite_eval(0, 123.0) == 1.0);
  CHECK(hermite_eval(2, 1.0) == doctest::Approx(0.0));  // t^2 - 1
  CHECK(hermite_eval(3, 2.0) == doctest::Approx(2.0));  // t^3 - 3t
  CHECK(hermite_eval(1, 0.75) == doctest::Approx(0.75));
  CHECK_THROWS_AS(hermite_eval(-1, 0.0), DomainError);
}

TEST_CASE("coefficients are monic with the factorial pattern and parity") {
  for (int n = 0; n <= 20; ++n) {
    const auto h = hermite_coefficients(n);
    CHECK(h.coeffs[static_cast<std::size_t>(n)] == 1);  // monic
    for (int k = 0; k <= n; ++k)
      if ((n - k) % 2 == 1) CHECK(h.coeffs[static_cast<std::size_t>(k)] == 0);
  }
  // alpha_{n,m} = n!/((n-2m)! 2^m m!): spot values.
  const auto h4 = hermite_coefficients(4);  // t^4 - 6 t^2 + 3
  CHECK(h4.coeffs[4] == 1);
  CHECK(h4.coeffs[2] == -6);
  CHECK(h4.coeffs[0] == 3);
  const auto h6 = hermite_coefficients(6);  // t^6 - 15 t^4 + 45 t^2 - 15
  CHECK(h6.coeffs[6] == 1);
  CHECK(h6.coeffs[4] == -15);
  CHECK(h6.coeffs[2] == 45);
  CHECK(h6.coeffs[0] == -15);
}

TEST_CASE("closed form equals the three-term recurrence in integer arithmetic") {
  for (int n = 0; n <= 20; ++n) {
    const auto a = hermite_coefficients(n);
    const auto b = hermite_coefficients_recurrence(n);
    REQUIRE(a.coeffs.size() == b.coeffs.size());
    CHECK(a.coeffs == b.coeffs);
  }
}

TEST_CASE("power-sum path agrees with the recurrence evaluation to 1e-10") {
  for (int n = 0; n <= 20; ++n) {
    const auto coeffs = hermite_coefficients(n);
    for (double t = -4.0; t <= 4.0; t += 0.25) {
      const double a = coeffs.eval_power_sum(t);
      const double b = hermite_eval(n, t);
      CHECK(std::fabs(a - b) <= 1e-10 * std::max({1.0, std::fabs(a), std::fabs(b)}));
    }
  }
}

TEST_CASE("wick power worked values") {
  CHECK(wick_power(0.33, 1.0, 0) == 1.0);
  CHECK(wick_power(-7.0, 2.5, 0) == 1.0);
  CHECK(wick_power(2.0, 1.0, 2) == doctest::Approx(3.0));
  CHECK(wick_power(3.0, 4.0, 2) == doctest::Approx(5.0));  // 9 - 4
  CHECK_THROWS_AS(wick_power(1.0, 0.0, 2), DomainError);
  CHECK_THROWS_AS(wick_power(1.0, -1.0, 2), DomainError);
  // :z:^1 = z for any variance.
  for (double c : {0.3, 1.0, 4.7})
    for (double z : {-2.0, 0.0, 0.9}) CHECK(wick_power(z, c, 1) == doctest::Approx(z));
}

TEST_CASE("gaussian mean-zero and orthogonality by Monte Carlo") {
  const std::size_t n_samples = 200000;
  const double c = 1.3;
  std::vector<double> g(n_samples);
  rng::normal_fill(2024, 1, 0, g.data(), n_samples);
  const double rc = std::sqrt(c);
  for (auto& v : g) v *= rc;

  std::vector<std::vector<double>> wick(7, std::vector<double>(n_samples));
  for (int n = 1; n <= 6; ++n)
    for (std::size_t i = 0; i < n_samples; ++i) wick[static_cast<std::size_t>(n)][i] = wick_power(g[i], c, n);

  for (int n = 1; n <= 6; ++n) {
    double mean = 0.0, msq = 0.0;
    for (double v : wick[static_cast<std::size_t>(n)]) {
      mean += v;
      msq += v * v;
    }
    mean /= n_samples;
    msq /= n_samples;
    const double se = std::sqrt((msq - mean * mean) / n_samples);
    CHECK(std::fabs(mean) <= 4.0 * se);
  }
  for (int n = 1; n <= 4; ++n) {
    for (int m = n; m <= 4; ++m) {
      double mean = 0.0, msq = 0.0;
      for (std::size_t i = 0; i < n_samples; ++i) {
        const double p = wick[static_cast<std::size_t>(n)][i] * wick[static_cast<std::size_t>(m)][i];
        mean += p;
        msq += p * p;
      }
      mean /= n_samples;
      msq /= n_samples;
      const double se = std::sqrt((msq - mean * mean) / n_samples);
      double target = 0.0;
      if (n == m) {
        target = std::pow(c, n);
        for (int k = 2; k <= n; ++k) target *= k;
      }
      CHECK(std::fabs(mean - target) <= 4.0 * se);
    }
  }
}
