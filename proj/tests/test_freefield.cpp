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
#include "dirlab/freefield.hpp"

using namespace dirlab;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("mode ordering and eigenvalues on the unit square") {
  RectangleDomain unit(1.0, 1.0);
  auto one = build_modes(unit, 1);
  CHECK(one[0].m == 0);
  CHECK(one[0].n == 0);
  CHECK(one[0].eigenvalue == doctest::Approx(1.0));

  auto three = build_modes(unit, 3);
  CHECK(three[0].eigenvalue == doctest::Approx(1.0));
  CHECK(three[1].eigenvalue == doctest::Approx(1.0 + kPi * kPi));
  CHECK(three[2].eigenvalue == doctest::Approx(1.0 + kPi * kPi));
  CHECK(three[1].m == 0);  // lexicographic tie-break: (0,1) before (1,0)
  CHECK(three[1].n == 1);
  CHECK(three[2].m == 1);
  CHECK(three[2].n == 0);

  RectangleDomain wide(2.0, 1.0);
  auto two = build_modes(wide, 2);
  CHECK(two[1].m == 1);
  CHECK(two[1].n == 0);
  CHECK(two[1].eigenvalue == doctest::Approx(1.0 + kPi * kPi / 4.0));

  for (std::size_t k = 1; k < 20; ++k) {
    auto modes = build_modes(unit, 20);
    CHECK(modes[k].eigenvalue >= modes[k - 1].eigenvalue);
  }
  CHECK_THROWS_AS(build_modes(unit, 0), DomainError);
  CHECK_THROWS_AS(RectangleDomain(0.0, 1.0), DomainError);
}

TEST_CASE("quadrature Gram matrix is the identity to 1e-6 up to K = 64") {
  ModeSet modes(RectangleDomain(1.0, 1.0), 64);
  CHECK(modes.orthonormality_defect() < 1e-6);
  ModeSet rect(RectangleDomain(2.0, 0.7), 32);
  CHECK(rect.orthonormality_defect() < 1e-6);
}

TEST_CASE("h_alpha norms") {
  ModeSet modes(RectangleDomain(1.0, 1.0), 3);
  CHECK(h_alpha_norm({1.0, 0.0, 0.0}, modes, -1.0) == doctest::Approx(1.0));
  CHECK(h_alpha_norm({0.0, 1.0, 0.0}, modes, -1.0) ==
        doctest::Approx(1.0 / std::sqrt(1.0 + kPi * kPi)));
  CHECK(h_alpha_norm({3.0, 4.0, 0.0}, modes, 0.0) == doctest::Approx(5.0));
  // Monotone in alpha (all eigenvalues >= 1).
  const std::vector<double> l = {0.5, -1.0, 2.0};
  CHECK(h_alpha_norm(l, modes, -1.0) <= h_alpha_norm(l, modes, 0.0));
  CHECK(h_alpha_norm(l, modes, 0.0) <= h_alpha_norm(l, modes, 1.0));
  CHECK_THROWS_AS(h_alpha_norm({1, 2, 3, 4}, modes, 0.0), DimensionError);
}

TEST_CASE("free-field sampler matches the covariance identity") {
  ModeSet modes(RectangleDomain(1.0, 1.0), 6);
  const std::size_t n_samples = 20000;
  std::vector<std::vector<double>> coeffs(6, std::vector<double>(n_samples));
  for (std::size_t i = 0; i < n_samples; ++i) {
    const auto s = sample_free_field(modes, 99, i);
    for (std::size_t j = 0; j < 6; ++j) coeffs[j][i] = s.coeffs[j];
  }
  for (std::size_t j = 0; j < 6; ++j) {
    double mean = 0.0, msq = 0.0;
    for (double v : coeffs[j]) {
      mean += v;
      msq += v * v;
    }
    mean /= n_samples;
    msq /= n_samples;
    const double var = msq - mean * mean;
    const double target = 1.0 / modes.lambda(j);
    const double se = var * std::sqrt(2.0 / (n_samples - 1.0));
    CHECK(std::fabs(var - target) <= 4.0 * se);
    CHECK(std::fabs(mean) <= 4.0 * std::sqrt(var / n_samples));
  }
  // Composite l = (e1 + e2)/sqrt(2): second moment of l(z) by bilinearity.
  double m2 = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double v = (coeffs[0][i] + coeffs[1][i]) / std::sqrt(2.0);
    m2 += v * v;
  }
  m2 /= n_samples;
  const double target = 0.5 * (1.0 / modes.lambda(0) + 1.0 / modes.lambda(1));
  CHECK(std::fabs(m2 - target) <= 4.0 * target * std::sqrt(2.0 / (n_samples - 1.0)));

  // Extending K keeps shared coordinates identical (counter streams).
  ModeSet wider(RectangleDomain(1.0, 1.0), 12);
  const auto narrow = sample_free_field(modes, 99, 17);
  const auto wide = sample_free_field(wider, 99, 17);
  for (std::size_t j = 0; j < 6; ++j) CHECK(narrow.coeffs[j] == wide.coeffs[j]);
}

TEST_CASE("pointwise field values and the local variance") {
  ModeSet one(RectangleDomain(1.0, 1.0), 1);
  FieldSample s1;
  s1.coeffs = {0.37};
  CHECK(field_point_value(s1, one, 0.2, 0.9) == doctest::Approx(0.37));
  CHECK(local_variance(one, 0.5, 0.5) == doctest::Approx(1.0));

  ModeSet three(RectangleDomain(1.0, 1.0), 3);
  FieldSample zero;
  zero.coeffs = {0.0, 0.0, 0.0};
  CHECK(field_point_value(zero, three, 0.3, 0.3) == 0.0);
  FieldSample e2;
  e2.coeffs = {0.0, 1.0, 0.0};
  CHECK(field_point_value(e2, three, 0.0, 0.0) == doctest::Approx(std::sqrt(2.0)));
  // Modes (0,1) and (1,0) vanish at the center, so c_3(center) = 1.
  CHECK(local_variance(three, 0.5, 0.5) == doctest::Approx(1.0).epsilon(1e-10));

  CHECK_THROWS_AS(field_point_value(e2, three, 1.2, 0.0), DomainError);
  CHECK_THROWS_AS(local_variance(three, -0.1, 0.5), DomainError);

  // MC second moment of the point value matches the local variance.
  const std::size_t n_samples = 20000;
  const double x = 0.31, y = 0.77;
  double m2 = 0.0, m4 = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const auto z = sample_free_field(three, 7, i);
    const double v = field_point_value(z, three, x, y);
    m2 += v * v;
    m4 += v * v * v * v;
  }
  m2 /= n_samples;
  m4 /= n_samples;
  const double se = std::sqrt((m4 - m2 * m2) / n_samples);
  CHECK(std::fabs(m2 - local_variance(three, x, y)) <= 4.0 * se);
}

TEST_CASE("rigging admissibility predicate") {
  CHECK(rigging_admissible(1.0, 1.0));
  CHECK(rigging_admissible(0.6, 1.0));
  CHECK_FALSE(rigging_admissible(0.5, 1.0));   // needs alpha > 1 - delta/2 = 0.5
  CHECK_FALSE(rigging_admissible(0.0, 3.0));   // needs alpha > 0
  CHECK(rigging_admissible(0.1, 2.0));
  CHECK_FALSE(rigging_admissible(1.0, 0.0));   // delta must be positive
  CHECK_FALSE(rigging_admissible(1.0, -1.0));

  // Hilbert-Schmidt tail of the admissible rigging: partial sums of
  // lambda^{-(alpha+delta)} settle (increments shrink by orders of magnitude).
  ModeSet modes(RectangleDomain(1.0, 1.0), 64);
  const double expo = -(1.0 + 1.0);
  double prev = 0.0, inc_8 = 0.0, inc_64 = 0.0;
  for (std::size_t j = 0; j < 64; ++j) {
    const double inc = std::pow(modes.lambda(j), expo);
    prev += inc;
    if (j == 7) inc_8 = inc;
    if (j == 63) inc_64 = inc;
  }
  CHECK(std::isfinite(prev));
  CHECK(inc_64 < 0.05 * inc_8);
}
