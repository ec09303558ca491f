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

#include "dirlab/duhamel.hpp"
#include "dirlab/errors.hpp"
#include "dirlab/presets.hpp"

using namespace dirlab;

TEST_CASE("lp uniqueness interval") {
  const auto full = lp_uniqueness_interval(1.0);
  CHECK(full.p_lo == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(full.p_hi_infinite);
  CHECK(std::isinf(full.p_hi));

  const auto quarter = lp_uniqueness_interval(0.25);
  CHECK(quarter.p_lo == doctest::Approx(5.0 / 3.0).epsilon(1e-14));
  CHECK(quarter.p_hi == doctest::Approx(3.0).epsilon(1e-14));

  // eps0 -> 0+: the interval collapses toward (2, 2).
  const auto small = lp_uniqueness_interval(1e-10);
  CHECK(small.p_lo == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(small.p_hi == doctest::Approx(2.0).epsilon(1e-4));

  CHECK_THROWS_AS(lp_uniqueness_interval(0.0), DomainError);
  CHECK_THROWS_AS(lp_uniqueness_interval(-0.5), DomainError);
  CHECK_THROWS_AS(lp_uniqueness_interval(1.5), DomainError);

  // Monotone nesting over a scan.
  double prev_lo = 10.0, prev_hi = 0.0;
  for (int k = 1; k <= 20; ++k) {
    const auto iv = lp_uniqueness_interval(k / 20.0);
    CHECK(iv.p_lo <= prev_lo + 1e-15);
    CHECK(iv.p_hi >= prev_hi - 1e-15);
    prev_lo = iv.p_lo;
    prev_hi = iv.p_hi;
  }
}

namespace {

struct LadderSetup {
  ApproximationLadder ladder = make_gauss_sin_ladder(0.3, 2, 2, 2, 5.0);
  Grid grid{2, 5.0, 61, 0.0};
  GridGeometry geom{grid};
  MeasureOnGrid nu{ladder.measure, geom};
  RiggedBasis basis = RiggedBasis::power(1.0, 2);
  std::vector<double> f = make_initial_datum("plateau:1.5,3", geom);
  SolveOptions opt;

  LadderSetup() {
    for (int k = 0; k <= 16; ++k) opt.snapshot_times.push_back(0.5 * k / 16.0);
  }
  GridSolution solve(int n, int m) {
    return solve_cauchy(build_projected_drift(ladder, n, m), f, 0.5, grid, opt);
  }
};

}  // namespace

TEST_CASE("projected drifts realize the nested families") {
  LadderSetup s;
  const auto exact = build_projected_drift(s.ladder, -1, -1);
  const auto rung = build_projected_drift(s.ladder, 2, 1);
  std::vector<double> x = {0.7, -1.1}, b_exact(2), b_rung(2), beta(2);
  exact.eval(x, b_exact);
  s.ladder.measure.beta(x, beta);
  CHECK(b_exact[0] == doctest::Approx(beta[0]).epsilon(1e-14));
  CHECK(b_exact[1] == doctest::Approx(beta[1]).epsilon(1e-14));

  rung.eval(x, b_rung);
  // m = 1 truncates the linear part to the first coordinate.
  const double scale = 1.0 - std::pow(3.0, -2.0);
  CHECK(b_rung[0] == doctest::Approx(-x[0] - scale * 0.3 * std::sin(x[0])));
  CHECK(b_rung[1] == doctest::Approx(-scale * 0.3 * std::sin(x[1])));

  CHECK(rung.jacobian_fd_defect(x, 1e-5) < 1e-8);
  CHECK_THROWS_AS(build_projected_drift(s.ladder, 5, 0), ConfigError);

  // Nested delta errors decrease pointwise in m.
  std::vector<double> d0(2), d1(2), dex(2);
  s.ladder.delta_m(0, x, d0);
  s.ladder.delta_m(1, x, d1);
  s.ladder.measure.delta_part(x, dex);
  const auto err = [&](const std::vector<double>& v) {
    double acc = 0.0;
    for (int a = 0; a < 2; ++a) acc += (v[a] - dex[a]) * (v[a] - dex[a]);
    return acc;
  };
  CHECK(err(d1) <= err(d0));
}

TEST_CASE("duhamel gap bounds on a small ladder") {
  LadderSetup s;
  const auto reference = s.solve(-1, -1);

  const auto exact_sol = s.solve(-1, -1);
  const auto exact2 =
      duhamel_gap(s.ladder, -1, -1, reference, exact_sol, s.nu, s.basis, 0.5, 2.0);
  CHECK(exact2.lhs == doctest::Approx(0.0));
  CHECK(exact2.exact_rung);

  const auto rung_sol = s.solve(1, 1);
  const auto g2 = duhamel_gap(s.ladder, 1, 1, reference, rung_sol, s.nu, s.basis, 0.5, 2.0);
  const auto g1 = duhamel_gap(s.ladder, 1, 1, reference, rung_sol, s.nu, s.basis, 0.5, 1.0);
  CHECK(g2.lhs > 0.0);
  CHECK(g2.lhs <= g2.rhs);
  CHECK(g1.lhs <= g1.rhs);
  // L1 distance never exceeds the L2 distance under a probability measure.
  CHECK(g1.lhs <= g2.lhs + 1e-12);
  CHECK(g2.gamma == doctest::Approx(0.0));

  // Gap decays as m grows at fixed n.
  const auto m0 = s.solve(1, 0);
  const auto gm0 = duhamel_gap(s.ladder, 1, 0, reference, m0, s.nu, s.basis, 0.5, 2.0);
  const auto m2 = s.solve(1, 2);
  const auto gm2 = duhamel_gap(s.ladder, 1, 2, reference, m2, s.nu, s.basis, 0.5, 2.0);
  CHECK(gm0.lhs > g2.lhs);
  CHECK(gm2.lhs < g2.lhs);
  // The delta-error norm itself is monotone across the nested family.
  CHECK(gm0.delta_err_norm > g2.delta_err_norm);
  CHECK(g2.delta_err_norm > gm2.delta_err_norm);

  CHECK_THROWS_AS(
      duhamel_gap(s.ladder, 1, 1, reference, rung_sol, s.nu, s.basis, 0.5, 3.0),
      DomainError);
}
