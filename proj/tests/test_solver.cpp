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
#include "dirlab/fdgrid.hpp"
#include "dirlab/kernels.hpp"
#include "dirlab/presets.hpp"

using namespace dirlab;

TEST_CASE("heat solve matches the kernel convolution, d = 1 and d = 2") {
  {
    Grid grid{1, 6.0, 401, 0.0};
    GridGeometry geom(grid);
    SolveOptions opt;
    opt.snapshot_times = {0.0, 0.5};
    const auto sol =
        solve_cauchy(make_drift("zero", 1), make_initial_datum("gauss:0.8", geom), 0.5, grid, opt);
    const auto& snap = sol.at_time(0.5);
    double x[1], err = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < geom.size(); ++i) {
      geom.point(i, std::span<double>(x, 1));
      if (std::fabs(x[0]) > 3.0) continue;
      const double r = heat_gaussian_value(1, std::span<const double>(x, 1), snap.t, 0.8);
      ref = std::max(ref, std::fabs(r));
      err = std::max(err, std::fabs(snap.u[i] - r));
    }
    CHECK(err / ref < 1e-3);
  }
  {
    Grid grid{2, 6.0, 121, 0.0};
    GridGeometry geom(grid);
    SolveOptions opt;
    opt.snapshot_times = {0.25};
    const auto sol =
        solve_cauchy(make_drift("zero", 2), make_initial_datum("gauss:0.8", geom), 0.25, grid, opt);
    const auto& snap = sol.at_time(0.25);
    double x[2], err = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < geom.size(); ++i) {
      geom.point(i, std::span<double>(x, 2));
      if (std::fabs(x[0]) > 3.0 || std::fabs(x[1]) > 3.0) continue;
      const double r = heat_gaussian_value(2, std::span<const double>(x, 2), snap.t, 0.8);
      ref = std::max(ref, std::fabs(r));
      err = std::max(err, std::fabs(snap.u[i] - r));
    }
    CHECK(err / ref < 1e-3);
  }
}

TEST_CASE("OU solve matches the Mehler oracle, d = 1") {
  Grid grid{1, 6.0, 401, 0.0};
  GridGeometry geom(grid);
  SolveOptions opt;
  opt.snapshot_times = {0.5, 1.0};
  const auto sol =
      solve_cauchy(make_drift("ou", 1), make_initial_datum("plateau:1.5,3", geom), 1.0, grid, opt);
  auto f = [](std::span<const double> x) {
    return smooth_step_down((std::fabs(x[0]) - 1.5) / 1.5);
  };
  MehlerOracle oracle(f, 1, 3.0, 80);
  for (double t : {0.5, 1.0}) {
    const auto& snap = sol.at_time(t);
    double x[1], err = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < geom.size(); ++i) {
      geom.point(i, std::span<double>(x, 1));
      if (std::fabs(x[0]) > 3.0) continue;
      const double r = oracle.value(std::span<const double>(x, 1), snap.t);
      ref = std::max(ref, std::fabs(r));
      err = std::max(err, std::fabs(snap.u[i] - r));
    }
    CHECK(err / ref < 1e-3);
  }
}

TEST_CASE("grid refinement shrinks the oracle error about fourfold") {
  auto error_at = [&](int n) {
    Grid grid{1, 6.0, n, 0.0};
    GridGeometry geom(grid);
    SolveOptions opt;
    opt.snapshot_times = {0.25};
    const auto sol =
        solve_cauchy(make_drift("zero", 1), make_initial_datum("gauss:0.8", geom), 0.25, grid, opt);
    const auto& snap = sol.at_time(0.25);
    double x[1], err = 0.0;
    for (std::size_t i = 0; i < geom.size(); ++i) {
      geom.point(i, std::span<double>(x, 1));
      if (std::fabs(x[0]) > 3.0) continue;
      err = std::max(err,
                     std::fabs(snap.u[i] - heat_gaussian_value(1, std::span<const double>(x, 1),
                                                               snap.t, 0.8)));
    }
    return err;
  };
  const double coarse = error_at(101);
  const double fine = error_at(201);
  CHECK(coarse / fine > 3.0);
  CHECK(coarse / fine < 5.5);
}

TEST_CASE("trivial data, mass conservation and the maximum principle") {
  Grid grid{2, 5.0, 61, 0.0};
  GridGeometry geom(grid);
  SolveOptions opt;
  opt.snapshot_times = {0.0, 0.2};

  const auto zero_sol =
      solve_cauchy(make_drift("ou", 2), std::vector<double>(geom.size(), 0.0), 0.2, grid, opt);
  for (double v : zero_sol.at_time(0.2).u) CHECK(v == 0.0);

  const auto heat =
      solve_cauchy(make_drift("zero", 2), make_initial_datum("plateau:1,2", geom), 0.2, grid, opt);
  const auto& w = geom.lebesgue_weights();
  const double mass0 = kernels::dot(heat.at_time(0.0).u.data(), w.data(), geom.size());
  const double mass1 = kernels::dot(heat.at_time(0.2).u.data(), w.data(), geom.size());
  CHECK(mass1 == doctest::Approx(mass0).epsilon(1e-9));

  double sup = 0.0, mn = 0.0;
  for (double v : heat.at_time(0.2).u) {
    sup = std::max(sup, std::fabs(v));
    mn = std::min(mn, v);
  }
  CHECK(sup <= heat.f_sup + 1e-12);
  CHECK(mn >= -1e-12);
}

TEST_CASE("setup guards") {
  Grid grid{2, 3.0, 41, 0.0};
  GridGeometry geom(grid);
  SolveOptions opt;
  opt.snapshot_times = {0.1};
  // Support reaching the sponge layer is rejected.
  CHECK_THROWS_AS(
      solve_cauchy(make_drift("zero", 2), make_initial_datum("plateau:2,2.95", geom), 0.1, grid, opt),
      DomainError);
  // User dt above the stability bound is rejected.
  Grid bad = grid;
  bad.dt = 1.0;
  CHECK_THROWS_AS(
      solve_cauchy(make_drift("zero", 2), make_initial_datum("plateau:0.5,1", geom), 0.1, bad, opt),
      DomainError);
  Grid tiny{2, 3.0, 3, 0.0};
  CHECK_THROWS_AS((void)GridGeometry{tiny}, DomainError);
}

TEST_CASE("upwind switch activates for advection-dominated drifts and stays stable") {
  DriftFieldFD strong = make_drift("ou", 2);
  strong.name = "strong_ou";
  auto base_eval = strong.eval;
  strong.eval = [base_eval](std::span<const double> x, std::span<double> b) {
    base_eval(x, b);
    for (auto& v : b) v *= 40.0;
  };
  auto base_jac = strong.jacobian;
  strong.jacobian = [base_jac](std::span<const double> x, std::span<double> j) {
    base_jac(x, j);
    for (auto& v : j) v *= 40.0;
  };
  strong.divergence = [](std::span<const double>) { return -80.0; };
  strong.delta_part = strong.eval;

  Grid grid{2, 3.0, 25, 0.0};  // h = 0.25, |b| h / 2 up to 15 > 2
  GridGeometry geom(grid);
  SolveOptions opt;
  opt.snapshot_times = {0.05};
  const auto sol =
      solve_cauchy(strong, make_initial_datum("plateau:0.5,1", geom), 0.05, grid, opt);
  CHECK(sol.upwind_used);
  // The Peclet band (1, 2] keeps central differences by design, so a mild
  // overshoot is tolerated here; monotonicity holds strictly below 1.
  double sup = 0.0;
  for (double v : sol.at_time(0.05).u) sup = std::max(sup, std::fabs(v));
  CHECK(sup <= 1.01 * sol.f_sup);
}

TEST_CASE("c_plus closed forms") {
  const auto basis12 = RiggedBasis::from_spec("list:1,2", 2);
  const auto basis11 = RiggedBasis::from_spec("list:1,1", 2);
  Grid grid{2, 4.0, 21, 0.0};
  CHECK(compute_c_plus(make_drift("ou", 2), grid, basis12) == doctest::Approx(-1.0));
  CHECK(compute_c_plus(make_drift("zero", 2), grid, basis12) == doctest::Approx(0.0));
  CHECK(compute_c_plus(make_drift("rotation", 2), grid, basis11) ==
        doctest::Approx(0.0).epsilon(1e-9));
  // Unequal weights expose the antisymmetric part: (mu2^2 - mu1^2)/(2 mu1 mu2).
  CHECK(compute_c_plus(make_drift("rotation", 2), grid, basis12) == doctest::Approx(0.75));
  CHECK(compute_c_plus(make_drift("spiral", 2), grid, basis12) == doctest::Approx(-0.25));
  Grid grid1{1, 4.0, 21, 0.0};
  CHECK(compute_c_plus(make_drift("ou", 1), grid1, basis11) == doctest::Approx(-1.0));
}

TEST_CASE("gradient sup norm in the plus weights") {
  Grid grid{2, 2.0, 41, 0.0};
  GridGeometry geom(grid);
  GridSolution sol;
  sol.grid = grid;
  sol.dt = 1e-3;
  Snapshot s;
  s.t = 0.0;
  s.dt = 1e-3;
  s.u.resize(geom.size());
  double x[2];
  for (std::size_t i = 0; i < geom.size(); ++i) {
    geom.point(i, std::span<double>(x, 2));
    s.u[i] = x[0];  // u = x_1
  }
  s.w.assign(2, std::vector<double>(geom.size()));
  geom.derivative(s.u, 0, s.w[0]);
  geom.derivative(s.u, 1, s.w[1]);
  sol.snapshots.push_back(std::move(s));
  const auto basis = RiggedBasis::from_spec("list:2,3", 2);
  CHECK(gradient_sup_norm_plus(sol, 0.0, basis) == doctest::Approx(2.0));

  // Constant u has zero gradient.
  GridSolution flat = sol;
  for (auto& v : flat.snapshots[0].u) v = 1.0;
  geom.derivative(flat.snapshots[0].u, 0, flat.snapshots[0].w[0]);
  geom.derivative(flat.snapshots[0].u, 1, flat.snapshots[0].w[1]);
  CHECK(gradient_sup_norm_plus(flat, 0.0, basis) == doctest::Approx(0.0));
}

TEST_CASE("heat flow contracts the plus gradient") {
  Grid grid{1, 6.0, 201, 0.0};
  GridGeometry geom(grid);
  SolveOptions opt;
  opt.snapshot_times = {0.0, 0.1, 0.2, 0.4};
  const auto sol =
      solve_cauchy(make_drift("zero", 1), make_initial_datum("gauss:0.8", geom), 0.4, grid, opt);
  const auto basis = RiggedBasis::power(1.0, 1);
  double prev = gradient_sup_norm_plus(sol, 0.0, basis);
  for (double t : {0.1, 0.2, 0.4}) {
    const double cur = gradient_sup_norm_plus(sol, t, basis);
    CHECK(cur <= prev + 1e-12);
    prev = cur;
  }
}

TEST_CASE("3-d smoke against the heat kernel") {
  Grid grid{3, 5.0, 41, 0.0};
  GridGeometry geom(grid);
  SolveOptions opt;
  opt.snapshot_times = {0.1};
  const auto sol =
      solve_cauchy(make_drift("zero", 3), make_initial_datum("gauss:0.6", geom), 0.1, grid, opt);
  const auto& snap = sol.at_time(0.1);
  double x[3], err = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < geom.size(); ++i) {
    geom.point(i, std::span<double>(x, 3));
    if (std::fabs(x[0]) > 2.0 || std::fabs(x[1]) > 2.0 || std::fabs(x[2]) > 2.0) continue;
    const double r = heat_gaussian_value(3, std::span<const double>(x, 3), snap.t, 0.6);
    ref = std::max(ref, std::fabs(r));
    err = std::max(err, std::fabs(snap.u[i] - r));
  }
  CHECK(err / ref < 0.05);
}

TEST_CASE("solver output is invariant under coordinate transposition") {
  Grid grid{2, 4.0, 61, 0.0};
  GridGeometry geom(grid);
  SolveOptions opt;
  opt.snapshot_times = {0.2};
  const auto sol =
      solve_cauchy(make_drift("ou", 2), make_initial_datum("plateau:1,2", geom), 0.2, grid, opt);
  const auto& u = sol.at_time(0.2).u;
  const int n = grid.points_per_axis;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j)
      CHECK(u[static_cast<std::size_t>(j) * n + i] ==
            doctest::Approx(u[static_cast<std::size_t>(i) * n + j]).epsilon(1e-12));
}

TEST_CASE("drift self-test: analytic Jacobians match finite differences") {
  for (const char* name : {"ou", "rotation", "spiral", "ou_sin:0.3"}) {
    const auto drift = make_drift(name, 2);
    const std::vector<double> x = {0.7, -1.3};
    CHECK(drift.jacobian_fd_defect(x, 1e-5) < 1e-8);
  }
}
