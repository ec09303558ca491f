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

#include "dirlab/dirichlet.hpp"
#include "dirlab/errors.hpp"
#include "dirlab/presets.hpp"

using namespace dirlab;

namespace {

struct Fixture {
  ModeSet modes{RectangleDomain(1.0, 1.0), 4};
  WickSpec gauss{std::vector<double>{0.0}, 4, 1.0, 1.0};
  WeightedSampleSet set = sample_nu(gauss, modes, 20000, 3);
};

}  // namespace

TEST_CASE("cylinder presets differentiate correctly") {
  for (const char* name : {"one", "coord:2", "coord_sq:1", "coord_cube:3", "prod:1,3",
                           "bump:2", "gauss_bump"}) {
    const auto f = make_cylinder(name, 4);
    const std::vector<double> x = {0.3, -1.2, 0.7, 0.1};
    CHECK(f.gradient_fd_defect(x, 1e-5) < 1e-8);
  }
  CHECK_THROWS_AS(make_cylinder("coord:5", 4), ConfigError);
  CHECK_THROWS_AS(make_cylinder("mystery", 4), ConfigError);

  // Declared bounds hold on sampled points for the bounded presets.
  const auto bump = make_cylinder("gauss_bump", 3);
  for (int i = 0; i < 100; ++i) {
    const std::vector<double> x = {std::sin(i * 0.37) * 3.0, std::cos(i * 0.53) * 3.0,
                                   std::sin(i * 0.71)};
    CHECK(std::fabs(bump.value(x)) <= *bump.bound_value + 1e-12);
    const auto g = bump.grad(x);
    double norm = 0.0;
    for (double gi : g) norm += gi * gi;
    CHECK(std::sqrt(norm) <= *bump.bound_gradient + 1e-12);
  }
}

TEST_CASE("dirichlet energy") {
  Fixture fx;
  const auto f1 = make_cylinder("coord:1", 4);
  const auto c = make_cylinder("one", 4);
  // Constant g has zero gradient: the estimate is exactly zero.
  CHECK(dirichlet_energy(f1, c, fx.gauss, fx.modes, fx.set).value == 0.0);
  // E(z1, z1) = E[|grad|^2] = 1 with lambda_1 = 1.
  const auto e11 = dirichlet_energy(f1, f1, fx.gauss, fx.modes, fx.set);
  CHECK(e11.value == doctest::Approx(1.0));
  CHECK(e11.stderr_ == doctest::Approx(0.0));  // constant gradient
  CHECK(e11.value >= 0.0);

  // Bilinearity on the shared sample set (exact up to roundoff).
  const auto g1 = make_cylinder("coord:2", 4);
  const auto g2 = make_cylinder("coord_sq:1", 4);
  CylinderFunction g12;
  g12.name = "g1+g2";
  g12.base_dim = 4;
  g12.value = [&](std::span<const double> x) { return g1.value(x) + g2.value(x); };
  g12.gradient = [&](std::span<const double> x, std::span<double> out) {
    std::vector<double> tmp(4);
    g1.gradient(x, out);
    g2.gradient(x, tmp);
    for (std::size_t i = 0; i < 4; ++i) out[i] += tmp[i];
  };
  const double lhs = dirichlet_energy(f1, g12, fx.gauss, fx.modes, fx.set).value;
  const double rhs = dirichlet_energy(f1, g1, fx.gauss, fx.modes, fx.set).value +
                     dirichlet_energy(f1, g2, fx.gauss, fx.modes, fx.set).value;
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));

  // E(f, f) >= 0 pointwise, not just statistically.
  const auto mixed = make_cylinder("prod:1,2", 4);
  CHECK(dirichlet_energy(mixed, mixed, fx.gauss, fx.modes, fx.set).value >= 0.0);
}

TEST_CASE("generator on cylinder functions") {
  Fixture fx;
  const auto beta = beta_evaluator(fx.gauss, fx.modes);
  FieldSample z;
  z.coeffs = {0.8, -0.4, 0.2, 0.0};

  CHECK(apply_A(make_cylinder("one", 4), beta, fx.gauss, fx.modes, z) == 0.0);

  // With (alpha, delta) = (1, 1) and lambda_1 = 1 the abstract coordinate is
  // z_1 and beta_1 = -x_1, so A z_1 = x_1 and A z_1^2 = -2 + 2 x_1^2.
  const double x1 = fx.gauss.rigging.abstract_coordinate(fx.modes.lambda(0), z.coeffs[0]);
  CHECK(apply_A(make_cylinder("coord:1", 4), beta, fx.gauss, fx.modes, z) ==
        doctest::Approx(x1));
  CHECK(apply_A(make_cylinder("coord_sq:1", 4), beta, fx.gauss, fx.modes, z) ==
        doctest::Approx(-2.0 + 2.0 * x1 * x1));

  // <A f, 1> ~ 0 (invariance of nu) for a preset list.
  const auto w = fx.set.normalized_weights();
  for (const char* name : {"coord:1", "coord_sq:2", "bump:1"}) {
    const auto f = make_cylinder(name, 4);
    std::vector<double> vals(fx.set.size());
    for (std::size_t i = 0; i < fx.set.size(); ++i)
      vals[i] = apply_A(f, beta, fx.gauss, fx.modes, fx.set.samples[i]);
    const auto est = weighted_mean(vals, w);
    INFO("f=", name);
    CHECK(std::fabs(est.value) <= 4.0 * est.stderr_);
  }
}

TEST_CASE("symmetry of the form") {
  Fixture fx;
  const auto f1 = make_cylinder("coord:1", 4);
  const auto f2 = make_cylinder("coord:2", 4);
  auto rep = symmetry_check(f1, f2, fx.gauss, fx.modes, fx.set);
  CHECK(rep.pass);
  CHECK(std::fabs(rep.energy) <= 4.0 * std::max(rep.energy_stderr, 1e-12));

  rep = symmetry_check(f1, f1, fx.gauss, fx.modes, fx.set);
  CHECK(rep.pass);
  CHECK(rep.energy == doctest::Approx(1.0));

  const auto c = make_cylinder("one", 4);
  rep = symmetry_check(c, c, fx.gauss, fx.modes, fx.set);
  CHECK(rep.af_g == 0.0);
  CHECK(rep.energy == 0.0);
  CHECK(rep.pass);

  // The quartic interacting measure: the duality bookkeeping tripwire.
  WickSpec quartic({0, 0, 0, 0, 0.1}, 4, 1.0, 1.0);
  const auto qset = sample_nu(quartic, fx.modes, 20000, 5);
  const auto qrep = symmetry_check(make_cylinder("coord:1", 4), make_cylinder("coord_sq:1", 4),
                                   quartic, fx.modes, qset, 4.0, 0.2);
  INFO("resid_af=", qrep.resid_af, " se=", qrep.resid_af_stderr, " resid_ag=", qrep.resid_ag);
  CHECK_FALSE(qrep.inconclusive);
  CHECK(qrep.pass);
}

TEST_CASE("markov property checks on the matching-drift solve") {
  Grid grid{2, 5.0, 81, 0.0};
  GridGeometry geom(grid);
  const auto drift = make_drift("ou", 2);
  SolveOptions opt;
  opt.snapshot_times = {0.0, 0.25, 0.5};

  const auto pos = solve_cauchy(drift, make_initial_datum("plateau:1,2", geom), 0.5, grid, opt);
  const auto rep = markov_checks(pos, 1e-6);
  CHECK(rep.nonneg_data);
  CHECK(rep.positivity_pass);
  CHECK(rep.contraction_pass);
  CHECK(rep.sup_ratio <= 1.0 + 1e-12);

  SolveOptions opt_unit = opt;
  opt_unit.certify_support = false;
  const auto unit = solve_cauchy(drift, make_initial_datum("one", geom), 0.5, grid, opt_unit);
  const auto urep = markov_checks(unit, 1e-6);
  CHECK(urep.unit_data);
  CHECK(urep.conservation_pass);
  CHECK(urep.unit_defect <= 1e-12);
}

TEST_CASE("apply_A agrees with the grid solver's generator limit") {
  // One-mode interacting-measure preset with lambda_1 = 1: the abstract coordinate is
  // z_1, beta_1 = -z_1, and A f = -(f'' - x f'). The d = 1 grid solve with the
  // OU drift must reproduce -(A f) as its first increment.
  ModeSet one(RectangleDomain(1.0, 1.0), 1);
  WickSpec spec({0.0}, 1, 1.0, 1.0);
  const auto beta = beta_evaluator(spec, one);
  const auto f = make_cylinder("bump:1", 1);

  Grid grid{1, 6.0, 801, 0.0};
  GridGeometry geom(grid);
  std::vector<double> f0(geom.size());
  double x[1];
  for (std::size_t i = 0; i < geom.size(); ++i) {
    geom.point(i, std::span<double>(x, 1));
    f0[i] = f.value(std::span<const double>(x, 1));
  }
  SolveOptions opt;
  opt.snapshot_times = {0.0};
  opt.certify_support = false;  // Gaussian tails of the datum
  const auto sol = solve_cauchy(make_drift("ou", 1), f0, 1e-3, grid, opt);
  const auto& snap = sol.at_time(0.0);

  double defect = 0.0;
  for (std::size_t i = 0; i < geom.size(); ++i) {
    geom.point(i, std::span<double>(x, 1));
    if (std::fabs(x[0]) > 2.0) continue;
    FieldSample z;
    z.coeffs = {x[0]};
    const double generator = -apply_A(f, beta, spec, one, z);
    defect = std::max(defect, std::fabs(snap.dudt[i] - generator));
  }
  CHECK(defect < 5e-4);  // O(dt + h^2)
}
