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

#ifndef DIRLAB_PRESETS_HPP
#define DIRLAB_PRESETS_HPP

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dirlab/apriori.hpp"
#include "dirlab/duhamel.hpp"
#include "dirlab/fdgrid.hpp"
#include "dirlab/measure.hpp"

namespace dirlab {

// Named presets addressable from configs: grid initial data, drifts with
// their alpha/delta splits, reference measures, the approximation ladder and
// the trial fields of the coercivity scan.

/// C-infinity transition: 1 for q <= 0, 0 for q >= 1.
double smooth_step_down(double q);

// Initial data on a grid:
//   "plateau:r0,r1"  radial plateau, 1 inside r0, smooth roll-off to 0 at r1
//   "gauss:s"        exp(-|x|^2 / (2 s^2))
//   "one"            identically 1 (unit-preservation runs)
std::vector<double> make_initial_datum(const std::string& name, const GridGeometry& geom);

// Drifts:
//   "zero", "ou" (-x), "rotation" ((x2,-x1), d = 2), "spiral" (-x + rotation,
//   d = 2), "plus_x" (+x), "ou_sin:kappa" (-x_i - kappa sin x_i)
// Each carries analytic Jacobian, divergence and its alpha/delta split.
DriftFieldFD make_drift(const std::string& name, int d);

// Reference measures:
//   "gauss_delta"     standard Gaussian, split alpha = 0,  delta = -x
//   "gauss_alpha"     standard Gaussian, split alpha = -x, delta = 0
//   "gauss_sin:kappa" product density exp(-s^2/2 + kappa cos s) per axis,
//                     split alpha_i = -kappa sin x_i, delta = -x
ReferenceMeasureFD make_measure(const std::string& name, int d);

/// Ladder over the gauss_sin measure: alpha^n = (1 - 3^{-n}) alpha and
/// delta^m = coordinate truncation of -x.
ApproximationLadder make_gauss_sin_ladder(double kappa, int d, int max_n, int max_m,
                                          double cutoff_radius);

/// Trial vector fields for the coercivity scan on the box [-R, R]^d.
std::vector<TrialVectorField> make_trial_fields(int d, double R);

// Mehler (Ornstein-Uhlenbeck) reference solution by factorized
// Gauss-Legendre quadrature against a tabulated datum. Independent of the
// finite-difference path.
class MehlerOracle {
 public:
  MehlerOracle(const std::function<double(std::span<const double>)>& f, int d,
               double support_radius, int quad_order);
  /// u(t, x) = E[ f(e^{-t} x + sqrt(1 - e^{-2t}) Z) ].
  double value(std::span<const double> x, double t) const;

 private:
  int d_;
  int order_;
  double radius_;
  std::vector<double> nodes_, weights_;  // per-axis rule on [-radius, radius]
  std::vector<double> f_table_;          // datum at the tensor nodes
};

/// Closed-form heat solution for the Gaussian datum exp(-|x|^2/(2 s^2)).
double heat_gaussian_value(int d, std::span<const double> x, double t, double s);

}  // namespace dirlab

#endif  // DIRLAB_PRESETS_HPP
