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

#ifndef DIRLAB_DIRICHLET_HPP
#define DIRLAB_DIRICHLET_HPP

#include <functional>
#include <string>

#include "dirlab/cylinder.hpp"
#include "dirlab/fdgrid.hpp"
#include "dirlab/pphi2.hpp"

namespace dirlab {

// The Dirichlet form, the generator on cylinder functions, and the Markov
// property checks that tie the abstract objects to the finite-dimensional
// engines. Cylinder functions act on the abstract coordinates
// x_j = lambda_j^{alpha/2} z_j of a field sample.

/// Per-sample drift coefficient beta_j in abstract coordinates.
using BetaEvaluator = std::function<double(const FieldSample&, std::size_t)>;

/// beta evaluator of the interacting measure (Gaussian part plus Wick part).
BetaEvaluator beta_evaluator(const WickSpec& spec, const ModeSet& modes);

/// Weighted MC estimate of E(f, g) = E_nu[(grad f, grad g)_0], evaluated on
/// one shared sample set so algebraic identities hold exactly.
WeightedEstimate dirichlet_energy(const CylinderFunction& f, const CylinderFunction& g,
                                  const WickSpec& spec, const ModeSet& modes,
                                  const WeightedSampleSet& set);

/// Pointwise (A f)(z) = -(trace Hess f + sum_j beta_j d_j f).
double apply_A(const CylinderFunction& f, const BetaEvaluator& beta,
               const WickSpec& spec, const ModeSet& modes, const FieldSample& z);

struct SymmetryReport {
  std::string f_name, g_name;
  double af_g = 0.0, af_g_stderr = 0.0;
  double f_ag = 0.0, f_ag_stderr = 0.0;
  double energy = 0.0, energy_stderr = 0.0;
  double resid_af = 0.0, resid_af_stderr = 0.0;  // <Af,g> - E(f,g)
  double resid_ag = 0.0, resid_ag_stderr = 0.0;  // <f,Ag> - E(f,g)
  double sigma_level = 4.0;
  double ess = 0.0;
  bool inconclusive = false;
  bool pass = false;
};

/// MC check that <Af, g> = <f, Ag> = E(f, g) within the sigma level.
SymmetryReport symmetry_check(const CylinderFunction& f, const CylinderFunction& g,
                              const WickSpec& spec, const ModeSet& modes,
                              const WeightedSampleSet& set, double sigma_level = 4.0,
                              double ess_floor_fraction = 0.0);

struct MarkovReport {
  double tol = 1e-6;
  bool nonneg_data = false;
  double min_u = 0.0;
  bool positivity_pass = false;
  double sup_ratio = 0.0;  // max_t ||u(t)||_inf / ||f||_inf
  bool contraction_pass = false;
  bool unit_data = false;
  double unit_defect = 0.0;  // max_t max_interior |u - 1|
  bool conservation_pass = false;
};

// Positivity, sup contraction and unit preservation on a grid solve for the
// matching drift. Positivity applies when the datum is nonnegative;
// conservation when the datum is identically one (interior nodes).
MarkovReport markov_checks(const GridSolution& sol, double tol = 1e-6);

}  // namespace dirlab

#endif  // DIRLAB_DIRICHLET_HPP
