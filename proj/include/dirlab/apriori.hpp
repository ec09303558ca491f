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

#ifndef DIRLAB_APRIORI_HPP
#define DIRLAB_APRIORI_HPP

#include <string>
#include <utility>
#include <vector>

#include "dirlab/cylinder.hpp"
#include "dirlab/fdgrid.hpp"
#include "dirlab/measure.hpp"

namespace dirlab {

/// One validated estimate: LHS <= RHS with margin = RHS - LHS, plus every
/// intermediate norm that enters the bound. pass <=> margin >= -budget.
struct EstimateReport {
  std::string name;
  double time = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double budget = 0.0;
  bool pass = false;
  std::vector<std::pair<std::string, double>> terms;

  void finalize(double budget_value) {
    budget = budget_value;
    margin = rhs - lhs;
    pass = margin >= -budget;
  }
};

// Shared precomputation for the estimate validators: the solution, the
// reference measure on the same grid, drift component tables and the
// initial-datum norms every right-hand side uses.
class AprioriContext {
 public:
  AprioriContext(const GridSolution& sol, const DriftFieldFD& drift,
                 const MeasureOnGrid& nu, const RiggedBasis& basis);

  const GridSolution& solution() const { return *sol_; }
  const GridGeometry& geometry() const { return geom_; }
  const MeasureOnGrid& nu() const { return *nu_; }
  const RiggedBasis& basis() const { return basis_; }
  const DriftFieldFD& drift() const { return *drift_; }

  const std::vector<double>& b_component(int a) const { return b_[a]; }
  const std::vector<double>& alpha1_component(int a) const { return alpha1_[a]; }
  const std::vector<double>& delta1_component(int a) const { return delta1_[a]; }

  double f_sup() const { return f_sup_; }
  double f_l2() const { return f_l2_; }
  double gradf_sup_plus() const { return gradf_sup_plus_; }
  double gradf_l2_0_sq() const { return gradf_l2_0_sq_; }
  double c_plus() const { return c_plus_; }

  // Measure-vs-drift mismatch norms under nu.
  double alpha_diff_l2_sq() const { return alpha_diff_l2_sq_; }   // || |a-a1|_0 ||_2^2
  double delta_diff_minus_l1() const { return delta_diff_minus_l1_; }
  double delta_diff_minus_l2_sq() const { return delta_diff_minus_l2_sq_; }
  double alpha_l4_4() const { return alpha_l4_4_; }    // || |alpha|_0 ||_4^4
  double alpha1_l4_4() const { return alpha1_l4_4_; }

  /// sum_a w_a(node) v_a(node) as a field.
  std::vector<double> pair_with(const std::vector<std::vector<double>>& v,
                                const std::vector<std::vector<double>>& w) const;
  /// |grad u|_0^2 field of a snapshot.
  std::vector<double> grad_norm0_sq(const Snapshot& s) const;
  /// |grad u|_+^2 field.
  std::vector<double> grad_normplus_sq(const Snapshot& s) const;
  /// gradient of a raw u field (central, one-sided at walls).
  std::vector<std::vector<double>> gradient_of(const std::vector<double>& u) const;
  /// d/dt of || |grad u|_0 ||_{L2(nu)}^2 by the snapshot triple.
  double ddt_grad0_l2sq(const Snapshot& s) const;
  /// Interior sup of |grad u|_+ at a snapshot.
  double sup_grad_plus(const Snapshot& s) const;

 private:
  const GridSolution* sol_;
  const DriftFieldFD* drift_;
  const MeasureOnGrid* nu_;
  GridGeometry geom_;
  RiggedBasis basis_;
  std::vector<std::vector<double>> b_, alpha1_, delta1_;
  double f_sup_ = 0.0, f_l2_ = 0.0, gradf_sup_plus_ = 0.0, gradf_l2_0_sq_ = 0.0;
  double c_plus_ = 0.0;
  double alpha_diff_l2_sq_ = 0.0, delta_diff_minus_l1_ = 0.0, delta_diff_minus_l2_sq_ = 0.0;
  double alpha_l4_4_ = 0.0, alpha1_l4_4_ = 0.0;
};

/// Gradient bound: sup |grad u(t)|_+ <= e^{c+ t} sup |grad f|_+, per snapshot.
std::vector<EstimateReport> check_gradient_bound(const AprioriContext& ctx,
                                        const std::vector<double>& times);

/// Energy estimate with the alpha/delta mismatch terms, per snapshot.
std::vector<EstimateReport> check_energy_estimate(const AprioriContext& ctx,
                                        const std::vector<double>& times);

/// ||du/dt||_2^2 + d/dt || |w|_0 ||_2^2 <= || (beta - b, w)_0 ||_2^2.
std::vector<EstimateReport> check_lemma1(const AprioriContext& ctx,
                                         const std::vector<double>& times);

/// Fourth-moment bound on |w|_0 through ||f||_inf and second derivatives.
std::vector<EstimateReport> check_lemma3(const AprioriContext& ctx,
                                         const std::vector<double>& times);

/// Equality version of the differentiated-energy identity (matching-drift
/// form); lhs/rhs are the two sides, margin their signed imbalance.
std::vector<EstimateReport> check_differentiated_identity(const AprioriContext& ctx,
                                       const std::vector<double>& times);

/// Lebesgue-measure identity behind the gradient bound at p = 4; reports the
/// absolute imbalance |LHS - RHS| against the term scale.
std::vector<EstimateReport> check_p4_balance_identity(const AprioriContext& ctx,
                                             const std::vector<double>& times);

struct L4BoundReport {
  double time = 0.0;
  double lhs = 0.0;      // int_0^t || |grad u|_0 ||_4^4 ds
  double bracket = 0.0;  // the braced right-hand side without C(eps0)
  double c_empirical = 0.0;  // lhs / bracket
  double eps0 = 0.0;
  double c_eps0 = 0.0;
  std::vector<std::pair<std::string, double>> terms;
};

L4BoundReport check_l4_bound(const AprioriContext& ctx, double time, double eps0,
                        double c_eps0);

/// A trial vector field for the coercivity scan: d named scalar components.
struct TrialVectorField {
  std::string name;
  std::vector<CylinderFunction> components;
};

struct Eq34Report {
  std::vector<double> eps_grid;
  std::vector<double> c_min;        // smallest admissible c per eps over the family
  std::vector<std::string> binding_field;  // which trial field binds
  double eps0_estimate = 0.0;
  double c_estimate = 0.0;
  bool necessary_condition_only = true;  // finite trial family
};

Eq34Report check_eq34(const DriftFieldFD& delta_drift, const MeasureOnGrid& nu,
                      const std::vector<TrialVectorField>& trials,
                      const std::vector<double>& eps_grid);

/// Budget from a coarse/fine pair: |fine - coarse| * factor on the margin;
/// recomputes pass on the fine report.
void apply_richardson(EstimateReport& fine, const EstimateReport& coarse, double factor);

}  // namespace dirlab

#endif  // DIRLAB_APRIORI_HPP
