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

#ifndef DIRLAB_PPHI2_HPP
#define DIRLAB_PPHI2_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "dirlab/cylinder.hpp"
#include "dirlab/freefield.hpp"
#include "dirlab/rigged.hpp"

namespace dirlab {

// Exponent bookkeeping for the rigging H_{delta+2alpha} c H_alpha c H_{-delta}
// over the Neumann eigenbasis. Field samples store plain L^2 coefficients
// z_j = <z, e_j>; everything else (abstract coordinates w.r.t. the H_alpha
// orthonormal basis lambda_j^{-alpha/2} e_j, drift components, the norms of
// the three spaces) is a lambda-power times those, and every such power lives
// here so it can be unit-tested in one place.
struct RiggingBookkeeping {
  double alpha_idx = 1.0;
  double delta_idx = 1.0;

  /// Dual pairing of z in H_{-delta} against e_j in H_delta: the L^2 coefficient.
  static double pairing(const FieldSample& z, std::size_t j) { return z.coeffs[j]; }

  /// Coordinate of z w.r.t. the H_alpha-orthonormal basis vector lambda^{-a/2} e_j.
  double abstract_coordinate(double lambda, double zj) const;

  /// Linear drift component, as a coefficient in the H_{-delta}-orthonormal
  /// basis lambda^{d/2} e_j: -lambda^{1 - alpha - delta/2} z_j.
  double delta_coeff_minus(double lambda, double zj) const;

  /// The same component as an L^2 coefficient: -lambda^{1 - alpha} z_j.
  double delta_coeff_l2(double lambda, double zj) const;

  /// Wick drift component as an L^2 coefficient: -lambda^{-alpha} s, where
  /// s = sum_n n a_n :z^{n-1}:(e_j).
  double alpha_coeff_l2(double lambda, double s) const;

  /// Logarithmic-derivative coefficient entering the integration-by-parts
  /// identity: -lambda^{1-alpha/2} z_j - lambda^{-alpha/2} s.
  double beta_abstract(double lambda, double zj, double s) const;

  /// Diagonal entry of the Jacobian of the linear drift in abstract
  /// coordinates: -lambda^{1-alpha}.
  double delta_jacobian_abstract_diag(double lambda) const;

  // Norm weights on L^2 coefficients for |.|_0, |.|_-, |.|_+.
  double weight_norm0_sq(double lambda) const;
  double weight_norm_minus_sq(double lambda) const;
  double weight_norm_plus_sq(double lambda) const;
};

// Interaction data: V(z) = sum_n a_n :z^n:(1_Lambda). For the sampled measure
// nu = phi^2 mu with phi = exp(-V/2) to have finite moments the leading
// coefficient must satisfy a_{2N} > 0 (enforced by sample_nu, not by the
// constructor, so that pure evaluation of V with arbitrary coefficients stays
// available to the tests).
struct WickSpec {
  std::vector<double> a;  // a_0 .. a_{2N}
  std::size_t K = 1;      // spectral truncation
  RiggingBookkeeping rigging;

  WickSpec() = default;
  WickSpec(std::vector<double> coeffs, std::size_t truncation, double alpha_idx,
           double delta_idx);

  int degree() const { return static_cast<int>(a.size()) - 1; }
  /// True when exp(-V) is mu-integrable at every truncation (a_{2N} > 0).
  bool sampling_integrable() const { return !a.empty() && a.back() > 0.0; }
  /// Couplings beyond the perturbative preset range are allowed but flagged.
  bool large_coupling() const {
    for (double c : a)
      if (c > 0.5 || c < -0.5) return true;
    return false;
  }
};

/// Samples with self-normalized log-weights log phi^2 = -V.
struct WeightedSampleSet {
  std::vector<FieldSample> samples;
  std::vector<double> log_weights;
  std::uint64_t seed = 0;

  std::size_t size() const { return samples.size(); }
  /// Normalized weights (sum 1), computed with a max-shift in log space.
  std::vector<double> normalized_weights() const;
  /// Effective sample size (sum w)^2 / sum w^2.
  double ess() const;
};

/// Weighted mean with linearized standard error: mean of g under the
/// self-normalized weights.
struct WeightedEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
};
WeightedEstimate weighted_mean(const std::vector<double>& g,
                               const std::vector<double>& norm_weights);

// Per-sample evaluator for smeared Wick powers. Holds the field values at the
// quadrature nodes of a ModeSet; wick(n) returns :z^n:(x) at those nodes.
class WickEvaluator {
 public:
  explicit WickEvaluator(const ModeSet& modes);
  void load(const FieldSample& sample);
  const std::vector<double>& wick(int n);

  /// integral of :z^n:(x) h(x) dx with h given at the quadrature nodes.
  double integral(int n, const std::vector<double>& h_at_quad);
  /// integral of :z^n:(x) dx (h = indicator of the rectangle).
  double integral_indicator(int n);

 private:
  const ModeSet* modes_;
  std::vector<double> field_vals_;
  std::vector<double> t_scaled_;
  std::vector<double> hermite_vals_;
  std::vector<double> wick_vals_;
  std::vector<double> half_powers_;  // c^{1/2} at nodes
  int loaded_n_ = -1;
};

double wick_integral(const FieldSample& sample, const ModeSet& modes,
                     const std::vector<double>& h_at_quad, int n);
double interaction(const FieldSample& sample, const WickSpec& spec, const ModeSet& modes);
double density_phi(const FieldSample& sample, const WickSpec& spec, const ModeSet& modes);
double log_phi_squared(const FieldSample& sample, const WickSpec& spec,
                       const ModeSet& modes);

/// Linear drift part, coefficients in the H_{-delta}-orthonormal basis.
CoordinateVector drift_delta(const FieldSample& sample, const WickSpec& spec,
                             const ModeSet& modes);
/// Wick drift part, L^2 coefficients.
CoordinateVector drift_alpha(const FieldSample& sample, const WickSpec& spec,
                             const ModeSet& modes);
/// |alpha(z)|_0 (H_alpha norm of the Wick drift).
double drift_alpha_norm0(const FieldSample& sample, const WickSpec& spec,
                         const ModeSet& modes);
/// |delta(z)|_- (H_{-delta} norm of the linear drift).
double drift_delta_norm_minus(const FieldSample& sample, const WickSpec& spec,
                              const ModeSet& modes);
/// beta_j in abstract coordinates, the coefficient of the IBP identity.
double beta_abstract(const FieldSample& sample, const WickSpec& spec,
                     const ModeSet& modes, std::size_t j);

/// Importance samples from mu with weights phi^2. Throws DomainError when the
/// spec orientation is not integrable.
WeightedSampleSet sample_nu(const WickSpec& spec, const ModeSet& modes,
                            std::size_t count, std::uint64_t seed);

struct IbpReport {
  std::size_t direction = 0;  // 1-based j
  std::string f_name;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double residual_stderr = 0.0;
  double sigma_level = 4.0;
  double ess = 0.0;
  double ess_floor = 0.0;
  bool inconclusive = false;
  bool pass = false;
};

// Monte-Carlo check of the integration-by-parts identity
//   E_nu[ d f / d x_j ] = -E_nu[ beta_j f ]
// with f a cylinder function of the abstract coordinates. Both sides use the
// same samples, so the residual is a single weighted mean with one stderr.
IbpReport check_ibp(const WickSpec& spec, const ModeSet& modes, const CylinderFunction& f,
                    std::size_t direction_j, const WeightedSampleSet& set,
                    double sigma_level = 4.0, double ess_floor_fraction = 0.0);

struct Theorem1Report {
  // (iii): closed-form diagonal Jacobian bound in abstract coordinates.
  double jacobian_form_sup = 0.0;  // sup_j of the diagonal entries
  bool c_plus_zero_admissible = false;
  // (ii): || |delta - delta^m|_- ||_{L^2(nu)} over the m-schedule.
  std::vector<std::size_t> m_schedule;
  std::vector<double> delta_gap_l2;
  std::vector<double> delta_gap_stderr;
  bool delta_gap_strictly_decreasing = false;
  // (iv) and the L^p integrability figures.
  double eps0 = 1.0;
  double c_eps0 = 0.0;
  double alpha_l4 = 0.0;  // E_nu[|alpha|_0^4]^{1/4}
  double alpha_l4_stderr = 0.0;
  double delta_l2 = 0.0;  // E_nu[|delta|_-^2]^{1/2}
  double delta_l2_stderr = 0.0;
  double ess = 0.0;
  bool pass = false;
};

Theorem1Report check_theorem1_conditions(const WickSpec& spec, const ModeSet& modes,
                                         const std::vector<std::size_t>& m_schedule,
                                         std::size_t sample_count, std::uint64_t seed);

}  // namespace dirlab

#endif  // DIRLAB_PPHI2_HPP
