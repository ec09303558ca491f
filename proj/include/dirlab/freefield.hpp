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

#ifndef DIRLAB_FREEFIELD_HPP
#define DIRLAB_FREEFIELD_HPP

#include <cstdint>
#include <vector>

namespace dirlab {

/// Open rectangle (0,L1) x (0,L2).
struct RectangleDomain {
  double L1 = 1.0;
  double L2 = 1.0;

  RectangleDomain() = default;
  RectangleDomain(double l1, double l2);
  double area() const { return L1 * L2; }
  bool contains_closure(double x, double y) const {
    return x >= 0.0 && x <= L1 && y >= 0.0 && y <= L2;
  }
};

// One Neumann eigenmode of (-Laplace + 1) on the rectangle:
//   e_{m,n}(x,y) = norm_const cos(pi m x / L1) cos(pi n y / L2),
//   eigenvalue = 1 + pi^2 m^2 / L1^2 + pi^2 n^2 / L2^2.
struct NeumannMode {
  int m = 0;
  int n = 0;
  double eigenvalue = 1.0;
  double norm_const = 1.0;

  double eval(const RectangleDomain& dom, double x, double y) const;
};

/// The K modes of smallest eigenvalue, eigenvalues non-decreasing, ties broken
/// lexicographically in (m, n).
std::vector<NeumannMode> build_modes(const RectangleDomain& dom, std::size_t K);

/// Tensor-product Gauss-Legendre quadrature over the rectangle.
struct Quadrature {
  std::vector<double> x, y, w;  // flattened nodes and weights

  static Quadrature tensor_gauss_legendre(const RectangleDomain& dom, int per_axis);
  std::size_t size() const { return w.size(); }
};

/// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre_rule(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Mode list plus cached per-quadrature-point tables, shared by the field
// sampler and the Wick integrals. Immutable after construction.
class ModeSet {
 public:
  ModeSet(const RectangleDomain& dom, std::size_t K, int quad_per_axis = 0);

  const RectangleDomain& domain() const { return domain_; }
  std::size_t K() const { return modes_.size(); }
  const std::vector<NeumannMode>& modes() const { return modes_; }
  double lambda(std::size_t j) const { return modes_[j].eigenvalue; }
  const Quadrature& quad() const { return quad_; }
  /// Values of mode j at the quadrature points.
  const std::vector<double>& mode_values(std::size_t j) const { return mode_at_quad_[j]; }
  /// c_K at the quadrature points.
  const std::vector<double>& covariance_values() const { return cov_at_quad_; }

  /// Gram matrix deviation from identity under the cached quadrature.
  double orthonormality_defect() const;

 private:
  RectangleDomain domain_;
  std::vector<NeumannMode> modes_;
  Quadrature quad_;
  std::vector<std::vector<double>> mode_at_quad_;
  std::vector<double> cov_at_quad_;
};

/// Coefficients of a truncated field in the eigenbasis (L^2 pairing).
struct FieldSample {
  std::vector<double> coeffs;

  std::size_t K() const { return coeffs.size(); }
};

/// || l ||_{H_alpha} = sqrt(sum lambda_n^alpha l_n^2) for coefficient data l.
double h_alpha_norm(const std::vector<double>& l, const ModeSet& modes, double alpha);

// Free-field sample: coefficients independent centered Gaussians with
// variance lambda_j^{-1}, drawn from the counter stream (seed, j, index) so a
// sample is a pure function of (seed, index) and stable under K-extension.
FieldSample sample_free_field(const ModeSet& modes, std::uint64_t seed,
                              std::uint64_t index);

/// Pointwise field value sum_j z_j e_j(x). x must lie in the closed rectangle.
double field_point_value(const FieldSample& sample, const ModeSet& modes, double x,
                         double y);

/// Truncated local variance c_K(x) = sum_j lambda_j^{-1} e_j(x)^2.
double local_variance(const ModeSet& modes, double x, double y);

/// Rigging-index constraint alpha > max(0, 1 - delta/2).
bool rigging_admissible(double alpha_idx, double delta_idx);

}  // namespace dirlab

#endif  // DIRLAB_FREEFIELD_HPP
