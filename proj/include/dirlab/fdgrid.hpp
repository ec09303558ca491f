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

#ifndef DIRLAB_FDGRID_HPP
#define DIRLAB_FDGRID_HPP

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dirlab/rigged.hpp"

namespace dirlab {

/// Uniform grid on the box [-R, R]^d, d <= 3.
struct Grid {
  int d = 1;
  double R = 1.0;
  int points_per_axis = 3;
  double dt = 0.0;  // 0 = derive from the stability bound

  double h() const { return 2.0 * R / (points_per_axis - 1); }
  std::size_t total() const;
  void validate() const;
};

// Index arithmetic and quadrature weights for a Grid. The node layout is
// row-major with the first axis fastest; Lebesgue integration uses trapezoid
// weights (h^d, halved on each boundary face the node touches).
class GridGeometry {
 public:
  explicit GridGeometry(const Grid& grid);

  const Grid& grid() const { return grid_; }
  int d() const { return grid_.d; }
  int n() const { return grid_.points_per_axis; }
  double h() const { return grid_.h(); }
  std::size_t size() const { return total_; }

  double coord(int axis_index) const { return -grid_.R + grid_.h() * axis_index; }
  std::array<int, 3> unpack(std::size_t node) const;
  std::size_t pack(const std::array<int, 3>& idx) const;
  void point(std::size_t node, std::span<double> out) const;
  std::size_t stride(int axis) const { return strides_[axis]; }
  bool on_boundary(std::size_t node) const;
  /// Distance (in cells) from the node to the nearest boundary face.
  int boundary_distance(const std::array<int, 3>& idx) const;

  const std::vector<double>& lebesgue_weights() const { return lebesgue_w_; }

  // Central-difference partial derivative along `axis`, one-sided at the two
  // boundary faces of that axis.
  void derivative(std::span<const double> u, int axis, std::span<double> out) const;
  // Second partial derivative d^2 u / dx_a dx_b (mirror-free interior
  // stencils, one-sided fallback in the boundary layer).
  void second_derivative(std::span<const double> u, int a, int b,
                         std::span<double> out) const;

 private:
  Grid grid_;
  std::size_t total_ = 0;
  std::array<std::size_t, 3> strides_ = {1, 1, 1};
  std::vector<double> lebesgue_w_;
};

/// Drift on the grid box: value, Jacobian and divergence evaluators, plus the
/// alpha/delta decomposition handles used by the estimate validators.
struct DriftFieldFD {
  std::string name;
  int d = 1;
  std::function<void(std::span<const double>, std::span<double>)> eval;
  /// jac[i*d + j] = d b_j / d x_i.
  std::function<void(std::span<const double>, std::span<double>)> jacobian;
  std::function<double(std::span<const double>)> divergence;
  std::function<void(std::span<const double>, std::span<double>)> alpha_part;
  std::function<void(std::span<const double>, std::span<double>)> delta_part;

  /// Max |analytic Jacobian - central difference of eval| at x.
  double jacobian_fd_defect(std::span<const double> x, double h) const;
};

struct Snapshot {
  double t = 0.0;
  double dt = 0.0;
  std::vector<double> u;
  std::vector<double> u_prev;  // u at t - dt (empty at t = 0)
  std::vector<double> u_next;  // u at t + dt
  std::vector<std::vector<double>> w;  // gradient components at t
  std::vector<double> dudt;            // centered (u_next - u_prev) / 2dt

  /// d/dt of a functional F(u): centered difference of F over the triple.
  double ddt(const std::function<double(std::span<const double>)>& F) const;
};

struct GridSolution {
  Grid grid;
  std::vector<Snapshot> snapshots;
  double f_sup = 0.0;
  double boundary_max = 0.0;        // max |u| seen on the boundary over the run
  bool boundary_certified = false;  // boundary_max <= boundary_tol * f_sup
  double boundary_tol = 1e-6;
  bool upwind_used = false;
  double dt = 0.0;
  std::size_t steps = 0;

  const Snapshot& at_time(double t) const;
};

struct SolveOptions {
  std::vector<double> snapshot_times;
  bool certify_support = true;
  double support_tol = 1e-9;
  double boundary_tol = 1e-6;
  double safety = 0.4;  // fraction of the explicit stability limit
};

/// Explicit Euler / central differences solve of du/dt = lap u + (b, grad u)
/// with homogeneous Neumann walls. Throws NumericalAbort on blow-up
/// (max |u| > 10 ||f||_inf) and DomainError on setup violations.
GridSolution solve_cauchy(const DriftFieldFD& b, const std::vector<double>& f, double T,
                          const Grid& grid, const SolveOptions& options);

/// Smallest admissible one-sided bound of the drift Jacobian in the
/// (.,.)_+ form: max over nodes of the top eigenvalue of
/// sym(W Jac W^{-1}), W = diag of the first d basis weights.
double compute_c_plus(const DriftFieldFD& b, const Grid& grid, const RiggedBasis& basis);

/// Max over interior nodes of |grad u(t)|_+ (boundary layer excluded).
double gradient_sup_norm_plus(const GridSolution& sol, double t, const RiggedBasis& basis);

/// Top eigenvalue of a symmetric d x d matrix, d <= 3.
double sym_eigen_max(std::span<const double> m, int d);

}  // namespace dirlab

#endif  // DIRLAB_FDGRID_HPP
