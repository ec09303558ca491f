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

#include "dirlab/fdgrid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dirlab/errors.hpp"
#include "dirlab/kernels.hpp"
#include "dirlab/parallel.hpp"

namespace dirlab {

std::size_t Grid::total() const {
  std::size_t t = 1;
  for (int a = 0; a < d; ++a) t *= static_cast<std::size_t>(points_per_axis);
  return t;
}

void Grid::validate() const {
  if (d < 1 || d > 3) throw DomainError("Grid: dimension must be 1, 2 or 3");
  if (!(R > 0.0)) throw DomainError("Grid: radius must be positive");
  if (points_per_axis < 5) throw DomainError("Grid: need at least 5 points per axis");
  if (dt < 0.0) throw DomainError("Grid: dt must be nonnegative");
}

GridGeometry::GridGeometry(const Grid& grid) : grid_(grid) {
  grid_.validate();
  total_ = grid_.total();
  const auto n = static_cast<std::size_t>(grid_.points_per_axis);
  strides_ = {1, n, n * n};
  const double h = grid_.h();
  double cellw = 1.0;
  for (int a = 0; a < grid_.d; ++a) cellw *= h;
  lebesgue_w_.assign(total_, cellw);
  for (std::size_t node = 0; node < total_; ++node) {
    const auto idx = unpack(node);
    for (int a = 0; a < grid_.d; ++a)
      if (idx[a] == 0 || idx[a] == grid_.points_per_axis - 1) lebesgue_w_[node] *= 0.5;
  }
}

std::array<int, 3> GridGeometry::unpack(std::size_t node) const {
  const int n = grid_.points_per_axis;
  std::array<int, 3> idx = {0, 0, 0};
  idx[0] = static_cast<int>(node % n);
  if (grid_.d > 1) idx[1] = static_cast<int>((node / n) % n);
  if (grid_.d > 2) idx[2] = static_cast<int>(node / (static_cast<std::size_t>(n) * n));
  return idx;
}

std::size_t GridGeometry::pack(const std::array<int, 3>& idx) const {
  std::size_t node = static_cast<std::size_t>(idx[0]);
  if (grid_.d > 1) node += strides_[1] * static_cast<std::size_t>(idx[1]);
  if (grid_.d > 2) node += strides_[2] * static_cast<std::size_t>(idx[2]);
  return node;
}

void GridGeometry::point(std::size_t node, std::span<double> out) const {
  const auto idx = unpack(node);
  for (int a = 0; a < grid_.d; ++a) out[a] = coord(idx[a]);
}

bool GridGeometry::on_boundary(std::size_t node) const {
  const auto idx = unpack(node);
  for (int a = 0; a < grid_.d; ++a)
    if (idx[a] == 0 || idx[a] == grid_.points_per_axis - 1) return true;
  return false;
}

int GridGeometry::boundary_distance(const std::array<int, 3>& idx) const {
  int dist = std::numeric_limits<int>::max();
  for (int a = 0; a < grid_.d; ++a)
    dist = std::min({dist, idx[a], grid_.points_per_axis - 1 - idx[a]});
  return dist;
}

void GridGeometry::derivative(std::span<const double> u, int axis,
                              std::span<double> out) const {
  const int n = grid_.points_per_axis;
  const std::size_t s = strides_[axis];
  const double inv2h = 1.0 / (2.0 * h());
  const double invh = 1.0 / h();
  for (std::size_t node = 0; node < total_; ++node) {
    const int i = (axis == 0) ? static_cast<int>(node % n)
                              : static_cast<int>((node / s) % n);
    if (i == 0)
      out[node] = (u[node + s] - u[node]) * invh;
    else if (i == n - 1)
      out[node] = (u[node] - u[node - s]) * invh;
    else
      out[node] = (u[node + s] - u[node - s]) * inv2h;
  }
}

void GridGeometry::second_derivative(std::span<const double> u, int a, int b,
                                     std::span<double> out) const {
  const int n = grid_.points_per_axis;
  const double h2 = h() * h();
  if (a == b) {
    const std::size_t s = strides_[a];
    for (std::size_t node = 0; node < total_; ++node) {
      const int i = (a == 0) ? static_cast<int>(node % n)
                             : static_cast<int>((node / s) % n);
      if (i == 0)
        out[node] = (u[node + 2 * s] - 2.0 * u[node + s] + u[node]) / h2;
      else if (i == n - 1)
        out[node] = (u[node] - 2.0 * u[node - s] + u[node - 2 * s]) / h2;
      else
        out[node] = (u[node + s] - 2.0 * u[node] + u[node - s]) / h2;
    }
    return;
  }
  // Mixed derivative: derivative along b of the derivative along a.
  std::vector<double> da(total_);
  derivative(u, a, da);
  derivative(da, b, out);
}

double DriftFieldFD::jacobian_fd_defect(std::span<const double> x, double h) const {
  std::vector<double> xp(x.begin(), x.end());
  std::vector<double> jac(static_cast<std::size_t>(d) * d);
  jacobian(x, jac);
  std::vector<double> bp(d), bm(d);
  double defect = 0.0;
  for (int i = 0; i < d; ++i) {
    const double xi = xp[static_cast<std::size_t>(i)];
    xp[static_cast<std::size_t>(i)] = xi + h;
    eval(xp, bp);
    xp[static_cast<std::size_t>(i)] = xi - h;
    eval(xp, bm);
    xp[static_cast<std::size_t>(i)] = xi;
    for (int j = 0; j < d; ++j) {
      const double fd = (bp[static_cast<std::size_t>(j)] - bm[static_cast<std::size_t>(j)]) / (2.0 * h);
      defect = std::max(defect, std::fabs(fd - jac[static_cast<std::size_t>(i) * d + j]));
    }
  }
  return defect;
}

namespace {

struct Stepper {
  const GridGeometry& geom;
  std::vector<std::vector<double>> b;  // per component, per node
  std::vector<std::uint8_t> row_upwind;  // d == 2: per row flag
  bool any_upwind = false;
  double dt = 0.0;

  Stepper(const GridGeometry& g, const DriftFieldFD& drift) : geom(g) {
    const int d = geom.d();
    b.assign(d, std::vector<double>(geom.size()));
    std::vector<double> x(d), bv(d);
    for (std::size_t node = 0; node < geom.size(); ++node) {
      geom.point(node, x);
      drift.eval(x, bv);
      for (int a = 0; a < d; ++a) b[static_cast<std::size_t>(a)][node] = bv[static_cast<std::size_t>(a)];
    }
    // Cell Peclet |b| h / 2 > 2 switches the advection stencil to upwind.
    const double h = geom.h();
    const int n = geom.n();
    if (d == 2) row_upwind.assign(static_cast<std::size_t>(n), 0);
    for (std::size_t node = 0; node < geom.size(); ++node) {
      bool up = false;
      for (int a = 0; a < d; ++a)
        if (std::fabs(b[static_cast<std::size_t>(a)][node]) * h * 0.5 > 2.0) up = true;
      if (up) {
        any_upwind = true;
        if (d == 2) row_upwind[node / static_cast<std::size_t>(n)] = 1;
      }
    }
  }

  double max_abs_drift_sum() const {
    double m = 0.0;
    for (std::size_t node = 0; node < geom.size(); ++node) {
      double s = 0.0;
      for (const auto& comp : b) s += std::fabs(comp[node]);
      m = std::max(m, s);
    }
    return m;
  }

  // Generic node update with mirror (Neumann) neighbours and the Peclet
  // switch; used for boundaries, upwind rows and d != 2.
  double update_node(std::span<const double> u, std::size_t node,
                     const std::array<int, 3>& idx) const {
    const int d = geom.d();
    const int n = geom.n();
    const double h = geom.h();
    const double invh2 = 1.0 / (h * h);
    double lap = 0.0;
    double adv = 0.0;
    for (int a = 0; a < d; ++a) {
      const std::size_t s = geom.stride(a);
      const int i = idx[a];
      const std::size_t plus = (i == n - 1) ? node - s : node + s;
      const std::size_t minus = (i == 0) ? node + s : node - s;
      lap += (u[plus] + u[minus] - 2.0 * u[node]) * invh2;
      const double bi = b[static_cast<std::size_t>(a)][node];
      if (std::fabs(bi) * h * 0.5 > 2.0) {
        const double bplus = std::max(bi, 0.0);
        const double bminus = std::min(bi, 0.0);
        adv += (bplus * (u[plus] - u[node]) + bminus * (u[node] - u[minus])) / h;
      } else {
        adv += bi * (u[plus] - u[minus]) / (2.0 * h);
      }
    }
    return u[node] + dt * (lap + adv);
  }

  void step(const std::vector<double>& u, std::vector<double>& out) const {
    const int d = geom.d();
    const int n = geom.n();
    if (d == 2) {
      const double invh2 = 1.0 / (geom.h() * geom.h());
      const double inv2h = 0.5 / geom.h();
      const auto un = static_cast<std::size_t>(n);
      parallel_chunks(un, [&](std::size_t j) {
        const double* row = u.data() + j * un;
        const double* north = (j == un - 1) ? u.data() + (j - 1) * un : row + un;
        const double* south = (j == 0) ? row + un : row - un;
        double* dst = out.data() + j * un;
        if (!row_upwind.empty() && row_upwind[j]) {
          std::array<int, 3> idx = {0, static_cast<int>(j), 0};
          for (int i = 0; i < n; ++i) {
            idx[0] = i;
            dst[i] = update_node(u, j * un + static_cast<std::size_t>(i), idx);
          }
          return;
        }
        kernels::stencil2d_row(row, north, south, b[0].data() + j * un,
                               b[1].data() + j * un, dst, un, dt, invh2, inv2h);
        std::array<int, 3> idx = {0, static_cast<int>(j), 0};
        dst[0] = update_node(u, j * un, idx);
        idx[0] = n - 1;
        dst[un - 1] = update_node(u, j * un + un - 1, idx);
      });
      return;
    }
    for (std::size_t node = 0; node < geom.size(); ++node)
      out[node] = update_node(u, node, geom.unpack(node));
  }
};

}  // namespace

double Snapshot::ddt(const std::function<double(std::span<const double>)>& F) const {
  if (u_prev.empty() || u_next.empty())
    throw DomainError("Snapshot::ddt: time neighbours not stored");
  return (F(u_next) - F(u_prev)) / (2.0 * dt);
}

const Snapshot& GridSolution::at_time(double t) const {
  const Snapshot* best = nullptr;
  double best_gap = std::numeric_limits<double>::infinity();
  for (const auto& s : snapshots) {
    const double gap = std::fabs(s.t - t);
    if (gap < best_gap) {
      best_gap = gap;
      best = &s;
    }
  }
  if (!best || best_gap > std::max(dt, 1e-9 + 1e-6 * std::fabs(t)))
    throw DomainError("GridSolution: no snapshot near requested time");
  return *best;
}

GridSolution solve_cauchy(const DriftFieldFD& drift, const std::vector<double>& f,
                          double T, const Grid& grid, const SolveOptions& options) {
  GridGeometry geom(grid);
  if (drift.d != grid.d) throw DimensionError("solve_cauchy: drift/grid dimension mismatch");
  if (f.size() != geom.size()) throw DimensionError("solve_cauchy: initial datum size mismatch");
  if (!(T > 0.0)) throw DomainError("solve_cauchy: final time must be positive");

  GridSolution sol;
  sol.grid = grid;
  sol.f_sup = kernels::max_abs(f.data(), f.size());
  sol.boundary_tol = options.boundary_tol;
  if (sol.f_sup == 0.0) sol.f_sup = 0.0;

  if (options.certify_support && sol.f_sup > 0.0) {
    // The datum must sit at least 3 cells away from the truncation box walls.
    for (std::size_t node = 0; node < geom.size(); ++node) {
      if (std::fabs(f[node]) > options.support_tol * sol.f_sup &&
          geom.boundary_distance(geom.unpack(node)) < 3)
        throw DomainError("solve_cauchy: initial datum support too close to the boundary");
    }
  }

  Stepper stepper(geom, drift);
  sol.upwind_used = stepper.any_upwind;
  const double h = geom.h();
  const double limit = 1.0 / (2.0 * grid.d / (h * h) + stepper.max_abs_drift_sum() / h);
  double dt = grid.dt > 0.0 ? grid.dt : options.safety * limit;
  if (dt > limit)
    throw DomainError("solve_cauchy: dt exceeds the explicit stability bound");
  const auto steps = static_cast<std::size_t>(std::ceil(T / dt - 1e-12));
  dt = T / static_cast<double>(steps);
  stepper.dt = dt;
  sol.dt = dt;
  sol.steps = steps;

  // Map requested snapshot times onto step indices.
  std::vector<std::size_t> snap_steps;
  for (double t : options.snapshot_times) {
    if (t < -1e-12 || t > T + 1e-12)
      throw DomainError("solve_cauchy: snapshot time outside [0, T]");
    snap_steps.push_back(static_cast<std::size_t>(std::llround(t / dt)));
  }
  std::sort(snap_steps.begin(), snap_steps.end());
  snap_steps.erase(std::unique(snap_steps.begin(), snap_steps.end()), snap_steps.end());

  std::vector<std::size_t> boundary_nodes;
  for (std::size_t node = 0; node < geom.size(); ++node)
    if (geom.on_boundary(node)) boundary_nodes.push_back(node);

  std::vector<double> cur = f, next(f.size()), prev(f.size());
  sol.snapshots.reserve(snap_steps.size());
  std::size_t pending_next = snap_steps.size();  // index of snapshot waiting for u_next

  auto capture = [&](std::size_t snap_idx, std::size_t step) {
    Snapshot s;
    s.t = static_cast<double>(step) * dt;
    s.dt = dt;
    s.u = cur;
    if (step > 0) s.u_prev = prev;  // no predecessor at t = 0
    s.w.assign(static_cast<std::size_t>(grid.d), std::vector<double>(geom.size()));
    for (int a = 0; a < grid.d; ++a) geom.derivative(s.u, a, s.w[static_cast<std::size_t>(a)]);
    sol.snapshots.push_back(std::move(s));
    pending_next = snap_idx;
  };

  std::size_t next_snap = 0;
  if (!snap_steps.empty() && snap_steps[0] == 0) {
    capture(0, 0);
    ++next_snap;
  }

  const double blow_up = 10.0 * std::max(sol.f_sup, 1e-300);
  for (std::size_t step = 1; step <= steps + 1; ++step) {
    const bool extra_step = step == steps + 1;
    if (extra_step && pending_next == snap_steps.size()) break;
    stepper.step(cur, next);
    std::swap(prev, cur);  // prev now holds u at step-1
    std::swap(cur, next);
    if (pending_next < snap_steps.size()) {
      auto& s = sol.snapshots.back();
      s.u_next = cur;
      s.dudt.resize(geom.size());
      if (!s.u_prev.empty()) {
        for (std::size_t i = 0; i < geom.size(); ++i)
          s.dudt[i] = (s.u_next[i] - s.u_prev[i]) / (2.0 * dt);
      } else {
        for (std::size_t i = 0; i < geom.size(); ++i)
          s.dudt[i] = (s.u_next[i] - s.u[i]) / dt;
      }
      pending_next = snap_steps.size();
    }
    if (extra_step) break;

    for (std::size_t bnode : boundary_nodes)
      sol.boundary_max = std::max(sol.boundary_max, std::fabs(cur[bnode]));
    if (step % 16 == 0 || step == steps) {
      if (kernels::max_abs(cur.data(), cur.size()) > blow_up)
        throw NumericalAbort("solve_cauchy: blow-up detected at t = " +
                             std::to_string(step * dt));
    }
    if (next_snap < snap_steps.size() && snap_steps[next_snap] == step) {
      capture(next_snap, step);
      ++next_snap;
    }
  }
  sol.boundary_certified = sol.boundary_max <= options.boundary_tol * std::max(sol.f_sup, 1e-300);
  return sol;
}

double sym_eigen_max(std::span<const double> m, int d) {
  if (d == 1) return m[0];
  if (d == 2) {
    const double a = m[0], b = 0.5 * (m[1] + m[2]), c = m[3];
    const double mean = 0.5 * (a + c);
    const double rad = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
    return mean + rad;
  }
  if (d == 3) {
    // Cyclic Jacobi on the symmetrized matrix; a handful of sweeps suffices.
    double A[3][3];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        A[i][j] = 0.5 * (m[static_cast<std::size_t>(3 * i + j)] +
                         m[static_cast<std::size_t>(3 * j + i)]);
    for (int sweep = 0; sweep < 32; ++sweep) {
      double off = std::fabs(A[0][1]) + std::fabs(A[0][2]) + std::fabs(A[1][2]);
      if (off < 1e-14) break;
      for (int p = 0; p < 2; ++p) {
        for (int q = p + 1; q < 3; ++q) {
          if (std::fabs(A[p][q]) < 1e-300) continue;
          const double theta = 0.5 * std::atan2(2.0 * A[p][q], A[q][q] - A[p][p]);
          const double c = std::cos(theta), s = std::sin(theta);
          for (int k = 0; k < 3; ++k) {
            const double akp = A[k][p], akq = A[k][q];
            A[k][p] = c * akp - s * akq;
            A[k][q] = s * akp + c * akq;
          }
          for (int k = 0; k < 3; ++k) {
            const double apk = A[p][k], aqk = A[q][k];
            A[p][k] = c * apk - s * aqk;
            A[q][k] = s * apk + c * aqk;
          }
        }
      }
    }
    return std::max({A[0][0], A[1][1], A[2][2]});
  }
  throw DomainError("sym_eigen_max: dimension must be 1, 2 or 3");
}

double compute_c_plus(const DriftFieldFD& drift, const Grid& grid,
                      const RiggedBasis& basis) {
  GridGeometry geom(grid);
  if (basis.dimension() < static_cast<std::size_t>(grid.d))
    throw DimensionError("compute_c_plus: basis shorter than grid dimension");
  const int d = grid.d;
  std::vector<double> x(d), jac(static_cast<std::size_t>(d) * d),
      conj(static_cast<std::size_t>(d) * d);
  double cplus = -std::numeric_limits<double>::infinity();
  for (std::size_t node = 0; node < geom.size(); ++node) {
    geom.point(node, x);
    drift.jacobian(x, jac);
    // (Lambda_b y, y)_+ = (M z, z)_0 with z = W y and M = W Jac W^{-1};
    // sym_eigen_max symmetrizes M.
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        conj[static_cast<std::size_t>(i) * d + j] =
            basis.lambda(static_cast<std::size_t>(i)) *
            jac[static_cast<std::size_t>(i) * d + j] /
            basis.lambda(static_cast<std::size_t>(j));
    cplus = std::max(cplus, sym_eigen_max(conj, d));
  }
  return cplus;
}

double gradient_sup_norm_plus(const GridSolution& sol, double t, const RiggedBasis& basis) {
  const Snapshot& snap = sol.at_time(t);
  GridGeometry geom(sol.grid);
  const int d = sol.grid.d;
  if (basis.dimension() < static_cast<std::size_t>(d))
    throw DimensionError("gradient_sup_norm_plus: basis shorter than grid dimension");
  double sup = 0.0;
  for (std::size_t node = 0; node < geom.size(); ++node) {
    if (geom.boundary_distance(geom.unpack(node)) < 1) continue;
    double sq = 0.0;
    for (int a = 0; a < d; ++a) {
      const double l = basis.lambda(static_cast<std::size_t>(a));
      const double wi = snap.w[static_cast<std::size_t>(a)][node];
      sq += l * l * wi * wi;
    }
    sup = std::max(sup, sq);
  }
  return std::sqrt(sup);
}

}  // namespace dirlab
