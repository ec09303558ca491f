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

#include "dirlab/duhamel.hpp"

#include <cmath>
#include <limits>

#include "dirlab/errors.hpp"

namespace dirlab {

DriftFieldFD build_projected_drift(const ApproximationLadder& ladder, int n, int m) {
  if (n > ladder.max_n || m > ladder.max_m)
    throw ConfigError("build_projected_drift: rung outside the ladder range");
  DriftFieldFD drift;
  drift.name = ladder.name + ":rung(n=" + std::to_string(n) + ",m=" + std::to_string(m) + ")";
  drift.d = ladder.d;
  const auto alpha_fn = (n < 0) ? ladder.measure.alpha_part : nullptr;
  const auto delta_fn = (m < 0) ? ladder.measure.delta_part : nullptr;
  const auto& ladder_ref = ladder;
  drift.eval = [&ladder_ref, n, m, alpha_fn, delta_fn](std::span<const double> x,
                                                       std::span<double> out) {
    std::vector<double> tmp(out.size(), 0.0);
    if (alpha_fn)
      alpha_fn(x, out);
    else
      ladder_ref.alpha_n(n, x, out);
    if (delta_fn)
      delta_fn(x, tmp);
    else
      ladder_ref.delta_m(m, x, tmp);
    for (std::size_t a = 0; a < out.size(); ++a) out[a] += tmp[a];
  };
  drift.alpha_part = [&ladder_ref, n, alpha_fn](std::span<const double> x,
                                                std::span<double> out) {
    if (alpha_fn)
      alpha_fn(x, out);
    else
      ladder_ref.alpha_n(n, x, out);
  };
  drift.delta_part = [&ladder_ref, m, delta_fn](std::span<const double> x,
                                                std::span<double> out) {
    if (delta_fn)
      delta_fn(x, out);
    else
      ladder_ref.delta_m(m, x, out);
  };
  if (ladder.rung_jacobian)
    drift.jacobian = [&ladder_ref, n, m](std::span<const double> x, std::span<double> out) {
      ladder_ref.rung_jacobian(n, m, x, out);
    };
  if (ladder.rung_divergence)
    drift.divergence = [&ladder_ref, n, m](std::span<const double> x) {
      return ladder_ref.rung_divergence(n, m, x);
    };
  return drift;
}

namespace {

double trapezoid(const std::vector<double>& times, const std::vector<double>& g, double t) {
  double acc = 0.0;
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (times[k] > t + 1e-12) break;
    acc += 0.5 * (g[k] + g[k - 1]) * (times[k] - times[k - 1]);
  }
  return acc;
}

}  // namespace

GapReport duhamel_gap(const ApproximationLadder& ladder, int n, int m,
                      const GridSolution& reference, const GridSolution& rung,
                      const MeasureOnGrid& nu, const RiggedBasis& basis, double t,
                      double p) {
  if (p != 1.0 && p != 2.0) throw DomainError("duhamel_gap: p must be 1 or 2");
  if (reference.grid.total() != rung.grid.total() ||
      reference.grid.points_per_axis != rung.grid.points_per_axis)
    throw DimensionError("duhamel_gap: reference and rung must share the grid");
  const GridGeometry& geom = nu.geometry();
  const int d = geom.d();

  GapReport rep;
  rep.n = n;
  rep.m = m;
  rep.exact_rung = (n < 0 && m < 0);
  rep.p = p;
  rep.gamma = ladder.gamma;

  const Snapshot& uref = reference.at_time(t);
  const Snapshot& urun = rung.at_time(t);
  rep.t = urun.t;
  std::vector<double> diff(geom.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = uref.u[i] - urun.u[i];
  rep.lhs = nu.lp_norm(diff, p);

  // Drift-error norms under nu.
  std::vector<double> x(d), va(d), vb(d);
  std::vector<double> alpha_err(geom.size()), delta_err(geom.size());
  const auto rung_drift = build_projected_drift(ladder, n, m);
  for (std::size_t node = 0; node < geom.size(); ++node) {
    geom.point(node, x);
    rung_drift.alpha_part(x, va);
    ladder.measure.alpha_part(x, vb);
    double sa = 0.0;
    for (int a = 0; a < d; ++a) {
      const double e = va[static_cast<std::size_t>(a)] - vb[static_cast<std::size_t>(a)];
      sa += e * e;
    }
    alpha_err[node] = std::sqrt(sa);
    rung_drift.delta_part(x, va);
    ladder.measure.delta_part(x, vb);
    double sd = 0.0;
    for (int a = 0; a < d; ++a) {
      const double l = basis.lambda(static_cast<std::size_t>(a));
      const double e = va[static_cast<std::size_t>(a)] - vb[static_cast<std::size_t>(a)];
      sd += e * e / (l * l);
    }
    delta_err[node] = std::sqrt(sd);
  }
  rep.alpha_err_norm = nu.lp_norm(alpha_err, p == 2.0 ? 4.0 : 2.0);
  rep.delta_err_norm = nu.lp_norm(delta_err, p == 2.0 ? 2.0 : 1.0);

  // Time integrals of the rung solution's gradient norms.
  std::vector<double> snap_times, grad_norm, grad_plus_sup;
  for (const auto& s : rung.snapshots) {
    snap_times.push_back(s.t);
    std::vector<double> g0(geom.size(), 0.0);
    for (const auto& comp : s.w)
      for (std::size_t i = 0; i < g0.size(); ++i) g0[i] += comp[i] * comp[i];
    for (auto& v : g0) v = std::sqrt(v);
    grad_norm.push_back(nu.lp_norm(g0, p == 2.0 ? 4.0 : 2.0));
    double sup = 0.0;
    for (std::size_t node = 0; node < geom.size(); ++node) {
      if (geom.boundary_distance(geom.unpack(node)) < 1) continue;
      double sq = 0.0;
      for (std::size_t a = 0; a < s.w.size(); ++a) {
        const double l = basis.lambda(a);
        sq += l * l * s.w[a][node] * s.w[a][node];
      }
      sup = std::max(sup, sq);
    }
    grad_plus_sup.push_back(std::sqrt(sup));
  }
  rep.grad_integral = trapezoid(snap_times, grad_norm, rep.t);
  rep.grad_plus_sup_integral = trapezoid(snap_times, grad_plus_sup, rep.t);

  rep.rhs = std::exp(ladder.gamma * rep.t) *
            (rep.alpha_err_norm * rep.grad_integral +
             rep.delta_err_norm * rep.grad_plus_sup_integral);
  rep.finalize(0.0);
  return rep;
}

LpInterval lp_uniqueness_interval(double eps0) {
  if (!(eps0 > 0.0) || eps0 > 1.0)
    throw DomainError("lp_uniqueness_interval: eps0 must lie in (0, 1]");
  LpInterval iv;
  const double root = std::sqrt(eps0);
  iv.p_lo = 1.0 + 1.0 / (1.0 + root);
  if (eps0 == 1.0) {
    iv.p_hi_infinite = true;
    iv.p_hi = std::numeric_limits<double>::infinity();
  } else {
    iv.p_hi = 1.0 + 1.0 / (1.0 - root);
  }
  return iv;
}

}  // namespace dirlab
