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

#include "dirlab/dirichlet.hpp"

#include <cmath>

#include "dirlab/errors.hpp"
#include "dirlab/kernels.hpp"

namespace dirlab {

namespace {

std::vector<double> abstract_coords(const FieldSample& z, const WickSpec& spec,
                                    const ModeSet& modes, std::size_t dim) {
  std::vector<double> x(dim);
  for (std::size_t j = 0; j < dim; ++j)
    x[j] = spec.rigging.abstract_coordinate(modes.lambda(j), z.coeffs[j]);
  return x;
}

}  // namespace

BetaEvaluator beta_evaluator(const WickSpec& spec, const ModeSet& modes) {
  return [&spec, &modes](const FieldSample& z, std::size_t j) {
    return beta_abstract(z, spec, modes, j);
  };
}

WeightedEstimate dirichlet_energy(const CylinderFunction& f, const CylinderFunction& g,
                                  const WickSpec& spec, const ModeSet& modes,
                                  const WeightedSampleSet& set) {
  const std::size_t dim = std::max(f.base_dim, g.base_dim);
  if (dim > spec.K)
    throw DimensionError("dirichlet_energy: cylinder base dimension exceeds truncation");
  std::vector<double> vals(set.size());
  std::vector<double> gf(dim, 0.0), gg(dim, 0.0);
  std::vector<double> gf_s(f.base_dim), gg_s(g.base_dim);
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto x = abstract_coords(set.samples[i], spec, modes, dim);
    f.gradient(std::span<const double>(x).first(f.base_dim), gf_s);
    g.gradient(std::span<const double>(x).first(g.base_dim), gg_s);
    double s = 0.0;
    for (std::size_t a = 0; a < std::min(f.base_dim, g.base_dim); ++a)
      s += gf_s[a] * gg_s[a];
    vals[i] = s;
  }
  return weighted_mean(vals, set.normalized_weights());
}

double apply_A(const CylinderFunction& f, const BetaEvaluator& beta, const WickSpec& spec,
               const ModeSet& modes, const FieldSample& z) {
  if (f.base_dim > spec.K)
    throw DimensionError("apply_A: cylinder base dimension exceeds truncation");
  const auto x = abstract_coords(z, spec, modes, f.base_dim);
  const auto hess = f.hess(x);
  double trace = 0.0;
  for (std::size_t a = 0; a < f.base_dim; ++a) trace += hess[a * f.base_dim + a];
  std::vector<double> g(f.base_dim);
  f.gradient(x, g);
  double pairing = 0.0;
  for (std::size_t a = 0; a < f.base_dim; ++a) pairing += beta(z, a) * g[a];
  return -(trace + pairing);
}

SymmetryReport symmetry_check(const CylinderFunction& f, const CylinderFunction& g,
                              const WickSpec& spec, const ModeSet& modes,
                              const WeightedSampleSet& set, double sigma_level,
                              double ess_floor_fraction) {
  const auto beta = beta_evaluator(spec, modes);
  const std::size_t dim = std::max(f.base_dim, g.base_dim);
  if (dim > spec.K)
    throw DimensionError("symmetry_check: cylinder base dimension exceeds truncation");

  const std::size_t n = set.size();
  std::vector<double> af_g(n), f_ag(n), energy(n);
  std::vector<double> gf_s(f.base_dim), gg_s(g.base_dim);
  for (std::size_t i = 0; i < n; ++i) {
    const FieldSample& z = set.samples[i];
    const auto x = abstract_coords(z, spec, modes, dim);
    const double fv = f.value(std::span<const double>(x).first(f.base_dim));
    const double gv = g.value(std::span<const double>(x).first(g.base_dim));
    af_g[i] = apply_A(f, beta, spec, modes, z) * gv;
    f_ag[i] = fv * apply_A(g, beta, spec, modes, z);
    f.gradient(std::span<const double>(x).first(f.base_dim), gf_s);
    g.gradient(std::span<const double>(x).first(g.base_dim), gg_s);
    double s = 0.0;
    for (std::size_t a = 0; a < std::min(f.base_dim, g.base_dim); ++a)
      s += gf_s[a] * gg_s[a];
    energy[i] = s;
  }
  const auto w = set.normalized_weights();
  SymmetryReport rep;
  rep.f_name = f.name;
  rep.g_name = g.name;
  rep.sigma_level = sigma_level;
  rep.ess = set.ess();
  const auto e1 = weighted_mean(af_g, w);
  const auto e2 = weighted_mean(f_ag, w);
  const auto e3 = weighted_mean(energy, w);
  rep.af_g = e1.value;
  rep.af_g_stderr = e1.stderr_;
  rep.f_ag = e2.value;
  rep.f_ag_stderr = e2.stderr_;
  rep.energy = e3.value;
  rep.energy_stderr = e3.stderr_;
  std::vector<double> r1(n), r2(n);
  for (std::size_t i = 0; i < n; ++i) {
    r1[i] = af_g[i] - energy[i];
    r2[i] = f_ag[i] - energy[i];
  }
  const auto rr1 = weighted_mean(r1, w);
  const auto rr2 = weighted_mean(r2, w);
  rep.resid_af = rr1.value;
  rep.resid_af_stderr = rr1.stderr_;
  rep.resid_ag = rr2.value;
  rep.resid_ag_stderr = rr2.stderr_;
  rep.inconclusive = rep.ess < ess_floor_fraction * static_cast<double>(n);
  auto within = [&](double v, double se) {
    if (se == 0.0) return v == 0.0;
    return std::fabs(v) <= sigma_level * se;
  };
  rep.pass = !rep.inconclusive && within(rr1.value, rr1.stderr_) &&
             within(rr2.value, rr2.stderr_);
  return rep;
}

MarkovReport markov_checks(const GridSolution& sol, double tol) {
  MarkovReport rep;
  rep.tol = tol;
  GridGeometry geom(sol.grid);
  if (sol.snapshots.empty()) throw DomainError("markov_checks: no snapshots");
  const auto& f = sol.snapshots.front().u;

  double fmin = f[0], fmax_abs = 0.0;
  for (double v : f) {
    fmin = std::min(fmin, v);
    fmax_abs = std::max(fmax_abs, std::fabs(v));
  }
  rep.nonneg_data = fmin >= 0.0;
  bool unit = true;
  for (double v : f)
    if (v != 1.0) unit = false;
  rep.unit_data = unit;

  double min_u = 0.0, sup_ratio = 0.0, unit_defect = 0.0;
  for (const auto& s : sol.snapshots) {
    double mn = s.u[0], mx = 0.0;
    for (double v : s.u) {
      mn = std::min(mn, v);
      mx = std::max(mx, std::fabs(v));
    }
    min_u = std::min(min_u, mn);
    if (fmax_abs > 0.0) sup_ratio = std::max(sup_ratio, mx / fmax_abs);
    if (unit) {
      for (std::size_t node = 0; node < geom.size(); ++node) {
        if (geom.boundary_distance(geom.unpack(node)) < 1) continue;
        unit_defect = std::max(unit_defect, std::fabs(s.u[node] - 1.0));
      }
    }
  }
  rep.min_u = min_u;
  rep.positivity_pass = rep.nonneg_data && min_u >= -tol;
  rep.sup_ratio = sup_ratio;
  rep.contraction_pass = sup_ratio <= 1.0 + tol;
  rep.unit_defect = unit_defect;
  rep.conservation_pass = rep.unit_data && unit_defect <= tol;
  return rep;
}

}  // namespace dirlab
