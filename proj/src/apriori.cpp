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

#include "dirlab/apriori.hpp"

#include <cmath>

#include "dirlab/errors.hpp"
#include "dirlab/kernels.hpp"

namespace dirlab {

namespace {

/// (e^{ct} - 1)/c, with the removable singularity at c = 0.
double expm_factor(double c, double t) {
  if (std::fabs(c) < 1e-12) return t;
  return (std::exp(c * t) - 1.0) / c;
}

/// Trapezoid of per-snapshot values g over snapshot times up to (and
/// including) t.
double trapezoid_to(const std::vector<double>& times, const std::vector<double>& g,
                    double t) {
  double acc = 0.0;
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (times[k] > t + 1e-12) break;
    acc += 0.5 * (g[k] + g[k - 1]) * (times[k] - times[k - 1]);
  }
  return acc;
}

}  // namespace

AprioriContext::AprioriContext(const GridSolution& sol, const DriftFieldFD& drift,
                               const MeasureOnGrid& nu, const RiggedBasis& basis)
    : sol_(&sol), drift_(&drift), nu_(&nu), geom_(sol.grid), basis_(basis) {
  const int d = geom_.d();
  if (sol.snapshots.empty() || sol.snapshots.front().t != 0.0)
    throw DomainError("AprioriContext: solution must carry a t = 0 snapshot");

  auto fill = [&](const std::function<void(std::span<const double>, std::span<double>)>& fn,
                  std::vector<std::vector<double>>& dst) {
    dst.assign(static_cast<std::size_t>(d), std::vector<double>(geom_.size(), 0.0));
    if (!fn) return false;
    std::vector<double> x(d), v(d);
    for (std::size_t node = 0; node < geom_.size(); ++node) {
      geom_.point(node, x);
      fn(x, v);
      for (int a = 0; a < d; ++a) dst[static_cast<std::size_t>(a)][node] = v[static_cast<std::size_t>(a)];
    }
    return true;
  };
  fill(drift.eval, b_);
  const bool has_alpha1 = fill(drift.alpha_part, alpha1_);
  const bool has_delta1 = fill(drift.delta_part, delta1_);
  if (has_alpha1 && !has_delta1) {
    for (int a = 0; a < d; ++a)
      for (std::size_t i = 0; i < geom_.size(); ++i)
        delta1_[static_cast<std::size_t>(a)][i] =
            b_[static_cast<std::size_t>(a)][i] - alpha1_[static_cast<std::size_t>(a)][i];
  } else if (!has_alpha1 && has_delta1) {
    for (int a = 0; a < d; ++a)
      for (std::size_t i = 0; i < geom_.size(); ++i)
        alpha1_[static_cast<std::size_t>(a)][i] =
            b_[static_cast<std::size_t>(a)][i] - delta1_[static_cast<std::size_t>(a)][i];
  } else if (!has_alpha1 && !has_delta1) {
    delta1_ = b_;  // default split: everything into the one-sided part
  }

  const Snapshot& init = sol.snapshots.front();
  f_sup_ = kernels::max_abs(init.u.data(), init.u.size());
  f_l2_ = std::sqrt(nu.l2_sq(init.u));
  gradf_sup_plus_ = sup_grad_plus(init);
  gradf_l2_0_sq_ = nu.expectation(grad_norm0_sq(init));
  c_plus_ = compute_c_plus(drift, sol.grid, basis_);

  // Measure/drift mismatch norms under nu.
  const std::size_t total = geom_.size();
  std::vector<double> field(total);
  for (std::size_t i = 0; i < total; ++i) {
    double s = 0.0;
    for (int a = 0; a < d; ++a) {
      const double diff = nu.alpha_component(a)[i] - alpha1_[static_cast<std::size_t>(a)][i];
      s += diff * diff;
    }
    field[i] = s;
  }
  alpha_diff_l2_sq_ = nu.expectation(field);
  for (std::size_t i = 0; i < total; ++i) {
    double s = 0.0;
    for (int a = 0; a < d; ++a) {
      const double l = basis_.lambda(static_cast<std::size_t>(a));
      const double diff = nu.delta_component(a)[i] - delta1_[static_cast<std::size_t>(a)][i];
      s += diff * diff / (l * l);
    }
    field[i] = s;
  }
  delta_diff_minus_l2_sq_ = nu.expectation(field);
  for (auto& v : field) v = std::sqrt(v);
  delta_diff_minus_l1_ = nu.expectation(field);
  alpha1_l4_4_ = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    double s0 = 0.0, s1 = 0.0;
    for (int a = 0; a < d; ++a) {
      const double ma = nu.alpha_component(a)[i];
      const double da = alpha1_[static_cast<std::size_t>(a)][i];
      s0 += ma * ma;
      s1 += da * da;
    }
    field[i] = s0 * s0;
    alpha1_l4_4_ += nu.nu_weights()[i] * s1 * s1;
  }
  alpha_l4_4_ = nu.expectation(field);
}

std::vector<double> AprioriContext::pair_with(
    const std::vector<std::vector<double>>& v,
    const std::vector<std::vector<double>>& w) const {
  const std::size_t total = geom_.size();
  std::vector<double> out(total, 0.0);
  for (std::size_t a = 0; a < v.size(); ++a)
    for (std::size_t i = 0; i < total; ++i) out[i] += v[a][i] * w[a][i];
  return out;
}

std::vector<double> AprioriContext::grad_norm0_sq(const Snapshot& s) const {
  const std::size_t total = geom_.size();
  std::vector<double> out(total, 0.0);
  for (const auto& comp : s.w)
    for (std::size_t i = 0; i < total; ++i) out[i] += comp[i] * comp[i];
  return out;
}

std::vector<double> AprioriContext::grad_normplus_sq(const Snapshot& s) const {
  const std::size_t total = geom_.size();
  std::vector<double> out(total, 0.0);
  for (std::size_t a = 0; a < s.w.size(); ++a) {
    const double l = basis_.lambda(a);
    for (std::size_t i = 0; i < total; ++i) out[i] += l * l * s.w[a][i] * s.w[a][i];
  }
  return out;
}

std::vector<std::vector<double>> AprioriContext::gradient_of(
    const std::vector<double>& u) const {
  std::vector<std::vector<double>> g(static_cast<std::size_t>(geom_.d()),
                                     std::vector<double>(geom_.size()));
  for (int a = 0; a < geom_.d(); ++a) geom_.derivative(u, a, g[static_cast<std::size_t>(a)]);
  return g;
}

double AprioriContext::ddt_grad0_l2sq(const Snapshot& s) const {
  if (s.u_prev.empty() || s.u_next.empty())
    throw DomainError("ddt_grad0_l2sq: snapshot lacks time neighbours");
  auto norm_of = [&](const std::vector<double>& u) {
    const auto g = gradient_of(u);
    double acc = 0.0;
    for (const auto& comp : g) acc += nu_->l2_sq(comp);
    return acc;
  };
  return (norm_of(s.u_next) - norm_of(s.u_prev)) / (2.0 * s.dt);
}

double AprioriContext::sup_grad_plus(const Snapshot& s) const {
  double sup = 0.0;
  for (std::size_t node = 0; node < geom_.size(); ++node) {
    if (geom_.boundary_distance(geom_.unpack(node)) < 1) continue;
    double sq = 0.0;
    for (std::size_t a = 0; a < s.w.size(); ++a) {
      const double l = basis_.lambda(a);
      sq += l * l * s.w[a][node] * s.w[a][node];
    }
    sup = std::max(sup, sq);
  }
  return std::sqrt(sup);
}

std::vector<EstimateReport> check_gradient_bound(const AprioriContext& ctx,
                                        const std::vector<double>& times) {
  std::vector<EstimateReport> out;
  const double g0 = ctx.gradf_sup_plus();
  for (double t : times) {
    const Snapshot& snap = ctx.solution().at_time(t);
    EstimateReport r;
    r.name = "gradient_bound";
    r.time = snap.t;
    r.lhs = ctx.sup_grad_plus(snap);
    r.rhs = std::exp(ctx.c_plus() * snap.t) * g0;
    r.terms = {{"c_plus", ctx.c_plus()}, {"grad_f_sup_plus", g0}};
    r.finalize(0.0);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<EstimateReport> check_energy_estimate(const AprioriContext& ctx,
                                        const std::vector<double>& times) {
  const auto& snaps = ctx.solution().snapshots;
  std::vector<double> snap_times, grad0_l2sq;
  for (const auto& s : snaps) {
    snap_times.push_back(s.t);
    grad0_l2sq.push_back(ctx.nu().expectation(ctx.grad_norm0_sq(s)));
  }
  std::vector<EstimateReport> out;
  for (double t : times) {
    const Snapshot& snap = ctx.solution().at_time(t);
    EstimateReport r;
    r.name = "energy_estimate";
    r.time = snap.t;
    const double u_l2sq = ctx.nu().l2_sq(snap.u);
    const double dissip = trapezoid_to(snap_times, grad0_l2sq, snap.t);
    r.lhs = u_l2sq + dissip;
    const double alpha_term = snap.t * ctx.f_sup() * ctx.f_sup() * ctx.alpha_diff_l2_sq();
    const double delta_term = 2.0 * expm_factor(ctx.c_plus(), snap.t) *
                              ctx.gradf_sup_plus() * ctx.f_sup() *
                              ctx.delta_diff_minus_l1();
    r.rhs = alpha_term + delta_term + ctx.f_l2() * ctx.f_l2();
    r.terms = {{"u_l2_sq", u_l2sq},
               {"dissipation_integral", dissip},
               {"alpha_term", alpha_term},
               {"delta_term", delta_term},
               {"f_l2_sq", ctx.f_l2() * ctx.f_l2()},
               {"c_plus", ctx.c_plus()}};
    r.finalize(0.0);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<EstimateReport> check_lemma1(const AprioriContext& ctx,
                                         const std::vector<double>& times) {
  const int d = ctx.geometry().d();
  std::vector<EstimateReport> out;
  for (double t : times) {
    const Snapshot& snap = ctx.solution().at_time(t);
    EstimateReport r;
    r.name = "lemma1";
    r.time = snap.t;
    const double dudt_sq = ctx.nu().l2_sq(snap.dudt);
    const double ddt_w = ctx.ddt_grad0_l2sq(snap);
    r.lhs = dudt_sq + ddt_w;
    std::vector<double> mismatch(ctx.geometry().size(), 0.0);
    for (int a = 0; a < d; ++a) {
      const auto& beta_a = ctx.nu().beta_component(a);
      const auto& b_a = ctx.b_component(a);
      const auto& w_a = snap.w[static_cast<std::size_t>(a)];
      for (std::size_t i = 0; i < mismatch.size(); ++i)
        mismatch[i] += (beta_a[i] - b_a[i]) * w_a[i];
    }
    r.rhs = ctx.nu().l2_sq(mismatch);
    r.terms = {{"dudt_l2_sq", dudt_sq}, {"ddt_grad_l2_sq", ddt_w}};
    r.finalize(0.0);
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

// sum_{i,j} || grad_i w_j ||_{L2(nu)}^2 plus the per-pair fields when needed.
double second_derivative_energy(const AprioriContext& ctx, const Snapshot& snap) {
  const int d = ctx.geometry().d();
  std::vector<double> sec(ctx.geometry().size());
  double acc = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      ctx.geometry().second_derivative(snap.u, j, i, sec);  // grad_i w_j
      acc += ctx.nu().l2_sq(sec);
    }
  }
  return acc;
}

}  // namespace

std::vector<EstimateReport> check_lemma3(const AprioriContext& ctx,
                                         const std::vector<double>& times) {
  const int d = ctx.geometry().d();
  std::vector<EstimateReport> out;
  for (double t : times) {
    const Snapshot& snap = ctx.solution().at_time(t);
    EstimateReport r;
    r.name = "lemma3";
    r.time = snap.t;
    const auto w0sq = ctx.grad_norm0_sq(snap);
    double lhs = 0.0;
    for (std::size_t i = 0; i < w0sq.size(); ++i)
      lhs += ctx.nu().nu_weights()[i] * w0sq[i] * w0sq[i];
    r.lhs = lhs;
    std::vector<double> mismatch(ctx.geometry().size(), 0.0);
    for (int a = 0; a < d; ++a) {
      const auto& beta_a = ctx.nu().beta_component(a);
      const auto& b_a = ctx.b_component(a);
      const auto& w_a = snap.w[static_cast<std::size_t>(a)];
      for (std::size_t i = 0; i < mismatch.size(); ++i)
        mismatch[i] += (b_a[i] - beta_a[i]) * w_a[i];
    }
    const double mismatch_sq = ctx.nu().l2_sq(mismatch);
    const double ddt_w = ctx.ddt_grad0_l2sq(snap);
    const double hess_energy = second_derivative_energy(ctx, snap);
    r.rhs = 16.0 * ctx.f_sup() * ctx.f_sup() *
            (0.5 * mismatch_sq - 0.25 * ddt_w + hess_energy);
    r.terms = {{"mismatch_l2_sq", mismatch_sq},
               {"ddt_grad_l2_sq", ddt_w},
               {"hessian_energy", hess_energy}};
    r.finalize(0.0);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<EstimateReport> check_differentiated_identity(const AprioriContext& ctx,
                                       const std::vector<double>& times) {
  const int d = ctx.geometry().d();
  const std::size_t total = ctx.geometry().size();
  const auto& nu = ctx.nu();

  // Jacobian of the measure's delta part, analytic or finite-differenced.
  std::vector<std::vector<double>> delta_jac(static_cast<std::size_t>(d) * d,
                                             std::vector<double>(total, 0.0));
  {
    std::vector<double> x(d), jac(static_cast<std::size_t>(d) * d), vp(d), vm(d);
    const double hfd = 1e-5;
    for (std::size_t node = 0; node < total; ++node) {
      ctx.geometry().point(node, x);
      if (nu.measure().delta_jacobian) {
        nu.measure().delta_jacobian(x, jac);
      } else if (nu.measure().delta_part) {
        for (int i = 0; i < d; ++i) {
          const double xi = x[static_cast<std::size_t>(i)];
          x[static_cast<std::size_t>(i)] = xi + hfd;
          nu.measure().delta_part(x, vp);
          x[static_cast<std::size_t>(i)] = xi - hfd;
          nu.measure().delta_part(x, vm);
          x[static_cast<std::size_t>(i)] = xi;
          for (int j = 0; j < d; ++j)
            jac[static_cast<std::size_t>(i) * d + j] =
                (vp[static_cast<std::size_t>(j)] - vm[static_cast<std::size_t>(j)]) / (2.0 * hfd);
        }
      } else {
        for (auto& v : jac) v = 0.0;
      }
      for (int k = 0; k < d * d; ++k)
        delta_jac[static_cast<std::size_t>(k)][node] = jac[static_cast<std::size_t>(k)];
    }
  }

  std::vector<EstimateReport> out;
  std::vector<double> sec(total);
  for (double t : times) {
    const Snapshot& snap = ctx.solution().at_time(t);
    EstimateReport r;
    r.name = "differentiated_identity";
    r.time = snap.t;

    const double ddt_w = ctx.ddt_grad0_l2sq(snap);
    const double hess_energy = second_derivative_energy(ctx, snap);
    const double lhs = 0.5 * ddt_w + hess_energy;

    // -sum_i < (alpha, grad w_i)_0, w_i >
    double advect = 0.0;
    for (int i = 0; i < d; ++i) {
      std::vector<double> alpha_grad(total, 0.0);
      for (int a = 0; a < d; ++a) {
        ctx.geometry().second_derivative(snap.u, i, a, sec);  // grad_a w_i
        const auto& alpha_a = nu.alpha_component(a);
        for (std::size_t k = 0; k < total; ++k) alpha_grad[k] += alpha_a[k] * sec[k];
      }
      const auto& w_i = snap.w[static_cast<std::size_t>(i)];
      advect -= kernels::dot3(alpha_grad.data(), w_i.data(), nu.nu_weights().data(), total);
    }

    // < (Lambda_delta w, w)_0 >
    double jac_form = 0.0;
    {
      std::vector<double> field(total, 0.0);
      for (int i = 0; i < d; ++i) {
        const auto& w_i = snap.w[static_cast<std::size_t>(i)];
        for (int j = 0; j < d; ++j) {
          const auto& w_j = snap.w[static_cast<std::size_t>(j)];
          const auto& jac_ij = delta_jac[static_cast<std::size_t>(i) * d + j];
          for (std::size_t k = 0; k < total; ++k) field[k] += jac_ij[k] * w_j[k] * w_i[k];
        }
      }
      jac_form = nu.expectation(field);
    }

    auto paired = [&](auto&& coeff_of) {
      std::vector<double> field(total, 0.0);
      for (int a = 0; a < d; ++a) {
        const auto& w_a = snap.w[static_cast<std::size_t>(a)];
        for (std::size_t k = 0; k < total; ++k) field[k] += coeff_of(a, k) * w_a[k];
      }
      return field;
    };
    const auto delta_minus_b = paired([&](int a, std::size_t k) {
      return nu.delta_component(a)[k] - ctx.b_component(a)[k];
    });
    const auto delta_gap = paired([&](int a, std::size_t k) {
      return nu.delta_component(a)[k] - ctx.delta1_component(a)[k];
    });
    const auto alpha_m2a1 = paired([&](int a, std::size_t k) {
      return nu.alpha_component(a)[k] - 2.0 * ctx.alpha1_component(a)[k];
    });
    const auto alpha1_w = paired([&](int a, std::size_t k) { return ctx.alpha1_component(a)[k]; });
    const auto alpha_w = paired([&](int a, std::size_t k) { return nu.alpha_component(a)[k]; });

    const double dudt_term =
        kernels::dot3(delta_minus_b.data(), snap.dudt.data(), nu.nu_weights().data(), total);
    const double cross1 =
        kernels::dot3(delta_gap.data(), alpha_m2a1.data(), nu.nu_weights().data(), total);
    const double cross2 =
        kernels::dot3(alpha1_w.data(), alpha_w.data(), nu.nu_weights().data(), total);
    const double alpha1_sq = nu.l2_sq(alpha1_w);
    const double gap_sq = nu.l2_sq(delta_gap);

    const double rhs = advect + jac_form + dudt_term + cross1 - cross2 + alpha1_sq + gap_sq;

    r.lhs = lhs;
    r.rhs = rhs;
    r.terms = {{"ddt_grad_l2_sq", ddt_w},     {"hessian_energy", hess_energy},
               {"alpha_advect", advect},      {"delta_jacobian_form", jac_form},
               {"dudt_pairing", dudt_term},   {"cross_delta_alpha", cross1},
               {"cross_alpha1_alpha", cross2}, {"alpha1_w_l2_sq", alpha1_sq},
               {"delta_gap_w_l2_sq", gap_sq}};
    r.margin = rhs - lhs;  // signed imbalance of the identity
    r.budget = 0.0;
    r.pass = false;  // decided by the Richardson pairing upstream
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<EstimateReport> check_p4_balance_identity(const AprioriContext& ctx,
                                             const std::vector<double>& times) {
  const int d = ctx.geometry().d();
  const std::size_t total = ctx.geometry().size();
  const auto& leb = ctx.geometry().lebesgue_weights();
  const auto& basis = ctx.basis();

  // Drift Jacobian and divergence tables.
  std::vector<std::vector<double>> jac_tab(static_cast<std::size_t>(d) * d,
                                           std::vector<double>(total));
  std::vector<double> div_tab(total);
  {
    std::vector<double> x(d), jac(static_cast<std::size_t>(d) * d);
    for (std::size_t node = 0; node < total; ++node) {
      ctx.geometry().point(node, x);
      ctx.drift().jacobian(x, jac);
      for (int k = 0; k < d * d; ++k)
        jac_tab[static_cast<std::size_t>(k)][node] = jac[static_cast<std::size_t>(k)];
      div_tab[node] = ctx.drift().divergence ? ctx.drift().divergence(x) : 0.0;
    }
  }

  auto plus_norm4_integral = [&](const std::vector<double>& u_field) {
    auto g = ctx.gradient_of(u_field);
    std::vector<double> p(total, 0.0);
    for (int a = 0; a < d; ++a) {
      const double l = basis.lambda(static_cast<std::size_t>(a));
      for (std::size_t k = 0; k < total; ++k)
        p[k] += l * l * g[static_cast<std::size_t>(a)][k] * g[static_cast<std::size_t>(a)][k];
    }
    double acc = 0.0;
    for (std::size_t k = 0; k < total; ++k) acc += leb[k] * p[k] * p[k];
    return acc;
  };

  std::vector<EstimateReport> out;
  std::vector<double> sec(total);
  for (double t : times) {
    const Snapshot& snap = ctx.solution().at_time(t);
    EstimateReport r;
    r.name = "p4_balance_identity";
    r.time = snap.t;

    const auto plus_sq = ctx.grad_normplus_sq(snap);  // |w|_+^2

    // T1 = (1/4) d/dt integral |w|_+^4 dx
    const double t1 = 0.25 * snap.ddt([&](std::span<const double> u_field) {
      return plus_norm4_integral(std::vector<double>(u_field.begin(), u_field.end()));
    });

    // T2 = (1/2) integral |grad(|w|_+^2)|_0^2 dx
    double t2 = 0.0;
    {
      std::vector<double> dp(total);
      for (int a = 0; a < d; ++a) {
        ctx.geometry().derivative(plus_sq, a, dp);
        t2 += 0.5 * kernels::dot3(dp.data(), dp.data(), leb.data(), total);
      }
    }

    // T3 = sum_{i,j} mu_i^2 integral (grad_j w_i)^2 |w|_+^2 dx
    double t3 = 0.0;
    for (int i = 0; i < d; ++i) {
      const double mu2 = basis.lambda(static_cast<std::size_t>(i)) *
                         basis.lambda(static_cast<std::size_t>(i));
      for (int j = 0; j < d; ++j) {
        ctx.geometry().second_derivative(snap.u, j, i, sec);  // grad_j w_i
        double acc = 0.0;
        for (std::size_t k = 0; k < total; ++k) acc += leb[k] * sec[k] * sec[k] * plus_sq[k];
        t3 += mu2 * acc;
      }
    }

    // R1 = integral (Lambda_b y, y)_+ dx with y = w |w|_+
    double r1 = 0.0;
    {
      std::vector<double> field(total, 0.0);
      for (int i = 0; i < d; ++i) {
        const double mu2 = basis.lambda(static_cast<std::size_t>(i)) *
                           basis.lambda(static_cast<std::size_t>(i));
        const auto& w_i = snap.w[static_cast<std::size_t>(i)];
        for (int j = 0; j < d; ++j) {
          const auto& w_j = snap.w[static_cast<std::size_t>(j)];
          const auto& jac_ij = jac_tab[static_cast<std::size_t>(i) * d + j];
          for (std::size_t k = 0; k < total; ++k)
            field[k] += mu2 * jac_ij[k] * w_j[k] * w_i[k] * plus_sq[k];
        }
      }
      for (std::size_t k = 0; k < total; ++k) r1 += leb[k] * field[k];
    }

    // R2 = -(1/4) integral |w|_+^4 div b dx
    double r2 = 0.0;
    for (std::size_t k = 0; k < total; ++k)
      r2 -= 0.25 * leb[k] * plus_sq[k] * plus_sq[k] * div_tab[k];

    const double lhs = t1 + t2 + t3;
    const double rhs = r1 + r2;
    const double scale =
        std::fabs(t1) + std::fabs(t2) + std::fabs(t3) + std::fabs(r1) + std::fabs(r2);
    r.lhs = lhs;
    r.rhs = rhs;
    r.margin = rhs - lhs;
    r.terms = {{"ddt_term", t1},        {"gradient_sq_term", t2}, {"hessian_term", t3},
               {"jacobian_form", r1},   {"divergence_term", r2},  {"term_scale", scale},
               {"relative_imbalance", scale > 0.0 ? std::fabs(lhs - rhs) / scale : 0.0}};
    r.pass = false;  // decided by the refinement ratio upstream
    out.push_back(std::move(r));
  }
  return out;
}

L4BoundReport check_l4_bound(const AprioriContext& ctx, double time, double eps0,
                        double c_eps0) {
  L4BoundReport rep;
  rep.time = time;
  rep.eps0 = eps0;
  rep.c_eps0 = c_eps0;

  const auto& snaps = ctx.solution().snapshots;
  std::vector<double> snap_times, grad4;
  for (const auto& s : snaps) {
    snap_times.push_back(s.t);
    const auto w0sq = ctx.grad_norm0_sq(s);
    double acc = 0.0;
    for (std::size_t i = 0; i < w0sq.size(); ++i)
      acc += ctx.nu().nu_weights()[i] * w0sq[i] * w0sq[i];
    grad4.push_back(acc);
  }
  rep.lhs = trapezoid_to(snap_times, grad4, time);

  const double fs = ctx.f_sup();
  const double term_alpha = time * fs * fs * fs * fs *
                            (ctx.alpha_l4_4() + ctx.alpha1_l4_4() + ctx.alpha_diff_l2_sq());
  const double cp = ctx.c_plus();
  const double term_delta2 = expm_factor(2.0 * cp, time) * fs * fs *
                             ctx.gradf_sup_plus() * ctx.gradf_sup_plus() *
                             ctx.delta_diff_minus_l2_sq();
  const double term_delta1 = 2.0 * expm_factor(cp, time) * fs * fs * fs *
                             ctx.gradf_sup_plus() * ctx.delta_diff_minus_l1();
  const double term_gradf = fs * fs * ctx.gradf_l2_0_sq();
  const double term_c = c_eps0 * ctx.f_l2() * ctx.f_l2() * fs * fs;
  rep.bracket = term_alpha + term_delta2 + term_delta1 + term_gradf + term_c;
  rep.c_empirical = rep.bracket > 0.0 ? rep.lhs / rep.bracket : 0.0;
  rep.terms = {{"alpha_term", term_alpha},   {"delta_l2_term", term_delta2},
               {"delta_l1_term", term_delta1}, {"gradf_term", term_gradf},
               {"c_eps0_term", term_c},        {"c_plus", cp}};
  return rep;
}

Eq34Report check_eq34(const DriftFieldFD& delta_drift, const MeasureOnGrid& nu,
                      const std::vector<TrialVectorField>& trials,
                      const std::vector<double>& eps_grid) {
  const GridGeometry& geom = nu.geometry();
  const int d = geom.d();
  if (delta_drift.d != d) throw DimensionError("check_eq34: drift/grid dimension mismatch");

  struct Quadruple {
    std::string name;
    double Q, G, M;
  };
  std::vector<Quadruple> rows;
  std::vector<double> x(d), jac(static_cast<std::size_t>(d) * d), wv(d),
      gv(static_cast<std::size_t>(d) * d);
  for (const auto& trial : trials) {
    if (trial.components.size() != static_cast<std::size_t>(d))
      throw DimensionError("check_eq34: trial field has wrong component count");
    double Q = 0.0, G = 0.0, M = 0.0;
    std::vector<double> grad_i(d);
    for (std::size_t node = 0; node < geom.size(); ++node) {
      geom.point(node, x);
      delta_drift.jacobian(x, jac);
      for (int i = 0; i < d; ++i) {
        wv[static_cast<std::size_t>(i)] = trial.components[static_cast<std::size_t>(i)].value(x);
        trial.components[static_cast<std::size_t>(i)].gradient(x, grad_i);
        for (int a = 0; a < d; ++a)
          gv[static_cast<std::size_t>(a) * d + i] = grad_i[static_cast<std::size_t>(a)];
      }
      const double weight = nu.nu_weights()[node];
      double q = 0.0, g = 0.0, m = 0.0;
      for (int i = 0; i < d; ++i) {
        m += wv[static_cast<std::size_t>(i)] * wv[static_cast<std::size_t>(i)];
        for (int j = 0; j < d; ++j) {
          q += jac[static_cast<std::size_t>(i) * d + j] * wv[static_cast<std::size_t>(j)] *
               wv[static_cast<std::size_t>(i)];
          g += gv[static_cast<std::size_t>(j) * d + i] * gv[static_cast<std::size_t>(j) * d + i];
        }
      }
      Q += weight * q;
      G += weight * g;
      M += weight * m;
    }
    rows.push_back({trial.name, Q, G, M});
  }

  Eq34Report rep;
  rep.eps_grid = eps_grid;
  for (double eps : eps_grid) {
    double cmin = 0.0;
    std::string binding = "none";
    for (const auto& row : rows) {
      if (row.M <= 0.0) continue;
      const double need = (row.Q - (1.0 - eps) * row.G) / row.M;
      if (need > cmin) {
        cmin = need;
        binding = row.name;
      }
    }
    rep.c_min.push_back(cmin);
    rep.binding_field.push_back(binding);
  }
  double cstar = rep.c_min.empty() ? 0.0 : rep.c_min[0];
  for (double c : rep.c_min) cstar = std::min(cstar, c);
  rep.c_estimate = cstar;
  rep.eps0_estimate = 0.0;
  for (std::size_t k = 0; k < eps_grid.size(); ++k)
    if (rep.c_min[k] <= cstar + 1e-12) rep.eps0_estimate = std::max(rep.eps0_estimate, eps_grid[k]);
  return rep;
}

void apply_richardson(EstimateReport& fine, const EstimateReport& coarse, double factor) {
  fine.budget = std::fabs(fine.margin - coarse.margin) * factor;
  fine.pass = fine.margin >= -fine.budget;
}

}  // namespace dirlab
