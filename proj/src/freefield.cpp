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

#include "dirlab/freefield.hpp"

#include <algorithm>
#include <cmath>

#include "dirlab/errors.hpp"
#include "dirlab/kernels.hpp"
#include "dirlab/rng.hpp"

namespace dirlab {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

RectangleDomain::RectangleDomain(double l1, double l2) : L1(l1), L2(l2) {
  if (!(L1 > 0.0) || !(L2 > 0.0))
    throw DomainError("RectangleDomain: side lengths must be positive");
}

double NeumannMode::eval(const RectangleDomain& dom, double x, double y) const {
  return norm_const * std::cos(kPi * m * x / dom.L1) * std::cos(kPi * n * y / dom.L2);
}

std::vector<NeumannMode> build_modes(const RectangleDomain& dom, std::size_t K) {
  if (K == 0) throw DomainError("build_modes: K must be >= 1");
  const int mmax = static_cast<int>(K);  // the K smallest all have indices <= K
  std::vector<NeumannMode> candidates;
  candidates.reserve(static_cast<std::size_t>(mmax + 1) * (mmax + 1));
  for (int m = 0; m <= mmax; ++m) {
    for (int n = 0; n <= mmax; ++n) {
      NeumannMode mode;
      mode.m = m;
      mode.n = n;
      mode.eigenvalue = 1.0 + kPi * kPi * m * m / (dom.L1 * dom.L1) +
                        kPi * kPi * n * n / (dom.L2 * dom.L2);
      const double cm = (m == 0 ? 1.0 : 2.0) / dom.L1;
      const double cn = (n == 0 ? 1.0 : 2.0) / dom.L2;
      mode.norm_const = std::sqrt(cm * cn);
      candidates.push_back(mode);
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const NeumannMode& a, const NeumannMode& b) {
              if (a.eigenvalue != b.eigenvalue) return a.eigenvalue < b.eigenvalue;
              if (a.m != b.m) return a.m < b.m;
              return a.n < b.n;
            });
  candidates.resize(K);
  return candidates;
}

void gauss_legendre_rule(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  // Newton iteration on P_n, Chebyshev initial guesses; symmetric rule.
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

Quadrature Quadrature::tensor_gauss_legendre(const RectangleDomain& dom, int per_axis) {
  if (per_axis < 1) throw DomainError("Quadrature: per_axis must be >= 1");
  std::vector<double> gx, gw;
  gauss_legendre_rule(per_axis, gx, gw);
  Quadrature q;
  q.x.reserve(static_cast<std::size_t>(per_axis) * per_axis);
  q.y.reserve(q.x.capacity());
  q.w.reserve(q.x.capacity());
  for (int i = 0; i < per_axis; ++i) {
    const double xi = 0.5 * dom.L1 * (gx[i] + 1.0);
    const double wi = 0.5 * dom.L1 * gw[i];
    for (int j = 0; j < per_axis; ++j) {
      q.x.push_back(xi);
      q.y.push_back(0.5 * dom.L2 * (gx[j] + 1.0));
      q.w.push_back(wi * 0.5 * dom.L2 * gw[j]);
    }
  }
  return q;
}

ModeSet::ModeSet(const RectangleDomain& dom, std::size_t K, int quad_per_axis)
    : domain_(dom), modes_(build_modes(dom, K)) {
  if (quad_per_axis <= 0) {
    // Enough nodes to resolve products of the highest cosine modes to 1e-6
    // for every preset K <= 64.
    int max_idx = 0;
    for (const auto& mode : modes_) max_idx = std::max({max_idx, mode.m, mode.n});
    quad_per_axis = std::max(24, 4 * max_idx + 16);
  }
  quad_ = Quadrature::tensor_gauss_legendre(dom, quad_per_axis);
  const std::size_t Q = quad_.size();
  mode_at_quad_.assign(modes_.size(), std::vector<double>(Q));
  cov_at_quad_.assign(Q, 0.0);
  for (std::size_t j = 0; j < modes_.size(); ++j) {
    for (std::size_t q = 0; q < Q; ++q)
      mode_at_quad_[j][q] = modes_[j].eval(domain_, quad_.x[q], quad_.y[q]);
    const double inv_lambda = 1.0 / modes_[j].eigenvalue;
    for (std::size_t q = 0; q < Q; ++q)
      cov_at_quad_[q] += inv_lambda * mode_at_quad_[j][q] * mode_at_quad_[j][q];
  }
}

double ModeSet::orthonormality_defect() const {
  double defect = 0.0;
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    for (std::size_t j = i; j < modes_.size(); ++j) {
      const double g = kernels::dot3(mode_at_quad_[i].data(), mode_at_quad_[j].data(),
                                     quad_.w.data(), quad_.size());
      defect = std::max(defect, std::fabs(g - (i == j ? 1.0 : 0.0)));
    }
  }
  return defect;
}

double h_alpha_norm(const std::vector<double>& l, const ModeSet& modes, double alpha) {
  if (l.size() > modes.K()) throw DimensionError("h_alpha_norm: length exceeds mode count");
  double s = 0.0;
  for (std::size_t j = 0; j < l.size(); ++j)
    s += std::pow(modes.lambda(j), alpha) * l[j] * l[j];
  return std::sqrt(s);
}

FieldSample sample_free_field(const ModeSet& modes, std::uint64_t seed,
                              std::uint64_t index) {
  FieldSample s;
  s.coeffs.resize(modes.K());
  for (std::size_t j = 0; j < modes.K(); ++j)
    s.coeffs[j] = rng::normal(seed, j + 1, index) / std::sqrt(modes.lambda(j));
  return s;
}

double field_point_value(const FieldSample& sample, const ModeSet& modes, double x,
                         double y) {
  if (sample.K() != modes.K())
    throw DimensionError("field_point_value: sample/mode truncation mismatch");
  if (!modes.domain().contains_closure(x, y))
    throw DomainError("field_point_value: point outside the closed rectangle");
  double v = 0.0;
  for (std::size_t j = 0; j < modes.K(); ++j)
    v += sample.coeffs[j] * modes.modes()[j].eval(modes.domain(), x, y);
  return v;
}

double local_variance(const ModeSet& modes, double x, double y) {
  if (!modes.domain().contains_closure(x, y))
    throw DomainError("local_variance: point outside the closed rectangle");
  double c = 0.0;
  for (std::size_t j = 0; j < modes.K(); ++j) {
    const double e = modes.modes()[j].eval(modes.domain(), x, y);
    c += e * e / modes.lambda(j);
  }
  return c;
}

bool rigging_admissible(double alpha_idx, double delta_idx) {
  if (!(delta_idx > 0.0)) return false;
  return alpha_idx > std::max(0.0, 1.0 - 0.5 * delta_idx);
}

}  // namespace dirlab
