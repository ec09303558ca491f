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

#include "dirlab/measure.hpp"

#include <cmath>

#include "dirlab/errors.hpp"
#include "dirlab/kernels.hpp"

namespace dirlab {

double ReferenceMeasureFD::beta_fd_defect(std::span<const double> x, double h) const {
  std::vector<double> xp(x.begin(), x.end());
  std::vector<double> b(d);
  beta(x, b);
  double defect = 0.0;
  for (int i = 0; i < d; ++i) {
    const double xi = xp[static_cast<std::size_t>(i)];
    xp[static_cast<std::size_t>(i)] = xi + h;
    const double lp = log_density(xp);
    xp[static_cast<std::size_t>(i)] = xi - h;
    const double lm = log_density(xp);
    xp[static_cast<std::size_t>(i)] = xi;
    defect = std::max(defect,
                      std::fabs((lp - lm) / (2.0 * h) - b[static_cast<std::size_t>(i)]));
  }
  return defect;
}

MeasureOnGrid::MeasureOnGrid(const ReferenceMeasureFD& measure, const GridGeometry& geom)
    : measure_(&measure), geom_(&geom) {
  if (measure.d != geom.d())
    throw DimensionError("MeasureOnGrid: measure/grid dimension mismatch");
  const std::size_t total = geom.size();
  nu_w_.resize(total);
  const int d = geom.d();
  std::vector<double> x(d);
  // Shift the log-density by its max on the grid before exponentiating.
  double logmax = -1e300;
  std::vector<double> logrho(total);
  for (std::size_t node = 0; node < total; ++node) {
    geom.point(node, x);
    logrho[node] = measure.log_density(x);
    logmax = std::max(logmax, logrho[node]);
  }
  double mass = 0.0;
  for (std::size_t node = 0; node < total; ++node) {
    nu_w_[node] = std::exp(logrho[node] - logmax) * geom.lebesgue_weights()[node];
    mass += nu_w_[node];
  }
  for (auto& w : nu_w_) w /= mass;
  if (measure.log_partition) {
    const double box_mass = std::log(mass) + logmax;
    mass_defect_ = std::fabs(std::exp(box_mass - *measure.log_partition) - 1.0);
  }

  auto fill = [&](const std::function<void(std::span<const double>, std::span<double>)>& fn,
                  std::vector<std::vector<double>>& dst) {
    dst.assign(static_cast<std::size_t>(d), std::vector<double>(total, 0.0));
    if (!fn) return;
    std::vector<double> v(d), p(d);
    for (std::size_t node = 0; node < total; ++node) {
      geom.point(node, p);
      fn(p, v);
      for (int a = 0; a < d; ++a) dst[static_cast<std::size_t>(a)][node] = v[static_cast<std::size_t>(a)];
    }
  };
  fill(measure.beta, beta_vals_);
  fill(measure.alpha_part, alpha_vals_);
  fill(measure.delta_part, delta_vals_);
}

double MeasureOnGrid::expectation(std::span<const double> field) const {
  return kernels::dot(field.data(), nu_w_.data(), field.size());
}

double MeasureOnGrid::l2_sq(std::span<const double> field) const {
  return kernels::dot3(field.data(), field.data(), nu_w_.data(), field.size());
}

double MeasureOnGrid::lp_norm(std::span<const double> field, double p) const {
  if (p == 2.0) return std::sqrt(l2_sq(field));
  if (p == 4.0) return std::pow(kernels::wpow4(nu_w_.data(), field.data(), field.size()), 0.25);
  double s = 0.0;
  for (std::size_t i = 0; i < field.size(); ++i)
    s += nu_w_[i] * std::pow(std::fabs(field[i]), p);
  return std::pow(s, 1.0 / p);
}

}  // namespace dirlab
