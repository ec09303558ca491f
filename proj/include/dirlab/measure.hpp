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

#ifndef DIRLAB_MEASURE_HPP
#define DIRLAB_MEASURE_HPP

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dirlab/fdgrid.hpp"

namespace dirlab {

// Reference probability measure on the grid box: density up to normalization,
// its logarithmic derivative beta = grad log rho, and the alpha/delta split
// chosen by the experiment.
struct ReferenceMeasureFD {
  std::string name;
  int d = 1;
  std::function<double(std::span<const double>)> log_density;
  std::function<void(std::span<const double>, std::span<double>)> beta;
  std::function<void(std::span<const double>, std::span<double>)> alpha_part;
  std::function<void(std::span<const double>, std::span<double>)> delta_part;
  /// jac[i*d + j] = d delta_j / d x_i; finite-differenced from delta_part
  /// when absent.
  std::function<void(std::span<const double>, std::span<double>)> delta_jacobian;
  /// log of the full-space partition function, when known in closed form;
  /// used to certify that the box carries all but <= 1e-6 of the mass.
  std::optional<double> log_partition;

  double beta_fd_defect(std::span<const double> x, double h) const;
};

// The measure realized on a grid: normalized node weights and cached drift
// component tables. All L^p(nu) norms of grid fields go through here.
class MeasureOnGrid {
 public:
  MeasureOnGrid(const ReferenceMeasureFD& measure, const GridGeometry& geom);

  const ReferenceMeasureFD& measure() const { return *measure_; }
  const GridGeometry& geometry() const { return *geom_; }
  const std::vector<double>& nu_weights() const { return nu_w_; }
  /// |box mass / full mass - 1| when the partition function is known, else 0.
  double mass_defect() const { return mass_defect_; }

  double expectation(std::span<const double> field) const;
  double l2_sq(std::span<const double> field) const;
  double lp_norm(std::span<const double> field, double p) const;

  const std::vector<double>& beta_component(int a) const { return beta_vals_[a]; }
  const std::vector<double>& alpha_component(int a) const { return alpha_vals_[a]; }
  const std::vector<double>& delta_component(int a) const { return delta_vals_[a]; }

 private:
  const ReferenceMeasureFD* measure_;
  const GridGeometry* geom_;
  std::vector<double> nu_w_;
  double mass_defect_ = 0.0;
  std::vector<std::vector<double>> beta_vals_, alpha_vals_, delta_vals_;
};

}  // namespace dirlab

#endif  // DIRLAB_MEASURE_HPP
