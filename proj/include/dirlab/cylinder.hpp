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

#ifndef DIRLAB_CYLINDER_HPP
#define DIRLAB_CYLINDER_HPP

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dirlab {

// A function of finitely many coordinates with analytic first and second
// derivatives supplied by the preset registry. Evaluator-based on purpose:
// the tests need exact gradients, not AD approximations.
struct CylinderFunction {
  std::string name;
  std::size_t base_dim = 1;
  std::function<double(std::span<const double>)> value;
  // grad[i] = d f / d x_i, 0 <= i < base_dim.
  std::function<void(std::span<const double>, std::span<double>)> gradient;
  // hess[i * base_dim + j] = d^2 f / d x_i d x_j; optional (null for presets
  // that are never run through the generator).
  std::function<void(std::span<const double>, std::span<double>)> hessian;
  std::optional<double> bound_value;     // declared sup |f|
  std::optional<double> bound_gradient;  // declared sup |grad f|_euclidean

  double eval(std::span<const double> x) const { return value(x); }
  std::vector<double> grad(std::span<const double> x) const {
    std::vector<double> g(base_dim);
    gradient(x, g);
    return g;
  }
  std::vector<double> hess(std::span<const double> x) const {
    std::vector<double> h(base_dim * base_dim);
    hessian(x, h);
    return h;
  }

  /// Max |analytic - central difference| of the gradient at x, step h.
  double gradient_fd_defect(std::span<const double> x, double h) const;
};

// Registry of named presets: "one", "coord:j", "coord_sq:j", "coord_cube:j",
// "prod:i,j", "bump:j" (exp(-x_j^2/2)), "gauss_bump" (exp(-|x|^2/2) on the
// base dimension). Indices are 1-based in the name, as in configs.
CylinderFunction make_cylinder(const std::string& name, std::size_t base_dim);

}  // namespace dirlab

#endif  // DIRLAB_CYLINDER_HPP
