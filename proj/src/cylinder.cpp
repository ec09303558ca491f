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

#include "dirlab/cylinder.hpp"

#include <cmath>

#include "dirlab/errors.hpp"

namespace dirlab {

double CylinderFunction::gradient_fd_defect(std::span<const double> x, double h) const {
  std::vector<double> xp(x.begin(), x.end());
  std::vector<double> g(base_dim);
  gradient(x, g);
  double defect = 0.0;
  for (std::size_t i = 0; i < base_dim; ++i) {
    const double xi = xp[i];
    xp[i] = xi + h;
    const double fp = value(xp);
    xp[i] = xi - h;
    const double fm = value(xp);
    xp[i] = xi;
    defect = std::max(defect, std::fabs((fp - fm) / (2.0 * h) - g[i]));
  }
  return defect;
}

namespace {

std::size_t parse_index(const std::string& name, std::size_t pos, std::size_t dim) {
  const std::size_t j = static_cast<std::size_t>(std::stoul(name.substr(pos)));
  if (j < 1 || j > dim)
    throw ConfigError("cylinder preset '" + name + "': index out of range for dim " +
                      std::to_string(dim));
  return j - 1;
}

}  // namespace

CylinderFunction make_cylinder(const std::string& name, std::size_t base_dim) {
  if (base_dim == 0) throw ConfigError("make_cylinder: base_dim must be >= 1");
  CylinderFunction f;
  f.name = name;
  f.base_dim = base_dim;
  const std::size_t dim = base_dim;

  if (name == "one") {
    f.value = [](std::span<const double>) { return 1.0; };
    f.gradient = [](std::span<const double>, std::span<double> g) {
      for (auto& v : g) v = 0.0;
    };
    f.hessian = [](std::span<const double>, std::span<double> h) {
      for (auto& v : h) v = 0.0;
    };
    f.bound_value = 1.0;
    f.bound_gradient = 0.0;
    return f;
  }
  if (name.rfind("coord:", 0) == 0) {
    const std::size_t j = parse_index(name, 6, dim);
    f.value = [j](std::span<const double> x) { return x[j]; };
    f.gradient = [j](std::span<const double>, std::span<double> g) {
      for (auto& v : g) v = 0.0;
      g[j] = 1.0;
    };
    f.hessian = [](std::span<const double>, std::span<double> h) {
      for (auto& v : h) v = 0.0;
    };
    return f;
  }
  if (name.rfind("coord_sq:", 0) == 0) {
    const std::size_t j = parse_index(name, 9, dim);
    f.value = [j](std::span<const double> x) { return x[j] * x[j]; };
    f.gradient = [j](std::span<const double> x, std::span<double> g) {
      for (auto& v : g) v = 0.0;
      g[j] = 2.0 * x[j];
    };
    f.hessian = [j, dim](std::span<const double>, std::span<double> h) {
      for (auto& v : h) v = 0.0;
      h[j * dim + j] = 2.0;
    };
    return f;
  }
  if (name.rfind("coord_cube:", 0) == 0) {
    const std::size_t j = parse_index(name, 11, dim);
    f.value = [j](std::span<const double> x) { return x[j] * x[j] * x[j]; };
    f.gradient = [j](std::span<const double> x, std::span<double> g) {
      for (auto& v : g) v = 0.0;
      g[j] = 3.0 * x[j] * x[j];
    };
    f.hessian = [j, dim](std::span<const double> x, std::span<double> h) {
      for (auto& v : h) v = 0.0;
      h[j * dim + j] = 6.0 * x[j];
    };
    return f;
  }
  if (name.rfind("prod:", 0) == 0) {
    const auto comma = name.find(',', 5);
    if (comma == std::string::npos)
      throw ConfigError("cylinder preset 'prod' expects two indices");
    const std::size_t i = parse_index(name.substr(0, comma), 5, dim);
    const std::size_t j = parse_index(name, comma + 1, dim);
    f.value = [i, j](std::span<const double> x) { return x[i] * x[j]; };
    f.gradient = [i, j](std::span<const double> x, std::span<double> g) {
      for (auto& v : g) v = 0.0;
      g[i] += x[j];
      g[j] += x[i];
    };
    f.hessian = [i, j, dim](std::span<const double>, std::span<double> h) {
      for (auto& v : h) v = 0.0;
      h[i * dim + j] += 1.0;
      h[j * dim + i] += 1.0;
    };
    return f;
  }
  if (name.rfind("bump:", 0) == 0) {
    const std::size_t j = parse_index(name, 5, dim);
    f.value = [j](std::span<const double> x) { return std::exp(-0.5 * x[j] * x[j]); };
    f.gradient = [j](std::span<const double> x, std::span<double> g) {
      for (auto& v : g) v = 0.0;
      g[j] = -x[j] * std::exp(-0.5 * x[j] * x[j]);
    };
    f.hessian = [j, dim](std::span<const double> x, std::span<double> h) {
      for (auto& v : h) v = 0.0;
      h[j * dim + j] = (x[j] * x[j] - 1.0) * std::exp(-0.5 * x[j] * x[j]);
    };
    f.bound_value = 1.0;
    f.bound_gradient = std::exp(-0.5);
    return f;
  }
  if (name == "gauss_bump") {
    f.value = [](std::span<const double> x) {
      double s = 0.0;
      for (double xi : x) s += xi * xi;
      return std::exp(-0.5 * s);
    };
    f.gradient = [](std::span<const double> x, std::span<double> g) {
      double s = 0.0;
      for (double xi : x) s += xi * xi;
      const double e = std::exp(-0.5 * s);
      for (std::size_t i = 0; i < x.size(); ++i) g[i] = -x[i] * e;
    };
    f.hessian = [dim](std::span<const double> x, std::span<double> h) {
      double s = 0.0;
      for (double xi : x) s += xi * xi;
      const double e = std::exp(-0.5 * s);
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
          h[i * dim + j] = (x[i] * x[j] - (i == j ? 1.0 : 0.0)) * e;
    };
    f.bound_value = 1.0;
    f.bound_gradient = std::exp(-0.5);
    return f;
  }
  throw ConfigError("unknown cylinder preset '" + name + "'");
}

}  // namespace dirlab
