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

#include "dirlab/rigged.hpp"

#include <cmath>
#include <sstream>

#include "dirlab/errors.hpp"

namespace dirlab {

RiggedBasis::RiggedBasis(std::vector<double> lambdas) : lambdas_(std::move(lambdas)) {
  if (lambdas_.empty()) throw DomainError("RiggedBasis: empty eigenvalue list");
  double prev = 1.0;
  for (double l : lambdas_) {
    if (!(l >= 1.0)) throw DomainError("RiggedBasis: eigenvalues must satisfy lambda >= 1");
    if (l < prev) throw DomainError("RiggedBasis: eigenvalues must be non-decreasing");
    prev = l;
  }
}

RiggedBasis RiggedBasis::power(double p, std::size_t n) {
  if (p < 0.0) throw DomainError("RiggedBasis::power: exponent must be >= 0");
  std::vector<double> l(n);
  for (std::size_t i = 0; i < n; ++i) l[i] = std::pow(static_cast<double>(i + 1), p);
  return RiggedBasis(std::move(l));
}

RiggedBasis RiggedBasis::from_spec(const std::string& spec, std::size_t n) {
  if (spec.rfind("power:", 0) == 0) {
    return power(std::stod(spec.substr(6)), n);
  }
  if (spec.rfind("list:", 0) == 0) {
    std::vector<double> l;
    std::stringstream ss(spec.substr(5));
    std::string tok;
    while (std::getline(ss, tok, ',')) l.push_back(std::stod(tok));
    if (n != 0 && l.size() < n)
      throw DomainError("RiggedBasis::from_spec: list shorter than requested dimension");
    if (n != 0) l.resize(n);
    return RiggedBasis(std::move(l));
  }
  throw DomainError("RiggedBasis::from_spec: expected 'power:p' or 'list:...', got '" +
                    spec + "'");
}

std::vector<double> RiggedBasis::hs_partial_sums() const {
  std::vector<double> sums(lambdas_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < lambdas_.size(); ++i) {
    acc += 1.0 / (lambdas_[i] * lambdas_[i]);
    sums[i] = acc;
  }
  return sums;
}

namespace {
void check_length(const CoordinateVector& x, const RiggedBasis& basis, const char* op) {
  if (x.size() > basis.dimension())
    throw DimensionError(std::string(op) + ": vector longer than basis truncation");
}
}  // namespace

double norm_minus(const CoordinateVector& x, const RiggedBasis& basis) {
  check_length(x, basis, "norm_minus");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = x[i] / basis.lambda(i);
    s += w * w;
  }
  return std::sqrt(s);
}

double norm_plus(const CoordinateVector& x, const RiggedBasis& basis) {
  check_length(x, basis, "norm_plus");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = x[i] * basis.lambda(i);
    s += w * w;
  }
  return std::sqrt(s);
}

double norm_zero(const CoordinateVector& x) {
  double s = 0.0;
  for (double c : x.coords) s += c * c;
  return std::sqrt(s);
}

double inner_plus(const CoordinateVector& y, const CoordinateVector& z,
                  const RiggedBasis& basis) {
  if (y.size() != z.size()) throw DimensionError("inner_plus: length mismatch");
  check_length(y, basis, "inner_plus");
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double l = basis.lambda(i);
    s += l * l * y[i] * z[i];
  }
  return s;
}

CoordinateVector project(const CoordinateVector& x, std::size_t m) {
  if (m > x.size()) throw DimensionError("project: M exceeds vector length");
  return CoordinateVector(std::vector<double>(x.coords.begin(), x.coords.begin() + m));
}

}  // namespace dirlab
