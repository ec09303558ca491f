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

#ifndef DIRLAB_RIGGED_HPP
#define DIRLAB_RIGGED_HPP

#include <string>
#include <vector>

namespace dirlab {

/// Coefficients of a vector in the eigenbasis of the rigging operator.
struct CoordinateVector {
  std::vector<double> coords;

  CoordinateVector() = default;
  explicit CoordinateVector(std::vector<double> c) : coords(std::move(c)) {}
  std::size_t size() const { return coords.size(); }
  double& operator[](std::size_t i) { return coords[i]; }
  double operator[](std::size_t i) const { return coords[i]; }
};

// Truncated eigenvalue data of the rigging operator T >= 1. The scale of
// spaces H_+ c H_0 c H_- is carried entirely by the weights lambda_i: the
// minus/plus norms weight coordinates by lambda_i^{-2} resp. lambda_i^{+2},
// and P_N keeps the first N coordinates.
class RiggedBasis {
 public:
  // Throws DomainError unless the sequence is non-decreasing with values >= 1.
  explicit RiggedBasis(std::vector<double> lambdas);

  /// lambda_i = i^p for i = 1..n.
  static RiggedBasis power(double p, std::size_t n);

  // Parses "power:p" (with dimension n) or "list:l1,l2,...".
  static RiggedBasis from_spec(const std::string& spec, std::size_t n);

  std::size_t dimension() const { return lambdas_.size(); }
  double lambda(std::size_t i) const { return lambdas_[i]; }
  const std::vector<double>& lambdas() const { return lambdas_; }

  /// Partial sums of lambda_i^{-2} for i <= m, m = 1..N (Hilbert-Schmidt tail).
  std::vector<double> hs_partial_sums() const;

 private:
  std::vector<double> lambdas_;
};

double norm_minus(const CoordinateVector& x, const RiggedBasis& basis);
double norm_plus(const CoordinateVector& x, const RiggedBasis& basis);
double norm_zero(const CoordinateVector& x);
double inner_plus(const CoordinateVector& y, const CoordinateVector& z,
                  const RiggedBasis& basis);

/// First M coordinates of x; M must not exceed the length of x.
CoordinateVector project(const CoordinateVector& x, std::size_t m);

}  // namespace dirlab

#endif  // DIRLAB_RIGGED_HPP
