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

#include "dirlab/kernels.hpp"

#include <cmath>

namespace dirlab::kernels {

double sum_ref(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i];
  return s;
}

double sumsq_ref(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
  return s;
}

double dot_ref(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

double dot3_ref(const double* x, const double* y, const double* z, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i] * z[i];
  return s;
}

double wpow4_ref(const double* w, const double* v, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v2 = v[i] * v[i];
    s += w[i] * v2 * v2;
  }
  return s;
}

double max_abs_ref(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(x[i]));
  return m;
}

void axpy_ref(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void hermite_batch_ref(int n, const double* t, double* out, std::size_t q) {
  if (n == 0) {
    for (std::size_t i = 0; i < q; ++i) out[i] = 1.0;
    return;
  }
  for (std::size_t i = 0; i < q; ++i) {
    double hkm1 = 1.0;  // H_0
    double hk = t[i];   // H_1
    for (int k = 1; k < n; ++k) {
      const double hkp1 = t[i] * hk - static_cast<double>(k) * hkm1;
      hkm1 = hk;
      hk = hkp1;
    }
    out[i] = hk;
  }
}

void stencil2d_row_ref(const double* row, const double* north, const double* south,
                       const double* b1, const double* b2, double* out,
                       std::size_t n, double dt, double inv_h2, double inv_2h) {
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double lap =
        (row[i - 1] + row[i + 1] + north[i] + south[i] - 4.0 * row[i]) * inv_h2;
    const double adv = b1[i] * (row[i + 1] - row[i - 1]) * inv_2h +
                       b2[i] * (north[i] - south[i]) * inv_2h;
    out[i] = row[i] + dt * (lap + adv);
  }
}

}  // namespace dirlab::kernels
