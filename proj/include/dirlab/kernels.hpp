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

#ifndef DIRLAB_KERNELS_HPP
#define DIRLAB_KERNELS_HPP

#include <cstddef>
#include <string>

namespace dirlab::kernels {

// Data-parallel inner loops, dispatched at startup to the best variant the
// CPU supports. Scalar implementations (suffix _ref) are the reference; the
// AVX2 variants must agree with them up to floating-point reassociation.
//
// All reductions accumulate in fixed lane order so that results are
// reproducible run-to-run on the same build and host.

double sum_ref(const double* x, std::size_t n);
double sumsq_ref(const double* x, std::size_t n);
double dot_ref(const double* x, const double* y, std::size_t n);
double dot3_ref(const double* x, const double* y, const double* z, std::size_t n);
double wpow4_ref(const double* w, const double* v, std::size_t n);
double max_abs_ref(const double* x, std::size_t n);
void axpy_ref(double a, const double* x, double* y, std::size_t n);
// out[q] = H_n(t[q]), probabilists' three-term recurrence.
void hermite_batch_ref(int n, const double* t, double* out, std::size_t q);
// One interior row of the explicit Euler step for du/dt = lap(u) + b.grad(u)
// on a uniform 2-d grid: `row` is the current row, `north`/`south` its
// neighbours, b1/b2 the drift components on this row. Central differences;
// the caller falls back to a scalar path when upwinding is active.
void stencil2d_row_ref(const double* row, const double* north, const double* south,
                       const double* b1, const double* b2, double* out,
                       std::size_t n, double dt, double inv_h2, double inv_2h);

extern double (*sum)(const double*, std::size_t);
extern double (*sumsq)(const double*, std::size_t);
extern double (*dot)(const double*, const double*, std::size_t);
extern double (*dot3)(const double*, const double*, const double*, std::size_t);
extern double (*wpow4)(const double*, const double*, std::size_t);
extern double (*max_abs)(const double*, std::size_t);
extern void (*axpy)(double, const double*, double*, std::size_t);
extern void (*hermite_batch)(int, const double*, double*, std::size_t);
extern void (*stencil2d_row)(const double*, const double*, const double*,
                             const double*, const double*, double*,
                             std::size_t, double, double, double);

// Selects a dispatch target: "scalar", "avx2" or "auto". Returns the name of
// the active variant. Called with "auto" once at startup; tests use it to
// force the scalar path. Throws DomainError for unknown names or when the
// requested variant is unavailable on this host.
std::string select(const std::string& variant = "auto");

// Name of the active variant ("scalar" or "avx2").
std::string active();

}  // namespace dirlab::kernels

#endif  // DIRLAB_KERNELS_HPP
