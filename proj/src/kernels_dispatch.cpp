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

#include <cstdlib>

#include "dirlab/errors.hpp"

namespace dirlab::kernels {

#ifdef DIRLAB_BUILD_AVX2
double sum_avx2(const double*, std::size_t);
double sumsq_avx2(const double*, std::size_t);
double dot_avx2(const double*, const double*, std::size_t);
double dot3_avx2(const double*, const double*, const double*, std::size_t);
double wpow4_avx2(const double*, const double*, std::size_t);
double max_abs_avx2(const double*, std::size_t);
void axpy_avx2(double, const double*, double*, std::size_t);
void hermite_batch_avx2(int, const double*, double*, std::size_t);
void stencil2d_row_avx2(const double*, const double*, const double*, const double*,
                        const double*, double*, std::size_t, double, double, double);
#endif

double (*sum)(const double*, std::size_t) = sum_ref;
double (*sumsq)(const double*, std::size_t) = sumsq_ref;
double (*dot)(const double*, const double*, std::size_t) = dot_ref;
double (*dot3)(const double*, const double*, const double*, std::size_t) = dot3_ref;
double (*wpow4)(const double*, const double*, std::size_t) = wpow4_ref;
double (*max_abs)(const double*, std::size_t) = max_abs_ref;
void (*axpy)(double, const double*, double*, std::size_t) = axpy_ref;
void (*hermite_batch)(int, const double*, double*, std::size_t) = hermite_batch_ref;
void (*stencil2d_row)(const double*, const double*, const double*, const double*,
                      const double*, double*, std::size_t, double, double, double) =
    stencil2d_row_ref;

namespace {

std::string g_active = "scalar";

bool host_has_avx2() {
#if defined(DIRLAB_BUILD_AVX2) && defined(__GNUC__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

void bind_scalar() {
  sum = sum_ref;
  sumsq = sumsq_ref;
  dot = dot_ref;
  dot3 = dot3_ref;
  wpow4 = wpow4_ref;
  max_abs = max_abs_ref;
  axpy = axpy_ref;
  hermite_batch = hermite_batch_ref;
  stencil2d_row = stencil2d_row_ref;
  g_active = "scalar";
}

#ifdef DIRLAB_BUILD_AVX2
void bind_avx2() {
  sum = sum_avx2;
  sumsq = sumsq_avx2;
  dot = dot_avx2;
  dot3 = dot3_avx2;
  wpow4 = wpow4_avx2;
  max_abs = max_abs_avx2;
  axpy = axpy_avx2;
  hermite_batch = hermite_batch_avx2;
  stencil2d_row = stencil2d_row_avx2;
  g_active = "avx2";
}
#endif

}  // namespace

std::string select(const std::string& variant) {
  std::string want = variant;
  if (want == "auto") {
    // DIRLAB_SIMD=scalar forces the reference path without a rebuild.
    if (const char* env = std::getenv("DIRLAB_SIMD")) want = env;
  }
  if (want == "auto" || want.empty()) want = host_has_avx2() ? "avx2" : "scalar";
  if (want == "scalar") {
    bind_scalar();
  } else if (want == "avx2") {
#ifdef DIRLAB_BUILD_AVX2
    if (!host_has_avx2()) throw DomainError("kernels: host does not support avx2");
    bind_avx2();
#else
    throw DomainError("kernels: avx2 variant not built");
#endif
  } else {
    throw DomainError("kernels: unknown variant '" + want + "'");
  }
  return g_active;
}

std::string active() { return g_active; }

namespace {
const bool g_init = [] {
  select("auto");
  return true;
}();
}  // namespace

}  // namespace dirlab::kernels
