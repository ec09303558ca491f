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

// AVX2/FMA variants of the inner-loop kernels. Compiled with -mavx2 -mfma in
// this translation unit only; picked at runtime by kernels::select().

#include <immintrin.h>

#include <cmath>
#include <cstddef>

namespace dirlab::kernels {

namespace {

inline double hsum(__m256d v) {
  // Lane order matches a left-to-right sum of four partial accumulators.
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(s) + _mm_cvtsd_f64(_mm_unpackhi_pd(s, s));
}

}  // namespace

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i];
  return s;
}

double sumsq_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i] * x[i];
  return s;
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double dot3_avx2(const double* x, const double* y, const double* z, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d p = _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    acc = _mm256_fmadd_pd(p, _mm256_loadu_pd(z + i), acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i] * y[i] * z[i];
  return s;
}

double wpow4_avx2(const double* w, const double* v, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vv = _mm256_loadu_pd(v + i);
    __m256d v2 = _mm256_mul_pd(vv, vv);
    __m256d v4 = _mm256_mul_pd(v2, v2);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), v4, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double v2 = v[i] * v[i];
    s += w[i] * v2 * v2;
  }
  return s;
}

double max_abs_avx2(const double* x, std::size_t n) {
  const __m256d mask = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_max_pd(acc, _mm256_andnot_pd(mask, _mm256_loadu_pd(x + i)));
  double m = 0.0;
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  for (double lane : lanes) m = std::max(m, lane);
  for (; i < n; ++i) m = std::max(m, std::fabs(x[i]));
  return m;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d r = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, r);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void hermite_batch_avx2(int n, const double* t, double* out, std::size_t q) {
  if (n == 0) {
    for (std::size_t i = 0; i < q; ++i) out[i] = 1.0;
    return;
  }
  std::size_t i = 0;
  for (; i + 4 <= q; i += 4) {
    __m256d tv = _mm256_loadu_pd(t + i);
    __m256d hkm1 = _mm256_set1_pd(1.0);
    __m256d hk = tv;
    for (int k = 1; k < n; ++k) {
      __m256d hkp1 =
          _mm256_fmsub_pd(tv, hk, _mm256_mul_pd(_mm256_set1_pd(double(k)), hkm1));
      hkm1 = hk;
      hk = hkp1;
    }
    _mm256_storeu_pd(out + i, hk);
  }
  for (; i < q; ++i) {
    double hkm1 = 1.0, hk = t[i];
    for (int k = 1; k < n; ++k) {
      const double hkp1 = t[i] * hk - static_cast<double>(k) * hkm1;
      hkm1 = hk;
      hk = hkp1;
    }
    out[i] = hk;
  }
}

void stencil2d_row_avx2(const double* row, const double* north, const double* south,
                        const double* b1, const double* b2, double* out,
                        std::size_t n, double dt, double inv_h2, double inv_2h) {
  const __m256d vdt = _mm256_set1_pd(dt);
  const __m256d vih2 = _mm256_set1_pd(inv_h2);
  const __m256d vi2h = _mm256_set1_pd(inv_2h);
  const __m256d four = _mm256_set1_pd(4.0);
  std::size_t i = 1;
  for (; i + 4 < n; i += 4) {
    __m256d c = _mm256_loadu_pd(row + i);
    __m256d w = _mm256_loadu_pd(row + i - 1);
    __m256d e = _mm256_loadu_pd(row + i + 1);
    __m256d nn = _mm256_loadu_pd(north + i);
    __m256d ss = _mm256_loadu_pd(south + i);
    __m256d lap = _mm256_mul_pd(
        _mm256_sub_pd(_mm256_add_pd(_mm256_add_pd(w, e), _mm256_add_pd(nn, ss)),
                      _mm256_mul_pd(four, c)),
        vih2);
    __m256d adv = _mm256_mul_pd(
        _mm256_add_pd(_mm256_mul_pd(_mm256_loadu_pd(b1 + i), _mm256_sub_pd(e, w)),
                      _mm256_mul_pd(_mm256_loadu_pd(b2 + i), _mm256_sub_pd(nn, ss))),
        vi2h);
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(vdt, _mm256_add_pd(lap, adv), c));
  }
  for (; i + 1 < n; ++i) {
    const double lap =
        (row[i - 1] + row[i + 1] + north[i] + south[i] - 4.0 * row[i]) * inv_h2;
    const double adv = b1[i] * (row[i + 1] - row[i - 1]) * inv_2h +
                       b2[i] * (north[i] - south[i]) * inv_2h;
    out[i] = row[i] + dt * (lap + adv);
  }
}

}  // namespace dirlab::kernels
