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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "dirlab/errors.hpp"
#include "dirlab/hermite.hpp"
#include "dirlab/kernels.hpp"
#include "dirlab/rng.hpp"

using namespace dirlab;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t stream) {
  std::vector<double> v(n);
  rng::normal_fill(1234, stream, 0, v.data(), n);
  return v;
}

bool close_rel(double a, double b, double scale, double tol = 1e-12) {
  return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(scale)});
}

}  // namespace

TEST_CASE("scalar and dispatched kernels agree") {
  const std::string active = kernels::active();
  INFO("active variant: ", active);
  for (std::size_t n : {std::size_t(1), std::size_t(7), std::size_t(64), std::size_t(1003)}) {
    const auto x = random_vec(n, 1);
    const auto y = random_vec(n, 2);
    const auto z = random_vec(n, 3);
    double scale = 0.0;
    for (double v : x) scale += std::fabs(v);

    CHECK(close_rel(kernels::sum(x.data(), n), kernels::sum_ref(x.data(), n), scale));
    CHECK(close_rel(kernels::sumsq(x.data(), n), kernels::sumsq_ref(x.data(), n), scale));
    CHECK(close_rel(kernels::dot(x.data(), y.data(), n),
                    kernels::dot_ref(x.data(), y.data(), n), scale));
    CHECK(close_rel(kernels::dot3(x.data(), y.data(), z.data(), n),
                    kernels::dot3_ref(x.data(), y.data(), z.data(), n), scale));
    CHECK(close_rel(kernels::wpow4(x.data(), y.data(), n),
                    kernels::wpow4_ref(x.data(), y.data(), n), 10.0 * scale));
    CHECK(kernels::max_abs(x.data(), n) == kernels::max_abs_ref(x.data(), n));

    auto a = y, b = y;
    kernels::axpy(0.37, x.data(), a.data(), n);
    kernels::axpy_ref(0.37, x.data(), b.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(close_rel(a[i], b[i], 1.0));

    std::vector<double> ha(n), hb(n);
    for (int deg : {0, 1, 3, 7}) {
      kernels::hermite_batch(deg, x.data(), ha.data(), n);
      kernels::hermite_batch_ref(deg, x.data(), hb.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(close_rel(ha[i], hb[i], hb[i], 1e-11));
    }
  }
}

TEST_CASE("stencil row variants agree and match the five-point formula") {
  const std::size_t n = 37;
  const auto row = random_vec(n, 10);
  const auto north = random_vec(n, 11);
  const auto south = random_vec(n, 12);
  const auto b1 = random_vec(n, 13);
  const auto b2 = random_vec(n, 14);
  const double dt = 1e-3, inv_h2 = 16.0, inv_2h = 2.0;

  std::vector<double> out_disp(n, 0.0), out_ref(n, 0.0);
  kernels::stencil2d_row(row.data(), north.data(), south.data(), b1.data(), b2.data(),
                         out_disp.data(), n, dt, inv_h2, inv_2h);
  kernels::stencil2d_row_ref(row.data(), north.data(), south.data(), b1.data(), b2.data(),
                             out_ref.data(), n, dt, inv_h2, inv_2h);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    CHECK(close_rel(out_disp[i], out_ref[i], 1.0, 1e-13));
    const double lap = (row[i - 1] + row[i + 1] + north[i] + south[i] - 4.0 * row[i]) * inv_h2;
    const double adv =
        b1[i] * (row[i + 1] - row[i - 1]) * inv_2h + b2[i] * (north[i] - south[i]) * inv_2h;
    CHECK(out_ref[i] == doctest::Approx(row[i] + dt * (lap + adv)).epsilon(1e-14));
  }
}

TEST_CASE("hermite_batch matches hermite_eval") {
  const auto t = random_vec(256, 20);
  std::vector<double> out(t.size());
  for (int n : {0, 1, 2, 5, 11}) {
    kernels::hermite_batch(n, t.data(), out.data(), t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
      CHECK(out[i] == doctest::Approx(hermite_eval(n, t[i])).epsilon(1e-12));
  }
}

TEST_CASE("dispatch selection") {
  const std::string before = kernels::active();
  CHECK(kernels::select("scalar") == "scalar");
  CHECK(kernels::active() == "scalar");
  CHECK_THROWS_AS(kernels::select("sse9"), DomainError);
  kernels::select("auto");
  CHECK((kernels::active() == "scalar" || kernels::active() == "avx2"));
  kernels::select(before);
}
