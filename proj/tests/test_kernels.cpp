/*  Copyright 2026 the modcs authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.  */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "modcs/kernels.hpp"
#include "modcs/rng.hpp"

using namespace modcs;

namespace {

std::vector<double> random_vec(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal();
  return v;
}

// Lengths that hit every tail path of the vectorized loops.
const std::size_t kLengths[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 33, 100, 1023};

}  // namespace

TEST_CASE("scalar backend is always available") {
  CHECK(kernels::supported(kernels::Backend::scalar));
  CHECK(kernels::set_active(kernels::Backend::scalar));
  CHECK(kernels::active() == kernels::Backend::scalar);
}

TEST_CASE("simd backends match the scalar reference") {
  using kernels::Backend;
  Rng rng = Rng::stream(7, {1});
  for (Backend b : {Backend::avx2, Backend::neon}) {
    if (!kernels::supported(b)) continue;
    INFO("backend ", kernels::name(b));
    for (std::size_t n : kLengths) {
      auto x = random_vec(n, rng);
      auto y = random_vec(n, rng);

      REQUIRE(kernels::set_active(Backend::scalar));
      double dot_ref = kernels::dot(x.data(), y.data(), n);
      double nrm_ref = kernels::nrm2_sq(x.data(), n);
      auto axpy_ref = y;
      kernels::axpy(0.37, x.data(), axpy_ref.data(), n);
      auto scal_ref = x;
      kernels::scal(-1.25, scal_ref.data(), n);

      REQUIRE(kernels::set_active(b));
      double dot_v = kernels::dot(x.data(), y.data(), n);
      double nrm_v = kernels::nrm2_sq(x.data(), n);
      auto axpy_v = y;
      kernels::axpy(0.37, x.data(), axpy_v.data(), n);
      auto scal_v = x;
      kernels::scal(-1.25, scal_v.data(), n);

      double tol = 1e-13 * (double(n) + 1.0);
      CHECK(std::abs(dot_v - dot_ref) <= tol * (1.0 + std::abs(dot_ref)));
      CHECK(std::abs(nrm_v - nrm_ref) <= tol * (1.0 + nrm_ref));
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(axpy_v[i] == doctest::Approx(axpy_ref[i]).epsilon(1e-14));
        CHECK(scal_v[i] == scal_ref[i]);  // single multiply, bit-exact
      }
    }
  }
  kernels::set_active(kernels::supported(kernels::Backend::avx2)
                          ? kernels::Backend::avx2
                          : kernels::Backend::scalar);
}

TEST_CASE("kernel semantics on known values") {
  REQUIRE(kernels::set_active(kernels::Backend::scalar));
  double x[] = {1.0, 2.0, 3.0};
  double y[] = {4.0, -5.0, 6.0};
  CHECK(kernels::dot(x, y, 3) == doctest::Approx(12.0));
  CHECK(kernels::nrm2_sq(x, 3) == doctest::Approx(14.0));
  kernels::axpy(2.0, x, y, 3);
  CHECK(y[0] == doctest::Approx(6.0));
  CHECK(y[1] == doctest::Approx(-1.0));
  CHECK(y[2] == doctest::Approx(12.0));
  kernels::scal(0.5, y, 3);
  CHECK(y[2] == doctest::Approx(6.0));
}

TEST_CASE("unsupported backend request is refused") {
#if !defined(__aarch64__)
  CHECK_FALSE(kernels::set_active(kernels::Backend::neon));
#endif
#if !defined(__x86_64__) && !defined(_M_X64)
  CHECK_FALSE(kernels::set_active(kernels::Backend::avx2));
#endif
  CHECK(kernels::set_active(kernels::Backend::scalar));
}
