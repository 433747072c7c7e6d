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

#ifndef MODCS_KERNELS_HPP
#define MODCS_KERNELS_HPP

#include <cstddef>
#include <string>

namespace modcs::kernels {

/// Vectorized double-precision inner loops behind all dense linear algebra.
/// A scalar reference implementation always exists; SIMD variants are
/// selected at runtime (or forced via MODCS_BACKEND=scalar|avx2|neon).
enum class Backend { scalar, avx2, neon };

Backend active();
bool supported(Backend b);
/// Force a backend. Returns false (and leaves the active one) if the CPU
/// does not support it.
bool set_active(Backend b);
std::string name(Backend b);

struct KernelTable {
  double (*dot)(const double*, const double*, std::size_t);
  double (*nrm2_sq)(const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*scal)(double, double*, std::size_t);
};

namespace detail {
extern const KernelTable scalar_table;
#if defined(__x86_64__) || defined(_M_X64)
extern const KernelTable avx2_table;
#endif
#if defined(__aarch64__)
extern const KernelTable neon_table;
#endif
const KernelTable& current();
}  // namespace detail

inline double dot(const double* x, const double* y, std::size_t n) {
  return detail::current().dot(x, y, n);
}
inline double nrm2_sq(const double* x, std::size_t n) {
  return detail::current().nrm2_sq(x, n);
}
/// y += a*x
inline void axpy(double a, const double* x, double* y, std::size_t n) {
  detail::current().axpy(a, x, y, n);
}
/// x *= a
inline void scal(double a, double* x, std::size_t n) {
  detail::current().scal(a, x, n);
}

}  // namespace modcs::kernels

#endif
