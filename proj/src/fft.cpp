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

#include "modcs/fft.hpp"

#include <cmath>
#include <numbers>

#include "modcs/errors.hpp"

namespace modcs {

void fft_pow2(CVec& data, bool inverse) {
  const std::size_t n = data.size();
  if (n == 0) return;
  if ((n & (n - 1)) != 0)
    throw parameter_error("fft_pow2: size must be a power of two");
  // Bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * std::numbers::pi / double(len);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        std::complex<double> a = data[i + k];
        std::complex<double> b = data[i + k + len / 2] * w;
        data[i + k] = a + b;
        data[i + k + len / 2] = a - b;
        w *= wl;
      }
    }
  }
}

CVec dft2_unitary(const CVec& grid, std::size_t side, bool inverse) {
  if (grid.size() != side * side)
    throw parameter_error("dft2_unitary: grid size must be side^2");
  CVec out(grid);
  CVec line(side);
  for (std::size_t r = 0; r < side; ++r) {
    for (std::size_t c = 0; c < side; ++c) line[c] = out[r * side + c];
    fft_pow2(line, inverse);
    for (std::size_t c = 0; c < side; ++c) out[r * side + c] = line[c];
  }
  for (std::size_t c = 0; c < side; ++c) {
    for (std::size_t r = 0; r < side; ++r) line[r] = out[r * side + c];
    fft_pow2(line, inverse);
    for (std::size_t r = 0; r < side; ++r) out[r * side + c] = line[r];
  }
  const double scale = 1.0 / double(side);
  for (auto& v : out) v *= scale;
  return out;
}

}  // namespace modcs
