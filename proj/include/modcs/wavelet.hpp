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

#ifndef MODCS_WAVELET_HPP
#define MODCS_WAVELET_HPP

#include <array>
#include <cstddef>

#include "modcs/linalg.hpp"

namespace modcs {

/// 8-tap Daubechies-4 analysis lowpass (orthonormal, sums to sqrt(2)).
extern const std::array<double, 8> kDb4Lowpass;

/// One level of the periodic orthonormal db4 transform of an even-length
/// signal: first half approximation, second half detail.
Vec dwt1_db4(const Vec& x);
Vec idwt1_db4(const Vec& coeffs);

/// Separable 2D transform of a side x side image (row-major), `levels`
/// levels, nested-quadrant layout with the approximation block top-left.
/// side must be divisible by 2^levels.
Vec dwt2_db4(const Vec& image, std::size_t side, std::size_t levels = 2);
Vec idwt2_db4(const Vec& coeffs, std::size_t side, std::size_t levels = 2);

/// Keep the percent%-energy support of the 2D db4 coefficients, zero the
/// rest, and transform back.
Vec sparsify_image(const Vec& image, std::size_t side, double percent,
                   std::size_t levels = 2);

}  // namespace modcs

#endif
