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

#ifndef MODCS_FFT_HPP
#define MODCS_FFT_HPP

#include <complex>
#include <vector>

#include "modcs/linalg.hpp"

namespace modcs {

using CVec = std::vector<std::complex<double>>;

/// In-place radix-2 FFT; size must be a power of two. Unnormalized
/// (forward kernel e^{-2*pi*i*jk/N}; inverse kernel conjugated, no 1/N).
void fft_pow2(CVec& data, bool inverse);

/// Unitary 2D DFT of a side x side grid (row-major), scale 1/side overall.
CVec dft2_unitary(const CVec& grid, std::size_t side, bool inverse);

}  // namespace modcs

#endif
