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

#include "modcs/wavelet.hpp"

#include "modcs/errors.hpp"
#include "modcs/supports.hpp"

namespace modcs {

const std::array<double, 8> kDb4Lowpass = {
    0.230377813308855,  0.714846570552542,  0.630880767929590,
    -0.027983769416984, -0.187034811718881, 0.030841381835987,
    0.032883011666983,  -0.010597401784997};

namespace {

// Quadrature mirror highpass: g[k] = (-1)^k h[7-k].
std::array<double, 8> highpass() {
  std::array<double, 8> g{};
  for (std::size_t k = 0; k < 8; ++k)
    g[k] = (k % 2 == 0 ? 1.0 : -1.0) * kDb4Lowpass[7 - k];
  return g;
}

const std::array<double, 8> kDb4Highpass = highpass();

}  // namespace

Vec dwt1_db4(const Vec& x) {
  const std::size_t n = x.size();
  if (n < 2 || n % 2 != 0)
    throw parameter_error("dwt1_db4: length must be even and >= 2");
  const std::size_t half = n / 2;
  Vec out(n, 0.0);
  for (std::size_t i = 0; i < half; ++i) {
    double a = 0.0, d = 0.0;
    for (std::size_t k = 0; k < 8; ++k) {
      double v = x[(2 * i + k) % n];
      a += kDb4Lowpass[k] * v;
      d += kDb4Highpass[k] * v;
    }
    out[i] = a;
    out[half + i] = d;
  }
  return out;
}

Vec idwt1_db4(const Vec& coeffs) {
  const std::size_t n = coeffs.size();
  if (n < 2 || n % 2 != 0)
    throw parameter_error("idwt1_db4: length must be even and >= 2");
  const std::size_t half = n / 2;
  Vec x(n, 0.0);
  for (std::size_t i = 0; i < half; ++i) {
    for (std::size_t k = 0; k < 8; ++k) {
      x[(2 * i + k) % n] +=
          kDb4Lowpass[k] * coeffs[i] + kDb4Highpass[k] * coeffs[half + i];
    }
  }
  return x;
}

namespace {

void check_dims(std::size_t side, std::size_t levels, std::size_t size,
                const char* who) {
  if (levels == 0) throw parameter_error(std::string(who) + ": levels must be >= 1");
  if (size != side * side)
    throw parameter_error(std::string(who) + ": image size must be side^2");
  std::size_t div = std::size_t{1} << levels;
  if (side % div != 0 || side / div == 0)
    throw parameter_error(std::string(who) +
                          ": side must be divisible by 2^levels");
}

// Transform the rows then columns of the leading sz x sz block.
void level_forward(Vec& grid, std::size_t side, std::size_t sz) {
  Vec line(sz);
  for (std::size_t r = 0; r < sz; ++r) {
    for (std::size_t c = 0; c < sz; ++c) line[c] = grid[r * side + c];
    Vec t = dwt1_db4(line);
    for (std::size_t c = 0; c < sz; ++c) grid[r * side + c] = t[c];
  }
  for (std::size_t c = 0; c < sz; ++c) {
    for (std::size_t r = 0; r < sz; ++r) line[r] = grid[r * side + c];
    Vec t = dwt1_db4(line);
    for (std::size_t r = 0; r < sz; ++r) grid[r * side + c] = t[r];
  }
}

void level_inverse(Vec& grid, std::size_t side, std::size_t sz) {
  Vec line(sz);
  for (std::size_t c = 0; c < sz; ++c) {
    for (std::size_t r = 0; r < sz; ++r) line[r] = grid[r * side + c];
    Vec t = idwt1_db4(line);
    for (std::size_t r = 0; r < sz; ++r) grid[r * side + c] = t[r];
  }
  for (std::size_t r = 0; r < sz; ++r) {
    for (std::size_t c = 0; c < sz; ++c) line[c] = grid[r * side + c];
    Vec t = idwt1_db4(line);
    for (std::size_t c = 0; c < sz; ++c) grid[r * side + c] = t[c];
  }
}

}  // namespace

Vec dwt2_db4(const Vec& image, std::size_t side, std::size_t levels) {
  check_dims(side, levels, image.size(), "dwt2_db4");
  Vec grid(image);
  std::size_t sz = side;
  for (std::size_t l = 0; l < levels; ++l) {
    level_forward(grid, side, sz);
    sz /= 2;
  }
  return grid;
}

Vec idwt2_db4(const Vec& coeffs, std::size_t side, std::size_t levels) {
  check_dims(side, levels, coeffs.size(), "idwt2_db4");
  Vec grid(coeffs);
  std::size_t sz = side >> (levels - 1);
  for (std::size_t l = 0; l < levels; ++l) {
    level_inverse(grid, side, sz);
    sz *= 2;
  }
  return grid;
}

Vec sparsify_image(const Vec& image, std::size_t side, double percent,
                   std::size_t levels) {
  Vec coeffs = dwt2_db4(image, side, levels);
  IndexSet keep = energy_support(coeffs, percent);
  Vec kept(coeffs.size(), 0.0);
  for (std::size_t i : keep) kept[i] = coeffs[i];
  return idwt2_db4(kept, side, levels);
}

}  // namespace modcs
