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

#include "modcs/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "modcs/errors.hpp"

namespace modcs {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// SplitMix64 finalizer; bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng Rng::stream(std::uint64_t seed, std::initializer_list<std::uint64_t> ids) {
  std::uint64_t key = mix64(seed + kGolden);
  for (std::uint64_t id : ids) key = mix64(key ^ mix64(id + kGolden));
  return Rng(key);
}

std::uint64_t Rng::next_u64() { return mix64(key_ + (++ctr_) * kGolden); }

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  // u1 in (0,1] so the log is finite.
  double u1 = 1.0 - uniform();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 2.0 * std::numbers::pi * u2;
  cached_normal_ = r * std::sin(a);
  has_cached_normal_ = true;
  return r * std::cos(a);
}

double Rng::laplace(double b) {
  double u = uniform() - 0.5;
  double mag = -b * std::log(1.0 - 2.0 * std::abs(u));
  return u < 0 ? -mag : mag;
}

std::size_t Rng::below(std::size_t n) {
  if (n == 0) throw parameter_error("Rng::below: n must be positive");
  // Rejection-free modulo bias is negligible for n << 2^64, but stay exact.
  std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v = next_u64();
  while (v >= limit) v = next_u64();
  return static_cast<std::size_t>(v % n);
}

std::vector<std::size_t> Rng::sample_without_replacement(
    const std::vector<std::size_t>& pool, std::size_t count) {
  if (count > pool.size())
    throw parameter_error("sample_without_replacement: count exceeds pool size");
  std::vector<std::size_t> work(pool);
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t j = i + below(work.size() - i);
    std::swap(work[i], work[j]);
  }
  work.resize(count);
  std::sort(work.begin(), work.end());
  return work;
}

std::vector<std::size_t> Rng::random_subset(std::size_t n, std::size_t count) {
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  return sample_without_replacement(pool, count);
}

}  // namespace modcs
