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

#ifndef MODCS_RNG_HPP
#define MODCS_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <vector>

namespace modcs {

/// Counter-based generator: output i of a stream is a hash of (key, i), so
/// any (seed, stream id) pair yields the same draws regardless of thread
/// scheduling or platform. Monte Carlo code derives one stream per trial.
class Rng {
 public:
  explicit Rng(std::uint64_t key) : key_(key) {}

  /// Derive a stream key from a seed and a list of ids (cell index, trial
  /// index, ...). Different id lists give statistically independent streams.
  static Rng stream(std::uint64_t seed, std::initializer_list<std::uint64_t> ids);

  std::uint64_t next_u64();
  /// Uniform on [0, 1).
  double uniform();
  /// Standard normal (Box-Muller; portable across platforms).
  double normal();
  /// Zero-mean Laplace with scale b (mean absolute value = b).
  double laplace(double b);
  /// Uniform integer in [0, n). n must be > 0.
  std::size_t below(std::size_t n);

  /// count distinct elements of pool, uniformly, sorted ascending.
  std::vector<std::size_t> sample_without_replacement(
      const std::vector<std::size_t>& pool, std::size_t count);
  /// count distinct elements of [0, n), uniformly, sorted ascending.
  std::vector<std::size_t> random_subset(std::size_t n, std::size_t count);

 private:
  std::uint64_t key_ = 0;
  std::uint64_t ctr_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace modcs

#endif
