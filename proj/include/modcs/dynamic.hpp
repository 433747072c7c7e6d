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

#ifndef MODCS_DYNAMIC_HPP
#define MODCS_DYNAMIC_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "modcs/operators.hpp"
#include "modcs/solvers.hpp"
#include "modcs/supports.hpp"

namespace modcs {

/// Generative model for a sparse (or compressible) signal sequence: the
/// support gains `additions` and loses `removals` members per step, values
/// on the carried support follow a Gaussian random walk with variance
/// walk_var, new members draw from a Laplace(laplace_scale) prior. In the
/// compressible variant the off-support entries are fresh i.i.d.
/// Laplace(laplace_scale) draws each frame instead of exact zeros.
struct SequenceModel {
  std::size_t n = 256;
  std::size_t s = 26;
  std::size_t additions = 0;  // per-step support additions
  std::size_t removals = 0;   // per-step support removals
  double walk_var = 1.0;      // on-support random-walk variance
  double laplace_scale = 1.0; // off-support / new-member Laplace scale
  std::size_t t_max = 10;     // frames are t = 0..t_max
  std::uint64_t seed = 0;
  double init_stddev = 10.0;  // initial on-support values ~ N(0, init_stddev^2)
  bool compressible = false;
};

struct Frame {
  Vec x;
  IndexSet support;
};

std::vector<Frame> generate_sequence(const SequenceModel& model);

/// y_0 = A0 x_0, y_t = A x_t for t >= 1, plus optional white Gaussian noise.
std::vector<Vec> measure_sequence(const LinearOperator& A0,
                                  const LinearOperator& A,
                                  const std::vector<Frame>& frames,
                                  double noise_var = 0.0, Rng* rng = nullptr);

/// Support-estimation threshold: either a fixed alpha (compared against
/// squared entries) or the squared magnitude of the smallest member of the
/// percent%-energy support of the current estimate (backed off a hair so
/// that member itself stays included).
struct AlphaPolicy {
  enum class Mode { fixed, energy };
  Mode mode = Mode::fixed;
  double value = 0.0;  // alpha for fixed; percent for energy

  static AlphaPolicy fixed(double alpha);
  static AlphaPolicy energy(double percent);
  double threshold_for(const Vec& estimate) const;
};

struct FrameStat {
  std::size_t t = 0;
  SolveStatus status = SolveStatus::infeasible;
  bool solver_ok = false;
  double nrmse_value = -1.0;  // -1 when no ground truth was supplied
  std::size_t support_size = 0;
  std::size_t additions = 0;  // vs the previous estimated support
  std::size_t removals = 0;
  int iterations = 0;
};

struct DynamicTrace {
  std::vector<SolverResult> results;
  std::vector<FrameStat> stats;
  std::vector<IndexSet> supports;  // estimated support per frame
};

/// Recursive reconstruction: frame 0 solved against A0 with the prior set
/// t0_known (may be empty), later frames reuse the thresholded support of
/// the previous estimate as the known set. On a failed solve the previous
/// support is carried forward and the frame is flagged.
DynamicTrace dynamic_modcs(const LinearOperator& A0, const LinearOperator& A,
                           const std::vector<Vec>& measurements,
                           const AlphaPolicy& alpha, const IndexSet& t0_known,
                           const SolverConfig& cfg = {},
                           const std::vector<Frame>* truth = nullptr);

/// As above with a quadratic pull of the known coordinates toward the
/// previous estimate (weight gamma).
DynamicTrace dynamic_regmodcs(const LinearOperator& A0, const LinearOperator& A,
                              const std::vector<Vec>& measurements,
                              const AlphaPolicy& alpha, double gamma,
                              const IndexSet& t0_known,
                              const SolverConfig& cfg = {},
                              const std::vector<Frame>* truth = nullptr);

/// Basis pursuit independently per frame.
DynamicTrace simple_cs(const LinearOperator& A0, const LinearOperator& A,
                       const std::vector<Vec>& measurements,
                       const SolverConfig& cfg = {},
                       const std::vector<Frame>* truth = nullptr);

/// Basis pursuit on the measurement residual: the recovered difference is
/// added back onto the previous estimate.
DynamicTrace cs_diff(const LinearOperator& A0, const LinearOperator& A,
                     const std::vector<Vec>& measurements,
                     const SolverConfig& cfg = {},
                     const std::vector<Frame>* truth = nullptr);

/// Closed-form estimates of (laplace_scale, walk_var) from a training
/// sequence and its per-frame supports: the Laplace scale averages the l1
/// mass off the previous support, the walk variance averages the squared
/// increments on it. The Laplace estimate is floored at 1e-12.
std::pair<double, double> mle_params(const std::vector<Vec>& signals,
                                     const std::vector<IndexSet>& supports);

}  // namespace modcs

#endif
