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

#include "modcs/dynamic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "modcs/errors.hpp"

namespace modcs {

std::vector<Frame> generate_sequence(const SequenceModel& model) {
  if (model.n == 0 || model.s == 0 || model.s > model.n)
    throw parameter_error("generate_sequence: need 0 < s <= n");
  if (model.walk_var < 0.0)
    throw parameter_error("generate_sequence: walk_var must be >= 0");
  if (model.laplace_scale <= 0.0)
    throw parameter_error("generate_sequence: laplace_scale must be > 0");
  // Support size is conserved per step only when additions == removals;
  // verify it stays inside [1, n] over the horizon.
  {
    long size = long(model.s);
    for (std::size_t t = 1; t <= model.t_max; ++t) {
      size += long(model.additions) - long(model.removals);
      if (size < 1 || size > long(model.n))
        throw parameter_error("generate_sequence: support size leaves [1, n]");
    }
  }

  Rng rng = Rng::stream(model.seed, {0x736571ULL});
  std::vector<Frame> frames;
  frames.reserve(model.t_max + 1);

  IndexSet support = rng.random_subset(model.n, model.s);
  Vec x(model.n, 0.0);
  if (model.compressible)
    for (std::size_t i = 0; i < model.n; ++i)
      x[i] = rng.laplace(model.laplace_scale);
  else
    std::fill(x.begin(), x.end(), 0.0);
  for (std::size_t i : support) x[i] = model.init_stddev * rng.normal();
  frames.push_back({x, support});

  const double walk_sd = std::sqrt(model.walk_var);
  for (std::size_t t = 1; t <= model.t_max; ++t) {
    IndexSet removed = rng.sample_without_replacement(support, model.removals);
    IndexSet keep = set_difference(support, removed);
    IndexSet added = rng.sample_without_replacement(
        complement(support, model.n), model.additions);
    IndexSet next_support = set_union(keep, added);

    Vec next(model.n, 0.0);
    if (model.compressible) {
      // Fresh off-support draws each frame.
      for (std::size_t i = 0; i < model.n; ++i)
        next[i] = rng.laplace(model.laplace_scale);
    }
    for (std::size_t i : keep) next[i] = x[i] + walk_sd * rng.normal();
    for (std::size_t i : added) next[i] = rng.laplace(model.laplace_scale);
    if (!model.compressible)
      for (std::size_t i : removed) next[i] = 0.0;

    x = std::move(next);
    support = std::move(next_support);
    frames.push_back({x, support});
  }
  return frames;
}

std::vector<Vec> measure_sequence(const LinearOperator& A0,
                                  const LinearOperator& A,
                                  const std::vector<Frame>& frames,
                                  double noise_var, Rng* rng) {
  if (frames.empty()) return {};
  if (A0.cols() != frames.front().x.size() || A.cols() != frames.front().x.size())
    throw parameter_error("measure_sequence: operator dimensions disagree");
  if (noise_var > 0.0 && !rng)
    throw parameter_error("measure_sequence: noise requires an rng");
  std::vector<Vec> ys;
  ys.reserve(frames.size());
  const double sd = std::sqrt(std::max(noise_var, 0.0));
  for (std::size_t t = 0; t < frames.size(); ++t) {
    const LinearOperator& op = (t == 0) ? A0 : A;
    Vec y = op.apply(frames[t].x);
    if (sd > 0.0)
      for (double& v : y) v += sd * rng->normal();
    ys.push_back(std::move(y));
  }
  return ys;
}

AlphaPolicy AlphaPolicy::fixed(double alpha) {
  if (alpha < 0.0) throw parameter_error("AlphaPolicy: alpha must be >= 0");
  return {Mode::fixed, alpha};
}

AlphaPolicy AlphaPolicy::energy(double percent) {
  if (percent <= 0.0 || percent > 100.0)
    throw parameter_error("AlphaPolicy: percent must be in (0, 100]");
  return {Mode::energy, percent};
}

double AlphaPolicy::threshold_for(const Vec& estimate) const {
  if (mode == Mode::fixed) return value;
  IndexSet es = energy_support(estimate, value);
  double smallest = std::numeric_limits<double>::infinity();
  for (std::size_t i : es)
    smallest = std::min(smallest, estimate[i] * estimate[i]);
  // Slightly below the smallest member so it stays in the thresholded set.
  return smallest * (1.0 - 1e-9);
}

namespace {

enum class Method { modcs, regmodcs, cs, diff };

DynamicTrace run_sequence(Method method, const LinearOperator& A0,
                          const LinearOperator& A,
                          const std::vector<Vec>& measurements,
                          const AlphaPolicy* alpha, double gamma,
                          const IndexSet& t0_known, const SolverConfig& cfg,
                          const std::vector<Frame>* truth) {
  const std::size_t n = A.cols();
  if (A0.cols() != n)
    throw parameter_error("dynamic: operator column counts disagree");
  if (truth && truth->size() != measurements.size())
    throw parameter_error("dynamic: truth length must match the measurements");

  DynamicTrace trace;
  IndexSet prev_support;  // estimated support fed forward
  Vec prev_x(n, 0.0);
  bool have_prev = false;

  for (std::size_t t = 0; t < measurements.size(); ++t) {
    const LinearOperator& op = (t == 0) ? A0 : A;
    const Vec& y = measurements[t];
    if (y.size() != op.rows())
      throw parameter_error("dynamic: measurement dimension mismatch");

    SolverResult r;
    switch (method) {
      case Method::modcs: {
        const IndexSet& known = (t == 0) ? t0_known : prev_support;
        r = solve_modcs(op, y, known, cfg);
        break;
      }
      case Method::regmodcs: {
        if (t == 0) {
          r = solve_modcs(op, y, t0_known, cfg);
        } else {
          Vec prior(prev_support.size());
          for (std::size_t j = 0; j < prev_support.size(); ++j)
            prior[j] = prev_x[prev_support[j]];
          r = solve_regmodcs(op, y, prev_support, prior, gamma, cfg);
        }
        break;
      }
      case Method::cs:
        r = solve_bp(op, y, cfg);
        break;
      case Method::diff: {
        if (t == 0) {
          r = solve_bp(op, y, cfg);
        } else {
          Vec resid(y);
          Vec ax = A.apply(prev_x);
          for (std::size_t i = 0; i < resid.size(); ++i) resid[i] -= ax[i];
          r = solve_bp(A, resid, cfg);
          if (r.status != SolveStatus::infeasible)
            for (std::size_t i = 0; i < n; ++i) r.x[i] += prev_x[i];
        }
        break;
      }
    }

    FrameStat stat;
    stat.t = t;
    stat.status = r.status;
    stat.iterations = r.iterations;
    stat.solver_ok = (r.status != SolveStatus::infeasible) && !r.x.empty();

    if (!stat.solver_ok && have_prev) {
      // Keep the previous estimate; reconstruction continues.
      r.x = prev_x;
    } else if (!stat.solver_ok) {
      r.x.assign(n, 0.0);
    }

    IndexSet est_support;
    if (method == Method::modcs || method == Method::regmodcs) {
      double thr = 0.0;
      if (alpha) {
        if (alpha->mode == AlphaPolicy::Mode::energy && linf(r.x) == 0.0)
          thr = 0.0;  // degenerate zero estimate, keep everything out
        else
          thr = alpha->threshold_for(r.x);
      }
      est_support = stat.solver_ok ? estimate_support(r.x, thr) : prev_support;
    } else {
      est_support = estimate_support(r.x, 0.0);
    }

    auto [adds, rems] = support_change(est_support, prev_support);
    stat.additions = adds;
    stat.removals = rems;
    stat.support_size = est_support.size();
    if (truth) stat.nrmse_value = nrmse((*truth)[t].x, r.x);

    prev_x = r.x;
    prev_support = est_support;
    have_prev = true;

    trace.results.push_back(std::move(r));
    trace.supports.push_back(std::move(est_support));
    trace.stats.push_back(stat);
  }
  return trace;
}

}  // namespace

DynamicTrace dynamic_modcs(const LinearOperator& A0, const LinearOperator& A,
                           const std::vector<Vec>& measurements,
                           const AlphaPolicy& alpha, const IndexSet& t0_known,
                           const SolverConfig& cfg,
                           const std::vector<Frame>* truth) {
  return run_sequence(Method::modcs, A0, A, measurements, &alpha, 0.0, t0_known,
                      cfg, truth);
}

DynamicTrace dynamic_regmodcs(const LinearOperator& A0, const LinearOperator& A,
                              const std::vector<Vec>& measurements,
                              const AlphaPolicy& alpha, double gamma,
                              const IndexSet& t0_known, const SolverConfig& cfg,
                              const std::vector<Frame>* truth) {
  if (gamma < 0.0) throw parameter_error("dynamic_regmodcs: gamma must be >= 0");
  return run_sequence(Method::regmodcs, A0, A, measurements, &alpha, gamma,
                      t0_known, cfg, truth);
}

DynamicTrace simple_cs(const LinearOperator& A0, const LinearOperator& A,
                       const std::vector<Vec>& measurements,
                       const SolverConfig& cfg, const std::vector<Frame>* truth) {
  return run_sequence(Method::cs, A0, A, measurements, nullptr, 0.0, {}, cfg,
                      truth);
}

DynamicTrace cs_diff(const LinearOperator& A0, const LinearOperator& A,
                     const std::vector<Vec>& measurements,
                     const SolverConfig& cfg, const std::vector<Frame>* truth) {
  return run_sequence(Method::diff, A0, A, measurements, nullptr, 0.0, {}, cfg,
                      truth);
}

std::pair<double, double> mle_params(const std::vector<Vec>& signals,
                                     const std::vector<IndexSet>& supports) {
  if (signals.size() < 2)
    throw parameter_error("mle_params: need at least two frames");
  if (supports.size() < signals.size())
    throw parameter_error("mle_params: one support per frame required");
  const std::size_t n = signals.front().size();

  double l1_off = 0.0, off_count = 0.0;
  double sq_on = 0.0, on_count = 0.0;
  for (std::size_t t = 1; t < signals.size(); ++t) {
    const IndexSet& prev = supports[t - 1];
    const Vec& xt = signals[t];
    const Vec& xp = signals[t - 1];
    if (xt.size() != n || xp.size() != n)
      throw parameter_error("mle_params: frame length mismatch");
    IndexSet off = complement(prev, n);
    for (std::size_t i : off) l1_off += std::abs(xt[i]);
    off_count += double(off.size());
    for (std::size_t i : prev) {
      double d = xt[i] - xp[i];
      sq_on += d * d;
    }
    on_count += double(prev.size());
  }
  if (off_count == 0.0)
    throw parameter_error("mle_params: every frame has a full support");
  if (on_count == 0.0)
    throw parameter_error("mle_params: every previous support is empty");
  double scale = std::max(l1_off / off_count, 1e-12);
  double var = sq_on / on_count;
  return {scale, var};
}

}  // namespace modcs
