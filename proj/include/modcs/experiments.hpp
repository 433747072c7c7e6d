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

#ifndef MODCS_EXPERIMENTS_HPP
#define MODCS_EXPERIMENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "modcs/solvers.hpp"

namespace modcs {

/// Monte Carlo configuration shared by the recovery-probability, noisy and
/// regularized sweeps. Fractions are rounded half-up to integer sizes.
struct ExperimentConfig {
  std::size_t n = 256;
  std::size_t s = 26;
  std::vector<double> m_fracs = {0.19};   // of n
  std::vector<double> u_fracs = {0.08};   // of s
  std::vector<double> e_fracs = {0.08};   // of s
  std::size_t trials = 500;
  std::uint64_t seed = 0;
  double signal_stddev = 10.0;            // on-support prior N(0, stddev^2)
  std::vector<double> noise_vars;         // noisy sweep only
  std::vector<double> gammas;             // regularized sweep only
  SolverConfig solver;
  unsigned threads = 0;                   // 0 = hardware concurrency

  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct CellResult {
  std::size_t m = 0, u = 0, e = 0;
  double m_frac = 0, u_frac = 0, e_frac = 0;
  double noise_var = 0.0;
  double gamma = 0.0;
  std::size_t trials = 0;
  // Recovery probabilities with binomial standard errors.
  double prob = 0.0, prob_se = 0.0;         // known-set-aware solver
  double prob_cs = 0.0, prob_cs_se = 0.0;   // plain basis pursuit
  // Monte Carlo N-RMSE, sqrt(sum ||err||^2 / sum ||x||^2), with trial SD.
  double nrmse = 0.0, nrmse_se = 0.0;
  double nrmse_cs = 0.0, nrmse_cs_se = 0.0;
  std::size_t excluded = 0, excluded_cs = 0;  // unusable solves (by method)
};

struct ExperimentReport {
  std::string kind;
  std::string config_json;  // serialized echo of the generating config
  std::vector<CellResult> cells;
  double wall_seconds = 0.0;

  nlohmann::json to_json(bool include_wall_clock = true) const;
  /// CSV: header plus one row per cell (no wall clock, byte-stable).
  std::string to_csv() const;
};

/// Per-cell exact-reconstruction probability for the known-set solver and
/// plain basis pursuit on identical draws. One matrix per m value, reused
/// across that column's trials.
ExperimentReport exact_recon_probability(const ExperimentConfig& cfg);

/// Noisy-measurement sweep: per noise variance, Monte Carlo N-RMSE of both
/// methods; trials whose equality solve is unusable are excluded and counted.
ExperimentReport noisy_nrmse(const ExperimentConfig& cfg);

/// Regularized sweep over gamma (gamma = 0 is the unregularized solver):
/// recovery probability and N-RMSE under the signed-prior signal model
/// (prior entries +-1 on the carried support, +-0.25 on changed entries,
/// signal values N(prior, 0.01)).
ExperimentReport regmodcs_sweep(const ExperimentConfig& cfg);

}  // namespace modcs

#endif
