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

#ifndef MODCS_RIP_HPP
#define MODCS_RIP_HPP

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "modcs/linalg.hpp"
#include "modcs/rng.hpp"

namespace modcs {

/// Exact restricted-isometry constant of order S: max over all S-column
/// subsets of max(lmax(G)-1, 1-lmin(G)) with G the subset Gram matrix.
/// Throws budget_error when C(cols, S) exceeds the budget.
double delta_exact(const Mat& A, std::size_t S, std::size_t budget = 1000000);

/// Exact restricted-orthogonality constant: max spectral norm of
/// A_T1' A_T2 over disjoint subsets with |T1| = S1, |T2| = S2.
double theta_exact(const Mat& A, std::size_t S1, std::size_t S2,
                   std::size_t budget = 1000000);

/// Monte Carlo lower bounds (running max over sampled subsets). When
/// `trials` covers the full enumeration the exact value is computed instead.
/// The second member of the pair reports whether the value is exact.
std::pair<double, bool> delta_sampled(const Mat& A, std::size_t S,
                                      std::size_t trials, Rng& rng);
std::pair<double, bool> theta_sampled(const Mat& A, std::size_t S1,
                                      std::size_t S2, std::size_t trials,
                                      Rng& rng);

/// Table of restricted isometry/orthogonality constants, each entry flagged
/// exact or sampled-lower-bound. May own a matrix for compute-on-demand.
class RipTable {
 public:
  RipTable() = default;
  explicit RipTable(Mat A, std::size_t budget = 1000000);

  /// delta_S; computes exactly on demand when a matrix is attached.
  double delta(std::size_t S);
  double theta(std::size_t S1, std::size_t S2);
  bool delta_is_exact(std::size_t S) const;
  bool theta_is_exact(std::size_t S1, std::size_t S2) const;

  void set_delta(std::size_t S, double value, bool exact);
  void set_theta(std::size_t S1, std::size_t S2, double value, bool exact);
  /// Populate entries with sampled lower bounds (used past the budget).
  void sample_delta(std::size_t S, std::size_t trials, Rng& rng);
  void sample_theta(std::size_t S1, std::size_t S2, std::size_t trials, Rng& rng);

  /// All-zero table of a given dimension (orthonormal idealization).
  static RipTable all_zero(std::size_t n);

 private:
  struct Entry {
    double value = 0.0;
    bool exact = true;
  };
  std::optional<Mat> matrix_;
  std::size_t budget_ = 1000000;
  std::size_t n_ = 0;
  bool zero_default_ = false;
  std::map<std::size_t, Entry> deltas_;
  std::map<std::pair<std::size_t, std::size_t>, Entry> thetas_;
};

/// (theta_{Sc,S} + theta_{Sc,k} theta_{S,k} / (1-delta_k)) /
/// (1 - delta_S - theta_{S,k}^2 / (1-delta_k)); throws condition_violated
/// when the denominator is not positive.
double a_coeff(std::size_t k, std::size_t S, std::size_t S_check, RipTable& rip);

/// sqrt(1+delta_S) / (1 - delta_S - theta_{S,k}^2/(1-delta_k)).
double k_coeff(std::size_t k, std::size_t S, RipTable& rip);

struct ConditionTerm {
  std::string name;
  double lhs = 0.0;
  double threshold = 0.0;
  bool satisfied = false;
};

struct ConditionReport {
  std::string id;
  bool verdict = false;  // conjunction of the terms
  bool exact = false;    // every constant consumed was exact
  std::vector<ConditionTerm> terms;
  std::map<std::string, double> inputs;

  /// A sampled lower bound can prove failure but never a pass.
  bool certifies_pass() const { return verdict && exact; }
  bool certifies_fail() const { return !verdict; }
  nlohmann::json to_json() const;
};

/// Exact-recovery sufficient condition for the off-known-set l1 program:
/// delta_{k+u} < 1, delta_{2u} + delta_k + theta_{k,2u}^2 < 1 and
/// a_k(2u,u) + a_k(u,u) < 1.
ConditionReport check_exact_recovery(std::size_t k, std::size_t u, RipTable& rip);
ConditionReport check_exact_recovery_sue(std::size_t s, std::size_t u, std::size_t e,
                                   RipTable& rip);

/// Three independently sufficient delta/theta-only simplifications (each implies
/// recovery; 3 implies 2 implies 1 on a monotone table).
std::array<ConditionReport, 3> check_exact_recovery_simplified(std::size_t k, std::size_t u,
                                                RipTable& rip);
std::array<ConditionReport, 3> check_exact_recovery_simplified_sue(std::size_t s, std::size_t u,
                                                    std::size_t e, RipTable& rip);

/// Uniqueness of the combinatorial program: delta_{k+2u} < 1.
ConditionReport check_l0_uniqueness(std::size_t k, std::size_t u, RipTable& rip);
ConditionReport check_l0_uniqueness_sue(std::size_t s, std::size_t u, std::size_t e,
                                RipTable& rip);

/// Plain basis-pursuit sufficient conditions at support size s, ordered:
/// [delta_{2s} < sqrt(2)-1, delta_{2s}+delta_{3s} < 1,
///  delta_{2s}+theta_{s,s}+theta_{s,2s} < 1].
std::vector<ConditionReport> check_cs_conditions(std::size_t s, RipTable& rip);

// ---- High-probability bound calculus for Gaussian matrices ----

/// Binary entropy in nats, H(0) = H(1) = 0.
double binary_entropy(double r);

/// -1 + (1 + f)^2 with f = sqrt(n/m) (sqrt(frac) + sqrt(2 H(frac))).
double g_bound(double n_over_m, double frac);

/// Sufficient-condition aggregates (arguments are real counts; fractions
/// are taken against n).
double rho_modcs(double m, double n, double s, double u, double e);
double rho_cs(double m, double n, double s);
double rho_cs2(double m, double n, double s);

enum class BoundRule { modcs, cs, cs2 };

/// Largest real s/n satisfying the rule at a given m/n, with the
/// off-support churn pinned to u = e = s/50. Continuous bisection.
double max_sparsity_fraction(double m_over_n, BoundRule rule);

/// (s/n, rho) samples on the integer grid s = 1..n (churn rounded to the
/// nearest integer), for plotting.
std::vector<std::pair<double, double>> bound_curve(BoundRule rule,
                                                   double m_over_n,
                                                   std::size_t n = 1000);

}  // namespace modcs

#endif
