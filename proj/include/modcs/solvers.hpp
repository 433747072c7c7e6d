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

#ifndef MODCS_SOLVERS_HPP
#define MODCS_SOLVERS_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "modcs/linalg.hpp"
#include "modcs/operators.hpp"
#include "modcs/supports.hpp"

namespace modcs {

struct SolverConfig {
  double feas_tol = 1e-9;   // relative equality residual
  double gap_tol = 1e-9;    // relative surrogate duality gap
  int max_iters = 100;      // interior-point iterations
  double ls_alpha = 0.01;   // backtracking sufficient-decrease factor
  double ls_beta = 0.5;     // backtracking shrink factor
  double barrier_mu = 10.0; // centering-parameter update factor
  // Refit on the detected support after convergence when it preserves
  // feasibility and the objective (gives exact zeros off the support).
  bool polish = true;
};

enum class SolveStatus { converged, max_iter, infeasible };

std::string to_string(SolveStatus s);

struct SolverResult {
  Vec x;
  double objective = 0.0;       // l1 off the known set (+ quadratic term)
  double primal_residual = 0.0; // ||Ax - y|| / max(||y||, 1)
  double duality_gap = 0.0;     // relative surrogate gap at exit
  int iterations = 0;
  SolveStatus status = SolveStatus::infeasible;
  /// Equality-constraint multiplier w: at an l1 optimum, A_j'w vanishes on
  /// the known set, matches sgn(x_j) on the recovered off-set support and
  /// stays within [-1,1] elsewhere.
  Vec certificate;
  bool polished = false;
  /// Set when the known set covers every column (objective identically 0,
  /// any feasible point is optimal); the min-norm solution is returned.
  bool nonunique = false;
  /// Objective value after each iteration (diagnostics).
  Vec objective_trace;
};

/// min ||x restricted off `known`||_1  s.t. A x = y.
SolverResult solve_modcs(const LinearOperator& A, const Vec& y,
                         const IndexSet& known, const SolverConfig& cfg = {});
SolverResult solve_modcs(const Mat& A, const Vec& y, const IndexSet& known,
                         const SolverConfig& cfg = {});

/// Basis pursuit: the above with an empty known set.
SolverResult solve_bp(const LinearOperator& A, const Vec& y,
                      const SolverConfig& cfg = {});
SolverResult solve_bp(const Mat& A, const Vec& y, const SolverConfig& cfg = {});

/// min ||x off known||_1 + gamma * ||x_known - prior||_2^2  s.t. A x = y.
/// `prior` is indexed along `known` (same length and order).
SolverResult solve_regmodcs(const LinearOperator& A, const Vec& y,
                            const IndexSet& known, const Vec& prior,
                            double gamma, const SolverConfig& cfg = {});
SolverResult solve_regmodcs(const Mat& A, const Vec& y, const IndexSet& known,
                            const Vec& prior, double gamma,
                            const SolverConfig& cfg = {});

/// Combinatorial oracle: smallest number of columns outside `known` whose
/// span (together with the known columns) reproduces y.
struct L0Result {
  bool found = false;
  Vec x;                      // empty when !found
  IndexSet chosen;            // off-known support of the returned solution
  std::size_t cardinality = 0;
  bool unique_solution = false;  // single distinct minimizer at that cardinality
  std::size_t subsets_tried = 0;
};

/// Enumerates j-subsets of the complement of `known` for j = 0..max_card in
/// lexicographic order; a subset qualifies when the least-squares residual
/// is <= tol * ||y||. Throws budget_error if the enumeration would exceed
/// `budget` subsets.
L0Result solve_l0_bruteforce(const Mat& A, const Vec& y, const IndexSet& known,
                             std::size_t max_card, double tol,
                             std::size_t budget = 1000000);

/// ||truth - estimate||_2 / ||truth||_2. Throws on zero truth.
double nrmse(const Vec& truth, const Vec& estimate);

/// Exact-reconstruction predicate: nrmse < 1e-5 (strict).
bool is_exact(const Vec& truth, const Vec& estimate);

}  // namespace modcs

#endif
