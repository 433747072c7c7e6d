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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "modcs/errors.hpp"
#include "modcs/operators.hpp"
#include "modcs/rng.hpp"
#include "modcs/solvers.hpp"
#include "oracles.hpp"

using namespace modcs;

namespace {

Mat random_gaussian(std::size_t m, std::size_t n, std::uint64_t seed) {
  return gaussian_operator(m, n, seed).dense();
}

Vec sparse_signal(std::size_t n, const IndexSet& support, Rng& rng,
                  double stddev = 10.0) {
  Vec x(n, 0.0);
  for (std::size_t i : support) x[i] = stddev * rng.normal();
  return x;
}

}  // namespace

TEST_CASE("nrmse and the exactness predicate") {
  Vec x = {3, 4};
  CHECK(nrmse(x, x) == doctest::Approx(0.0));
  CHECK(nrmse(x, Vec{0, 0}) == doctest::Approx(1.0));
  CHECK(nrmse(x, Vec{0, 4}) == doctest::Approx(0.6));
  CHECK_THROWS_AS(nrmse(Vec{0, 0}, x), parameter_error);
  CHECK(is_exact(x, x));
  Vec near = x;
  near[0] += 5.000001e-5;  // relative error a hair above 1e-5: strict reject
  CHECK_FALSE(is_exact(x, near));
  Vec close = x;
  close[0] += 4.9e-5;  // just under the threshold
  CHECK(is_exact(x, close));
}

TEST_CASE("known superset of the support gives back the signal") {
  Rng rng = Rng::stream(31, {0});
  Mat A = random_gaussian(6, 10, 31);
  IndexSet support = {1, 4, 8};
  Vec x = sparse_signal(10, support, rng);
  Vec y = gemv(A, x);
  IndexSet known = {1, 2, 4, 8};  // covers the support
  SolverResult r = solve_modcs(A, y, known);
  REQUIRE(r.status == SolveStatus::converged);
  CHECK(nrmse(x, r.x) <= 1e-8);
  CHECK(r.objective <= 1e-8);
}

TEST_CASE("empty known set reduces to basis pursuit") {
  Rng rng = Rng::stream(32, {0});
  Mat A = random_gaussian(8, 16, 32);
  Vec x = sparse_signal(16, {2, 9}, rng);
  Vec y = gemv(A, x);
  SolverResult a = solve_modcs(A, y, {});
  SolverResult b = solve_bp(A, y);
  REQUIRE(a.status == SolveStatus::converged);
  REQUIRE(b.status == SolveStatus::converged);
  for (std::size_t i = 0; i < 16; ++i)
    CHECK(a.x[i] == doctest::Approx(b.x[i]).epsilon(1e-8));
}

TEST_CASE("zero measurements give the zero signal") {
  Mat A = random_gaussian(5, 12, 33);
  SolverResult r = solve_bp(A, Vec(5, 0.0));
  REQUIRE(r.status == SolveStatus::converged);
  CHECK(linf(r.x) <= 1e-10);
  CHECK(r.objective <= 1e-10);
}

TEST_CASE("matches the combinatorial oracle on a small instance") {
  Rng rng = Rng::stream(34, {0});
  Mat A = random_gaussian(6, 8, 34);
  IndexSet support = {0, 3, 6};
  Vec x = sparse_signal(8, support, rng);
  Vec y = gemv(A, x);
  IndexSet known = {0, 3};  // one support member missing
  SolverResult r = solve_modcs(A, y, known);
  L0Result l0 = solve_l0_bruteforce(A, y, known, 3, 1e-9);
  REQUIRE(r.status == SolveStatus::converged);
  REQUIRE(l0.found);
  CHECK(l0.cardinality == 1);
  for (std::size_t i = 0; i < 8; ++i)
    CHECK(r.x[i] == doctest::Approx(l0.x[i]).epsilon(1e-6));
}

TEST_CASE("objective matches an independent lp on random instances") {
  Rng rng = Rng::stream(35, {0});
  for (int rep = 0; rep < 12; ++rep) {
    std::size_t n = 8 + rng.below(12);
    std::size_t m = 4 + rng.below(n - 4);
    Mat A = random_gaussian(m, n, 1000 + rep);
    IndexSet support = rng.random_subset(n, std::max<std::size_t>(1, m / 3));
    Vec x = sparse_signal(n, support, rng, 3.0);
    Vec y = gemv(A, x);
    IndexSet known = rng.random_subset(n, rng.below(n / 2));

    SolverResult r = solve_modcs(A, y, known);
    REQUIRE(r.status == SolveStatus::converged);
    auto lp = oracles::l1_objective_lp(A, y, known);
    REQUIRE(lp.has_value());
    CHECK(r.objective ==
          doctest::Approx(*lp).epsilon(1e-6).scale(std::max(1.0, *lp)));
  }
}

TEST_CASE("kkt certificate at the optimum") {
  Rng rng = Rng::stream(36, {0});
  Mat A = random_gaussian(10, 24, 36);
  IndexSet support = {3, 11, 17};
  Vec x = sparse_signal(24, support, rng);
  Vec y = gemv(A, x);
  IndexSet known = {3, 5};
  SolverResult r = solve_modcs(A, y, known);
  REQUIRE(r.status == SolveStatus::converged);
  Vec atw = gemv_t(A, r.certificate);
  IndexSet comp = complement(known, 24);
  for (std::size_t j : known) CHECK(std::abs(atw[j]) <= 1e-6);
  double thr = 1e-7 * linf(r.x);
  for (std::size_t j : comp) {
    CHECK(std::abs(atw[j]) <= 1.0 + 1e-6);
    if (std::abs(r.x[j]) > thr)
      CHECK(atw[j] == doctest::Approx(r.x[j] > 0 ? 1.0 : -1.0).epsilon(1e-6));
  }
}

TEST_CASE("scaling the instance leaves the solution unchanged") {
  Rng rng = Rng::stream(37, {0});
  Mat A = random_gaussian(8, 16, 37);
  Vec x = sparse_signal(16, {1, 7, 12}, rng);
  Vec y = gemv(A, x);
  SolverResult base = solve_modcs(A, y, {1});
  Mat As = A;
  Vec ys = y;
  for (auto& v : As.a) v *= 50.0;
  for (auto& v : ys) v *= 50.0;
  SolverResult scaled = solve_modcs(As, ys, {1});
  REQUIRE(base.status == SolveStatus::converged);
  REQUIRE(scaled.status == SolveStatus::converged);
  for (std::size_t i = 0; i < 16; ++i)
    CHECK(scaled.x[i] == doctest::Approx(base.x[i]).epsilon(1e-8).scale(1.0));
}

TEST_CASE("inconsistent measurements are reported infeasible") {
  Mat A(4, 6);
  Rng rng = Rng::stream(38, {0});
  for (std::size_t j = 0; j < 6; ++j) {
    double v = rng.normal();
    A(0, j) = v;
    A(1, j) = 2.0 * v;  // rank-deficient rows
    A(2, j) = rng.normal();
    A(3, j) = rng.normal();
  }
  Vec y = {1.0, 0.0, 0.5, -0.25};  // violates y[1] = 2 y[0]
  SolverResult r = solve_modcs(A, y, {});
  CHECK(r.status == SolveStatus::infeasible);
}

TEST_CASE("known set covering every column returns the min-norm point") {
  Mat A = random_gaussian(4, 6, 39);
  Rng rng = Rng::stream(39, {0});
  Vec x = sparse_signal(6, {0, 2, 4}, rng);
  Vec y = gemv(A, x);
  IndexSet all = {0, 1, 2, 3, 4, 5};
  SolverResult r = solve_modcs(A, y, all);
  REQUIRE(r.status == SolveStatus::converged);
  CHECK(r.nonunique);
  CHECK(r.objective == doctest::Approx(0.0));
  MinNorm mn = min_norm_solution(A, y);
  for (std::size_t i = 0; i < 6; ++i)
    CHECK(r.x[i] == doctest::Approx(mn.x[i]).epsilon(1e-9));
}

TEST_CASE("regularized solver reduces to the plain one at gamma zero") {
  Rng rng = Rng::stream(40, {0});
  Mat A = random_gaussian(8, 16, 40);
  Vec x = sparse_signal(16, {2, 6, 13}, rng);
  Vec y = gemv(A, x);
  IndexSet known = {2, 6};
  Vec prior = {x[2], x[6]};
  SolverResult reg = solve_regmodcs(A, y, known, prior, 0.0);
  SolverResult plain = solve_modcs(A, y, known);
  for (std::size_t i = 0; i < 16; ++i)
    CHECK(reg.x[i] == doctest::Approx(plain.x[i]).epsilon(1e-7).scale(1.0));
}

TEST_CASE("regularized objective beats random feasible points") {
  Rng rng = Rng::stream(41, {0});
  Mat A = random_gaussian(4, 6, 41);
  Vec x = sparse_signal(6, {1, 3}, rng, 2.0);
  Vec y = gemv(A, x);
  IndexSet known = {1, 5};
  Vec prior = {x[1] + 0.1, -0.2};
  const double gamma = 0.7;
  SolverResult r = solve_regmodcs(A, y, known, prior, gamma);
  REQUIRE(r.status == SolveStatus::converged);

  auto objective = [&](const Vec& z) {
    double o = std::abs(z[0]) + std::abs(z[2]) + std::abs(z[3]) + std::abs(z[4]);
    o += gamma * ((z[1] - prior[0]) * (z[1] - prior[0]) +
                  (z[5] - prior[1]) * (z[5] - prior[1]));
    return o;
  };
  CHECK(r.objective == doctest::Approx(objective(r.x)).epsilon(1e-9));

  MinNorm part = min_norm_solution(A, y);
  REQUIRE(part.ok);
  Mat Z = oracles::nullspace_basis(A);
  for (int t = 0; t < 200; ++t) {
    Vec z = part.x;
    for (std::size_t c = 0; c < Z.cols; ++c) {
      double coef = 3.0 * rng.normal();
      for (std::size_t i = 0; i < 6; ++i) z[i] += coef * Z(i, c);
    }
    CHECK(objective(z) >= r.objective - 1e-7);
  }
}

TEST_CASE("regularized objective trace is non-increasing") {
  Rng rng = Rng::stream(42, {0});
  Mat A = random_gaussian(10, 20, 42);
  Vec x = sparse_signal(20, {1, 5, 9, 15}, rng, 1.0);
  Vec y = gemv(A, x);
  IndexSet known = {1, 5, 9};
  Vec prior = {x[1], x[5], x[9]};
  SolverResult r = solve_regmodcs(A, y, known, prior, 0.5);
  REQUIRE(r.status == SolveStatus::converged);
  REQUIRE(r.objective_trace.size() > 3);
  double slack = 1e-7 * (1.0 + std::abs(r.objective_trace.front()));
  for (std::size_t i = 1; i < r.objective_trace.size(); ++i)
    CHECK(r.objective_trace[i] <= r.objective_trace[i - 1] + slack);
}

TEST_CASE("combinatorial oracle basics") {
  Rng rng = Rng::stream(43, {0});
  Mat A = random_gaussian(8, 10, 43);
  IndexSet support = {2, 4, 7};
  Vec x = sparse_signal(10, support, rng);
  Vec y = gemv(A, x);

  // Support inside the known set: cardinality-zero solution.
  L0Result covered = solve_l0_bruteforce(A, y, {2, 4, 7, 9}, 2, 1e-9);
  REQUIRE(covered.found);
  CHECK(covered.cardinality == 0);
  CHECK(nrmse(x, covered.x) <= 1e-8);

  // One member missing.
  L0Result missing = solve_l0_bruteforce(A, y, {2, 4}, 3, 1e-9);
  REQUIRE(missing.found);
  CHECK(missing.cardinality == 1);
  CHECK(missing.chosen == IndexSet{7});
  CHECK(missing.unique_solution);

  // Nothing within the cardinality cap.
  L0Result none = solve_l0_bruteforce(A, y, {}, 1, 1e-12);
  CHECK_FALSE(none.found);

  // Budget guard.
  Mat big = random_gaussian(10, 60, 44);
  CHECK_THROWS_AS(solve_l0_bruteforce(big, Vec(10, 1.0), {}, 6, 1e-9, 1000),
                  budget_error);
}

TEST_CASE("polish returns exactly sparse solutions on exact recovery") {
  Rng rng = Rng::stream(45, {0});
  Mat A = random_gaussian(12, 24, 45);
  IndexSet support = {3, 8, 14, 21};
  Vec x = sparse_signal(24, support, rng);
  Vec y = gemv(A, x);
  SolverResult r = solve_modcs(A, y, support);  // fully known support
  REQUIRE(r.status == SolveStatus::converged);
  CHECK(r.polished);
  for (std::size_t i = 0; i < 24; ++i)
    if (!set_contains(support, i)) CHECK(r.x[i] == 0.0);
}

TEST_CASE("solver accepts operators as well as dense matrices") {
  Rng rng = Rng::stream(46, {0});
  LinearOperator A = gaussian_operator(8, 16, 46);
  Vec x = sparse_signal(16, {2, 9, 13}, rng);
  Vec y = A.apply(x);
  SolverResult r = solve_modcs(A, y, IndexSet{2, 9, 13});
  REQUIRE(r.status == SolveStatus::converged);
  CHECK(nrmse(x, r.x) <= 1e-8);
}
