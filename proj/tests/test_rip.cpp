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
#include "modcs/rip.hpp"
#include "modcs/rng.hpp"
#include "modcs/solvers.hpp"
#include "oracles.hpp"

using namespace modcs;

TEST_CASE("isometry constant of orthogonal and degenerate matrices") {
  Mat I = Mat::identity(6);
  for (std::size_t S = 1; S <= 6; ++S)
    CHECK(delta_exact(I, S) == doctest::Approx(0.0).epsilon(1e-14));

  // Two identical unit columns: the order-2 Gram has eigenvalues {0, 2}.
  Mat dup(3, 2);
  dup(0, 0) = 1.0;
  dup(0, 1) = 1.0;
  CHECK(delta_exact(dup, 2) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("order-2 isometry equals the largest pairwise coherence") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    Mat A = gaussian_operator(4, 8, 100 + seed).dense();
    CHECK(std::abs(delta_exact(A, 2) - oracles::max_pairwise_coherence(A)) <=
          1e-10);
  }
}

TEST_CASE("orthogonality constant basics") {
  Mat I = Mat::identity(6);
  CHECK(theta_exact(I, 2, 3) == doctest::Approx(0.0).epsilon(1e-14));

  Mat A = gaussian_operator(4, 8, 5).dense();
  CHECK(theta_exact(A, 1, 1) ==
        doctest::Approx(oracles::max_pairwise_coherence(A)).epsilon(1e-12));
}

TEST_CASE("theta is dominated by delta of the combined order") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    Mat A = gaussian_operator(4, 8, 200 + seed).dense();
    for (std::size_t S1 = 1; S1 <= 2; ++S1)
      for (std::size_t S2 = 1; S2 <= 2; ++S2)
        CHECK(theta_exact(A, S1, S2) <= delta_exact(A, S1 + S2) + 1e-12);
  }
}

TEST_CASE("exact delta is monotone in the order") {
  Mat A = gaussian_operator(6, 12, 17).dense();
  double prev = 0.0;
  for (std::size_t S = 1; S <= 5; ++S) {
    double d = delta_exact(A, S);
    CHECK(d >= prev - 1e-14);
    prev = d;
  }
}

TEST_CASE("budget guard redirects to sampling") {
  Mat A = gaussian_operator(10, 40, 3).dense();
  CHECK_THROWS_AS(delta_exact(A, 8, 1000), budget_error);
  CHECK_THROWS_AS(theta_exact(A, 4, 4, 1000), budget_error);
}

TEST_CASE("sampled bounds never exceed the exact value and cover it in the limit") {
  Mat A = gaussian_operator(4, 8, 31).dense();
  double exact = delta_exact(A, 2);
  Rng rng = Rng::stream(1, {0});
  auto [lo, flag_lo] = delta_sampled(A, 2, 5, rng);
  CHECK_FALSE(flag_lo);
  CHECK(lo <= exact + 1e-14);
  auto [all, flag_all] = delta_sampled(A, 2, 100, rng);  // covers all 28 pairs
  CHECK(flag_all);
  CHECK(all == doctest::Approx(exact).epsilon(1e-14));

  // Running max grows with the trial count on a fixed stream.
  Rng r1 = Rng::stream(2, {0});
  Rng r2 = Rng::stream(2, {0});
  auto [five, f5] = delta_sampled(A, 2, 5, r1);
  auto [ten, f10] = delta_sampled(A, 2, 10, r2);
  CHECK(five <= ten + 1e-14);

  auto [th, th_exact] = theta_sampled(A, 1, 1, 4, rng);
  CHECK_FALSE(th_exact);
  CHECK(th <= theta_exact(A, 1, 1) + 1e-14);
}

TEST_CASE("rip table caches, samples and serves the zero idealization") {
  Mat A = gaussian_operator(4, 8, 77).dense();
  RipTable table(A);
  double d2 = table.delta(2);
  CHECK(d2 == doctest::Approx(delta_exact(A, 2)).epsilon(1e-14));
  CHECK(table.delta_is_exact(2));
  CHECK(table.theta(1, 2) == doctest::Approx(theta_exact(A, 1, 2)).epsilon(1e-14));

  RipTable zero = RipTable::all_zero(16);
  CHECK(zero.delta(5) == 0.0);
  CHECK(zero.theta(3, 4) == 0.0);

  RipTable detached;
  detached.set_delta(2, 0.3, false);
  CHECK(detached.delta(2) == doctest::Approx(0.3));
  CHECK_FALSE(detached.delta_is_exact(2));
  CHECK_THROWS_AS(detached.delta(3), parameter_error);
}

TEST_CASE("restricted-isometry coefficients on hand values") {
  RipTable zero = RipTable::all_zero(32);
  CHECK(a_coeff(4, 2, 1, zero) == doctest::Approx(0.0));
  CHECK(k_coeff(4, 2, zero) == doctest::Approx(1.0));

  RipTable t;
  t.set_delta(2, 0.1, true);   // delta_k with k=2
  t.set_delta(3, 0.1, true);   // delta_S with S=3
  t.set_theta(2, 3, 0.1, true);
  t.set_theta(1, 2, 0.1, true);
  t.set_theta(1, 3, 0.1, true);
  // (0.1 + 0.01/0.9) / (1 - 0.1 - 0.01/0.9) = 1/8
  CHECK(a_coeff(2, 3, 1, t) == doctest::Approx(0.125).epsilon(1e-12));

  RipTable t2;
  t2.set_delta(3, 0.1, true);
  t2.set_theta(3, 5, 0.0, true);
  t2.set_delta(5, 0.4, true);  // irrelevant: theta is zero
  CHECK(k_coeff(5, 3, t2) ==
        doctest::Approx(std::sqrt(1.1) / 0.9).epsilon(1e-12));

  RipTable bad;
  bad.set_delta(2, 0.3, true);
  bad.set_delta(3, 0.95, true);
  bad.set_theta(2, 3, 0.5, true);
  // 1 - 0.95 - 0.25/0.7 < 0: the hypothesis fails.
  CHECK_THROWS_AS(a_coeff(2, 3, 1, bad), condition_violated);
  RipTable bad2;
  bad2.set_delta(2, 1.0, true);
  CHECK_THROWS_AS(a_coeff(2, 3, 1, bad2), condition_violated);  // delta_k >= 1
}

TEST_CASE("a coefficient is non-decreasing in its orders on a monotone table") {
  RipTable t;
  for (std::size_t S = 1; S <= 12; ++S)
    t.set_delta(S, std::min(0.9, 0.02 + 0.03 * double(S)), true);
  for (std::size_t a = 1; a <= 12; ++a)
    for (std::size_t b = a; b <= 12; ++b)
      t.set_theta(a, b, std::min(0.8, 0.01 + 0.01 * double(a + b)), true);
  for (std::size_t k = 1; k <= 3; ++k)
    for (std::size_t S = 1; S <= 3; ++S)
      for (std::size_t Sc = 1; Sc <= 3; ++Sc) {
        double base = a_coeff(k, S, Sc, t);
        CHECK(a_coeff(k + 1, S, Sc, t) >= base - 1e-12);
        CHECK(a_coeff(k, S + 1, Sc, t) >= base - 1e-12);
        CHECK(a_coeff(k, S, Sc + 1, t) >= base - 1e-12);
      }
  // k_coeff is at least one whenever defined.
  for (std::size_t k = 1; k <= 4; ++k)
    for (std::size_t S = 1; S <= 4; ++S) CHECK(k_coeff(k, S, t) >= 1.0);
}

TEST_CASE("sufficient-condition checkers on the zero table") {
  RipTable zero = RipTable::all_zero(64);
  CHECK(check_exact_recovery(4, 2, zero).verdict);
  for (const auto& r : check_exact_recovery_simplified(4, 2, zero)) CHECK(r.verdict);
  CHECK(check_l0_uniqueness(4, 2, zero).verdict);
  for (const auto& r : check_cs_conditions(4, zero)) CHECK(r.verdict);
}

TEST_CASE("strict inequalities at the boundary") {
  RipTable t;
  // delta_{2u} + delta_k + theta^2 = 1 exactly must fail.
  t.set_delta(2, 0.5, true);   // 2u with u=1
  t.set_delta(3, 0.5, true);   // k=3
  t.set_theta(2, 3, 0.0, true);
  t.set_delta(4, 0.0, true);   // k+u
  t.set_delta(1, 0.0, true);
  t.set_theta(1, 1, 0.0, true);
  t.set_theta(1, 2, 0.0, true);
  t.set_theta(1, 3, 0.0, true);
  ConditionReport rep = check_exact_recovery(3, 1, t);
  CHECK_FALSE(rep.verdict);

  RipTable t5a = RipTable::all_zero(32);
  t5a.set_delta(5, 0.2, true);  // k+2u with k=3, u=1: exactly 1/5 fails
  auto cor = check_exact_recovery_simplified(3, 1, t5a);
  CHECK_FALSE(cor[2].verdict);
  RipTable t5b = RipTable::all_zero(32);
  t5b.set_delta(5, 0.199, true);
  CHECK(check_exact_recovery_simplified(3, 1, t5b)[2].verdict);

  RipTable prop = RipTable::all_zero(32);
  prop.set_delta(5, 0.99, true);
  CHECK(check_l0_uniqueness(3, 1, prop).verdict);
  prop.set_delta(5, 1.0, true);
  CHECK_FALSE(check_l0_uniqueness(3, 1, prop).verdict);

  RipTable cs = RipTable::all_zero(32);
  cs.set_delta(4, 0.45, true);  // above sqrt(2)-1: the first condition fails
  auto reps = check_cs_conditions(2, cs);
  CHECK_FALSE(reps[0].verdict);
  CHECK(reps[1].verdict);
}

TEST_CASE("simplified recovery conditions chain on exact random tables") {
  for (std::uint64_t seed = 0; seed < 2; ++seed) {
    Mat A = gaussian_operator(6, 12, 300 + seed).dense();
    RipTable t(A);
    for (std::size_t k = 1; k <= 3; ++k) {
      auto rep = check_exact_recovery_simplified(k, 1, t);
      if (rep[2].verdict) CHECK(rep[1].verdict);
      if (rep[1].verdict) CHECK(rep[0].verdict);
    }
  }
}

TEST_CASE("sampled lower bounds can prove failure but never certify a pass") {
  RipTable low;  // all entries are lower bounds
  low.set_delta(1, 0.01, false);
  low.set_delta(2, 0.01, false);
  low.set_delta(3, 0.01, false);
  low.set_delta(4, 0.01, false);
  low.set_delta(5, 0.01, false);
  low.set_theta(1, 1, 0.01, false);
  low.set_theta(1, 2, 0.01, false);
  low.set_theta(1, 3, 0.01, false);
  low.set_theta(2, 3, 0.01, false);
  ConditionReport rep = check_exact_recovery(3, 1, low);
  CHECK(rep.verdict);            // the inequality holds on the recorded values
  CHECK_FALSE(rep.exact);
  CHECK_FALSE(rep.certifies_pass());  // ... but a lower bound cannot certify it

  low.set_delta(5, 2.0, false);  // lower bound already violates the threshold
  ConditionReport fail = check_l0_uniqueness(3, 1, low);
  CHECK_FALSE(fail.verdict);
  CHECK(fail.certifies_fail());  // failure is conclusive even from a bound
}

TEST_CASE("parameterizations via the support-size identity agree") {
  Mat A = gaussian_operator(6, 12, 44).dense();
  RipTable t(A);
  // k = s + e - u with s=4, u=1, e=1 gives k=4.
  ConditionReport a = check_exact_recovery(4, 1, t);
  ConditionReport b = check_exact_recovery_sue(4, 1, 1, t);
  CHECK(a.verdict == b.verdict);
  CHECK(a.terms[0].lhs == doctest::Approx(b.terms[0].lhs));
  auto ca = check_exact_recovery_simplified(4, 1, t);
  auto cb = check_exact_recovery_simplified_sue(4, 1, 1, t);
  for (int i = 0; i < 3; ++i) CHECK(ca[i].verdict == cb[i].verdict);
  CHECK(check_l0_uniqueness(4, 1, t).verdict == check_l0_uniqueness_sue(4, 1, 1, t).verdict);
}

TEST_CASE("recovery-condition verdict implies empirical recovery") {
  // Exact constants on a 10x20 matrix; if the verdict passes, every sign
  // pattern on a random placement must be recovered exactly.
  Mat A = gaussian_operator(10, 20, 4242).dense();
  RipTable t(A);
  ConditionReport rep = check_exact_recovery(4, 1, t);
  Rng rng = Rng::stream(88, {0});
  IndexSet known = rng.random_subset(20, 4);
  IndexSet rest = complement(known, 20);
  IndexSet extra = {rest[rng.below(rest.size())]};
  IndexSet support = set_union(known, extra);
  if (rep.verdict) {
    for (unsigned pattern = 0; pattern < 32; ++pattern) {
      Vec x(20, 0.0);
      for (std::size_t b = 0; b < 5; ++b)
        x[support[b]] = (pattern >> b) & 1 ? 1.0 : -1.0;
      Vec y = gemv(A, x);
      SolverResult r = solve_modcs(A, y, known);
      CHECK(nrmse(x, r.x) < 1e-5);
    }
  } else {
    // Conditions are conservative; nothing to assert beyond diagnostics.
    CHECK(rep.terms.size() == 3);
  }
}

TEST_CASE("binary entropy and the gaussian bound") {
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(binary_entropy(-0.01), parameter_error);
  CHECK_THROWS_AS(binary_entropy(1.01), parameter_error);

  CHECK(g_bound(2.0, 0.0) == doctest::Approx(0.0));
  CHECK(g_bound(2.0, 0.1) ==
        doctest::Approx(double(oracles::g_bound_ld(2.0L, 0.1L))).epsilon(1e-12));
  CHECK(g_bound(2.0, 0.1) == doctest::Approx(5.696).epsilon(1e-3));
}

TEST_CASE("sufficient-condition aggregates evaluate term by term") {
  // With no support churn the aggregate collapses to g + 3 g^2.
  double m = 0.5, n = 1.0, s = 1e-3;
  double g = g_bound(n / m, s / n);
  CHECK(rho_modcs(m, n, s, 0.0, 0.0) ==
        doctest::Approx(g + 3.0 * g * g).epsilon(1e-12));
  CHECK(rho_modcs(m, n, 0.0, 0.0, 0.0) == doctest::Approx(0.0));
  CHECK(rho_cs(m, n, 0.0) == doctest::Approx(0.0));

  // Term-by-term against the high-precision recomputation.
  double u = s / 50.0, e = s / 50.0;
  long double nm = 2.0L;
  long double g4 = oracles::g_bound_ld(nm, s + e);
  long double g5 = oracles::g_bound_ld(nm, s + e + u);
  long double expect = 2.0L * oracles::g_bound_ld(nm, 2.0L * u) +
                       oracles::g_bound_ld(nm, 3.0L * u) +
                       oracles::g_bound_ld(nm, s + e - u) + g4 * g4 +
                       2.0L * g5 * g5;
  CHECK(rho_modcs(m, n, s, u, e) == doctest::Approx(double(expect)).epsilon(1e-10));
}

TEST_CASE("larger sparsity is admissible with partial support knowledge") {
  for (double mn : {0.1, 0.3, 0.5}) {
    double s_mod = max_sparsity_fraction(mn, BoundRule::modcs);
    double s_cs = max_sparsity_fraction(mn, BoundRule::cs);
    double s_cs2 = max_sparsity_fraction(mn, BoundRule::cs2);
    CHECK(s_mod > s_cs);
    CHECK(s_mod > s_cs2);
    CHECK(s_cs > 0.0);
  }
}

TEST_CASE("bound curves sample the integer grid") {
  auto curve = bound_curve(BoundRule::cs, 0.3, 100);
  REQUIRE(curve.size() == 100);
  CHECK(curve.front().first == doctest::Approx(0.01));
  CHECK(curve.back().first == doctest::Approx(1.0));
  // rho grows with s in the admissible region.
  CHECK(curve[0].second < curve[5].second);
}
