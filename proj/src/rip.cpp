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

#include "modcs/rip.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "modcs/errors.hpp"
#include "modcs/kernels.hpp"
#include "modcs/supports.hpp"

namespace modcs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double binomial_capped(std::size_t n, std::size_t k, double cap) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (std::size_t i = 0; i < k; ++i) {
    c *= double(n - i) / double(i + 1);
    if (c > cap) return cap * 2.0;
  }
  return c;
}

// Lexicographic fixed-size combinations of {0..n-1}.
struct Combinations {
  std::size_t n, k;
  std::vector<std::size_t> idx;
  bool live;

  Combinations(std::size_t n_, std::size_t k_) : n(n_), k(k_), idx(k_), live(k_ <= n_) {
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  }
  bool next() {
    if (k == 0) {
      live = false;
      return false;
    }
    std::size_t i = k;
    while (i-- > 0) {
      if (idx[i] != i + n - k) {
        ++idx[i];
        for (std::size_t t = i + 1; t < k; ++t) idx[t] = idx[t - 1] + 1;
        return true;
      }
      if (i == 0) break;
    }
    live = false;
    return false;
  }
};

// delta contribution of one column subset.
double delta_of_subset(const Mat& At, const std::vector<std::size_t>& cols) {
  const std::size_t S = cols.size();
  Mat G(S, S);
  for (std::size_t i = 0; i < S; ++i)
    for (std::size_t j = i; j < S; ++j)
      G(i, j) = G(j, i) = kernels::dot(At.row(cols[i]), At.row(cols[j]), At.cols);
  Vec ev = symmetric_eigenvalues(std::move(G));
  return std::max(ev.back() - 1.0, 1.0 - ev.front());
}

double theta_of_pair(const Mat& At, const std::vector<std::size_t>& c1,
                     const std::vector<std::size_t>& c2) {
  Mat M(c1.size(), c2.size());
  for (std::size_t i = 0; i < c1.size(); ++i)
    for (std::size_t j = 0; j < c2.size(); ++j)
      M(i, j) = kernels::dot(At.row(c1[i]), At.row(c2[j]), At.cols);
  return spectral_norm(M);
}

}  // namespace

double delta_exact(const Mat& A, std::size_t S, std::size_t budget) {
  if (S == 0) return 0.0;
  if (S > A.cols) throw parameter_error("delta_exact: order exceeds column count");
  if (binomial_capped(A.cols, S, double(budget)) > double(budget))
    throw budget_error(
        "delta_exact: subset enumeration exceeds the budget; use delta_sampled");
  const Mat At = A.transposed();
  double best = 0.0;
  Combinations comb(A.cols, S);
  std::vector<std::size_t> cols(S);
  if (comb.live) {
    do {
      for (std::size_t i = 0; i < S; ++i) cols[i] = comb.idx[i];
      best = std::max(best, delta_of_subset(At, cols));
    } while (comb.next());
  }
  return best;
}

double theta_exact(const Mat& A, std::size_t S1, std::size_t S2,
                   std::size_t budget) {
  if (S1 == 0 || S2 == 0) return 0.0;
  if (S1 + S2 > A.cols)
    throw parameter_error("theta_exact: S1 + S2 exceeds column count");
  double count = binomial_capped(A.cols, S1, double(budget)) *
                 binomial_capped(A.cols - S1, S2, double(budget));
  if (count > double(budget))
    throw budget_error(
        "theta_exact: subset enumeration exceeds the budget; use theta_sampled");
  const Mat At = A.transposed();
  double best = 0.0;
  Combinations outer(A.cols, S1);
  std::vector<std::size_t> c1(S1), c2(S2);
  do {
    for (std::size_t i = 0; i < S1; ++i) c1[i] = outer.idx[i];
    IndexSet rest = complement(IndexSet(c1.begin(), c1.end()), A.cols);
    Combinations inner(rest.size(), S2);
    do {
      for (std::size_t j = 0; j < S2; ++j) c2[j] = rest[inner.idx[j]];
      best = std::max(best, theta_of_pair(At, c1, c2));
    } while (inner.next());
  } while (outer.next());
  return best;
}

std::pair<double, bool> delta_sampled(const Mat& A, std::size_t S,
                                      std::size_t trials, Rng& rng) {
  if (S == 0) return {0.0, true};
  if (S > A.cols) throw parameter_error("delta_sampled: order exceeds column count");
  double all = binomial_capped(A.cols, S, 1e15);
  if (double(trials) >= all) return {delta_exact(A, S, std::size_t(all) + 1), true};
  const Mat At = A.transposed();
  double best = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    IndexSet cols = rng.random_subset(A.cols, S);
    best = std::max(best, delta_of_subset(At, cols));
  }
  return {best, false};
}

std::pair<double, bool> theta_sampled(const Mat& A, std::size_t S1,
                                      std::size_t S2, std::size_t trials,
                                      Rng& rng) {
  if (S1 == 0 || S2 == 0) return {0.0, true};
  if (S1 + S2 > A.cols)
    throw parameter_error("theta_sampled: S1 + S2 exceeds column count");
  double all = binomial_capped(A.cols, S1, 1e15) *
               binomial_capped(A.cols - S1, S2, 1e15);
  if (double(trials) >= all)
    return {theta_exact(A, S1, S2, std::size_t(std::min(all, 1e9)) + 1), true};
  const Mat At = A.transposed();
  double best = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    IndexSet both = rng.random_subset(A.cols, S1 + S2);
    // Random split keeps the pair distribution uniform over disjoint pairs.
    IndexSet c1 = rng.sample_without_replacement(both, S1);
    IndexSet c2 = set_difference(both, c1);
    best = std::max(best, theta_of_pair(At, c1, c2));
  }
  return {best, false};
}

RipTable::RipTable(Mat A, std::size_t budget)
    : matrix_(std::move(A)), budget_(budget), n_(matrix_->cols) {}

RipTable RipTable::all_zero(std::size_t n) {
  RipTable t;
  t.n_ = n;
  t.zero_default_ = true;
  return t;
}

double RipTable::delta(std::size_t S) {
  if (S == 0) return 0.0;
  auto it = deltas_.find(S);
  if (it != deltas_.end()) return it->second.value;
  if (zero_default_) return 0.0;
  if (!matrix_)
    throw parameter_error("RipTable: no entry for this order and no matrix attached");
  double v = delta_exact(*matrix_, S, budget_);
  deltas_[S] = {v, true};
  return v;
}

double RipTable::theta(std::size_t S1, std::size_t S2) {
  if (S1 == 0 || S2 == 0) return 0.0;
  if (S1 > S2) std::swap(S1, S2);
  auto it = thetas_.find({S1, S2});
  if (it != thetas_.end()) return it->second.value;
  if (zero_default_) return 0.0;
  if (!matrix_)
    throw parameter_error("RipTable: no entry for this pair and no matrix attached");
  double v = theta_exact(*matrix_, S1, S2, budget_);
  thetas_[{S1, S2}] = {v, true};
  return v;
}

bool RipTable::delta_is_exact(std::size_t S) const {
  if (S == 0 || zero_default_) return true;
  auto it = deltas_.find(S);
  if (it != deltas_.end()) return it->second.exact;
  return matrix_.has_value();
}

bool RipTable::theta_is_exact(std::size_t S1, std::size_t S2) const {
  if (S1 == 0 || S2 == 0 || zero_default_) return true;
  if (S1 > S2) std::swap(S1, S2);
  auto it = thetas_.find({S1, S2});
  if (it != thetas_.end()) return it->second.exact;
  return matrix_.has_value();
}

void RipTable::set_delta(std::size_t S, double value, bool exact) {
  deltas_[S] = {value, exact};
}

void RipTable::set_theta(std::size_t S1, std::size_t S2, double value, bool exact) {
  if (S1 > S2) std::swap(S1, S2);
  thetas_[{S1, S2}] = {value, exact};
}

void RipTable::sample_delta(std::size_t S, std::size_t trials, Rng& rng) {
  if (!matrix_) throw parameter_error("RipTable: no matrix attached");
  auto [v, exact] = delta_sampled(*matrix_, S, trials, rng);
  deltas_[S] = {v, exact};
}

void RipTable::sample_theta(std::size_t S1, std::size_t S2, std::size_t trials,
                            Rng& rng) {
  if (!matrix_) throw parameter_error("RipTable: no matrix attached");
  auto [v, exact] = theta_sampled(*matrix_, S1, S2, trials, rng);
  if (S1 > S2) std::swap(S1, S2);
  thetas_[{S1, S2}] = {v, exact};
}

namespace {

// Pulls constants from the table while tracking their exactness.
struct Consts {
  RipTable& rip;
  bool exact = true;

  double d(std::size_t S) {
    double v = rip.delta(S);
    exact = exact && rip.delta_is_exact(S);
    return v;
  }
  double t(std::size_t S1, std::size_t S2) {
    double v = rip.theta(S1, S2);
    exact = exact && rip.theta_is_exact(S1, S2);
    return v;
  }
};

double a_coeff_from(Consts& c, std::size_t k, std::size_t S, std::size_t Sc) {
  double dk = c.d(k);
  if (dk >= 1.0) throw condition_violated("a_coeff: delta_k >= 1");
  double dS = c.d(S);
  double tSk = c.t(S, k);
  double denom = 1.0 - dS - tSk * tSk / (1.0 - dk);
  if (denom <= 0.0)
    throw condition_violated("a_coeff: delta_S + delta_k + theta_{k,S}^2 >= 1");
  return (c.t(Sc, S) + c.t(Sc, k) * tSk / (1.0 - dk)) / denom;
}

std::size_t k_from_sue(std::size_t s, std::size_t u, std::size_t e) {
  if (s + e < u) throw parameter_error("support sizes: need s + e >= u");
  return s + e - u;
}

}  // namespace

double a_coeff(std::size_t k, std::size_t S, std::size_t S_check, RipTable& rip) {
  Consts c{rip};
  return a_coeff_from(c, k, S, S_check);
}

double k_coeff(std::size_t k, std::size_t S, RipTable& rip) {
  Consts c{rip};
  double dk = c.d(k);
  if (dk >= 1.0) throw condition_violated("k_coeff: delta_k >= 1");
  double dS = c.d(S);
  double tSk = c.t(S, k);
  double denom = 1.0 - dS - tSk * tSk / (1.0 - dk);
  if (denom <= 0.0)
    throw condition_violated("k_coeff: delta_S + delta_k + theta_{k,S}^2 >= 1");
  return std::sqrt(1.0 + dS) / denom;
}

nlohmann::json ConditionReport::to_json() const {
  nlohmann::json terms_j = nlohmann::json::array();
  for (const auto& t : terms)
    terms_j.push_back({{"name", t.name},
                       {"lhs", t.lhs},
                       {"threshold", t.threshold},
                       {"satisfied", t.satisfied}});
  return {{"id", id},      {"verdict", verdict}, {"exact", exact},
          {"terms", terms_j}, {"inputs", inputs}};
}

ConditionReport check_exact_recovery(std::size_t k, std::size_t u, RipTable& rip) {
  Consts c{rip};
  ConditionReport rep;
  rep.id = "exact-recovery";
  rep.inputs = {{"k", double(k)}, {"u", double(u)}};

  double lhs1 = c.d(k + u);
  rep.terms.push_back({"delta_{k+u}", lhs1, 1.0, lhs1 < 1.0});
  double d2u = c.d(2 * u), dk = c.d(k), tk2u = c.t(k, 2 * u);
  double lhs2 = d2u + dk + tk2u * tk2u;
  rep.terms.push_back({"delta_{2u}+delta_k+theta_{k,2u}^2", lhs2, 1.0, lhs2 < 1.0});
  double lhs3;
  try {
    lhs3 = a_coeff_from(c, k, 2 * u, u) + a_coeff_from(c, k, u, u);
  } catch (const condition_violated&) {
    lhs3 = kInf;
  }
  rep.terms.push_back({"a_k(2u,u)+a_k(u,u)", lhs3, 1.0, lhs3 < 1.0});

  rep.exact = c.exact;
  rep.verdict = true;
  for (const auto& t : rep.terms) rep.verdict = rep.verdict && t.satisfied;
  return rep;
}

ConditionReport check_exact_recovery_sue(std::size_t s, std::size_t u, std::size_t e,
                                   RipTable& rip) {
  ConditionReport rep = check_exact_recovery(k_from_sue(s, u, e), u, rip);
  rep.inputs = {{"s", double(s)}, {"u", double(u)}, {"e", double(e)},
                {"k", double(k_from_sue(s, u, e))}};
  return rep;
}

std::array<ConditionReport, 3> check_exact_recovery_simplified(std::size_t k, std::size_t u,
                                                RipTable& rip) {
  std::array<ConditionReport, 3> out;
  {
    Consts c{rip};
    ConditionReport& r = out[0];
    r.id = "recovery-theta";
    r.inputs = {{"k", double(k)}, {"u", double(u)}};
    double lhs = (c.d(2 * u) + c.t(u, u) + c.t(u, 2 * u)) +
                 (c.d(k) + c.t(k, u) * c.t(k, u) +
                  2.0 * c.t(k, 2 * u) * c.t(k, 2 * u));
    r.terms.push_back(
        {"(delta_{2u}+theta_{u,u}+theta_{u,2u})+(delta_k+theta_{k,u}^2+2theta_{k,2u}^2)",
         lhs, 1.0, lhs < 1.0});
    r.exact = c.exact;
    r.verdict = lhs < 1.0;
  }
  {
    Consts c{rip};
    ConditionReport& r = out[1];
    r.id = "recovery-delta";
    r.inputs = {{"k", double(k)}, {"u", double(u)}};
    double dku = c.d(k + u), dk2u = c.d(k + 2 * u);
    double lhs = 2.0 * c.d(2 * u) + c.d(3 * u) + c.d(k) + dku * dku +
                 2.0 * dk2u * dk2u;
    r.terms.push_back(
        {"2delta_{2u}+delta_{3u}+delta_k+delta_{k+u}^2+2delta_{k+2u}^2", lhs, 1.0,
         lhs < 1.0});
    r.exact = c.exact;
    r.verdict = lhs < 1.0;
  }
  {
    Consts c{rip};
    ConditionReport& r = out[2];
    r.id = "recovery-fifth";
    r.inputs = {{"k", double(k)}, {"u", double(u)}};
    r.terms.push_back({"u <= k", double(u), double(k), u <= k});
    double lhs = c.d(k + 2 * u);
    r.terms.push_back({"delta_{k+2u}", lhs, 0.2, lhs < 0.2});
    r.exact = c.exact;
    r.verdict = (u <= k) && (lhs < 0.2);
  }
  return out;
}

std::array<ConditionReport, 3> check_exact_recovery_simplified_sue(std::size_t s, std::size_t u,
                                                    std::size_t e, RipTable& rip) {
  auto out = check_exact_recovery_simplified(k_from_sue(s, u, e), u, rip);
  for (auto& r : out)
    r.inputs = {{"s", double(s)}, {"u", double(u)}, {"e", double(e)},
                {"k", double(k_from_sue(s, u, e))}};
  return out;
}

ConditionReport check_l0_uniqueness(std::size_t k, std::size_t u, RipTable& rip) {
  Consts c{rip};
  ConditionReport rep;
  rep.id = "l0-uniqueness";
  rep.inputs = {{"k", double(k)}, {"u", double(u)}};
  double lhs = c.d(k + 2 * u);
  rep.terms.push_back({"delta_{k+2u}", lhs, 1.0, lhs < 1.0});
  rep.exact = c.exact;
  rep.verdict = lhs < 1.0;
  return rep;
}

ConditionReport check_l0_uniqueness_sue(std::size_t s, std::size_t u, std::size_t e,
                                RipTable& rip) {
  ConditionReport rep = check_l0_uniqueness(k_from_sue(s, u, e), u, rip);
  rep.inputs = {{"s", double(s)}, {"u", double(u)}, {"e", double(e)},
                {"k", double(k_from_sue(s, u, e))}};
  return rep;
}

std::vector<ConditionReport> check_cs_conditions(std::size_t s, RipTable& rip) {
  std::vector<ConditionReport> out;
  const double sqrt2m1 = std::sqrt(2.0) - 1.0;
  {
    Consts c{rip};
    ConditionReport r;
    r.id = "cs-sqrt2";
    r.inputs = {{"s", double(s)}};
    double lhs = c.d(2 * s);
    r.terms.push_back({"delta_{2s}", lhs, sqrt2m1, lhs < sqrt2m1});
    r.exact = c.exact;
    r.verdict = lhs < sqrt2m1;
    out.push_back(std::move(r));
  }
  {
    Consts c{rip};
    ConditionReport r;
    r.id = "cs-delta-sum";
    r.inputs = {{"s", double(s)}};
    double lhs = c.d(2 * s) + c.d(3 * s);
    r.terms.push_back({"delta_{2s}+delta_{3s}", lhs, 1.0, lhs < 1.0});
    r.exact = c.exact;
    r.verdict = lhs < 1.0;
    out.push_back(std::move(r));
  }
  {
    Consts c{rip};
    ConditionReport r;
    r.id = "cs-theta";
    r.inputs = {{"s", double(s)}};
    double lhs = c.d(2 * s) + c.t(s, s) + c.t(s, 2 * s);
    r.terms.push_back({"delta_{2s}+theta_{s,s}+theta_{s,2s}", lhs, 1.0, lhs < 1.0});
    r.exact = c.exact;
    r.verdict = lhs < 1.0;
    out.push_back(std::move(r));
  }
  return out;
}

double binary_entropy(double r) {
  if (r < 0.0 || r > 1.0)
    throw parameter_error("binary_entropy: argument outside [0,1]");
  if (r == 0.0 || r == 1.0) return 0.0;
  return -r * std::log(r) - (1.0 - r) * std::log(1.0 - r);
}

double g_bound(double n_over_m, double frac) {
  if (frac < 0.0 || frac > 1.0)
    throw parameter_error("g_bound: fraction outside [0,1]");
  if (n_over_m <= 0.0) throw parameter_error("g_bound: n/m must be positive");
  double f = std::sqrt(n_over_m) *
             (std::sqrt(frac) + std::sqrt(2.0 * binary_entropy(frac)));
  return (1.0 + f) * (1.0 + f) - 1.0;
}

namespace {

double g_or_inf(double n_over_m, double frac) {
  if (frac > 1.0) return kInf;
  return g_bound(n_over_m, frac);
}

}  // namespace

double rho_modcs(double m, double n, double s, double u, double e) {
  if (m <= 0 || n <= 0) throw parameter_error("rho_modcs: m, n must be positive");
  if (s + e < u) throw parameter_error("rho_modcs: need s + e >= u");
  const double nm = n / m;
  double g1 = g_or_inf(nm, 2.0 * u / n);
  double g2 = g_or_inf(nm, 3.0 * u / n);
  double g3 = g_or_inf(nm, (s + e - u) / n);
  double g4 = g_or_inf(nm, (s + e) / n);
  double g5 = g_or_inf(nm, (s + e + u) / n);
  return 2.0 * g1 + g2 + g3 + g4 * g4 + 2.0 * g5 * g5;
}

double rho_cs(double m, double n, double s) {
  if (m <= 0 || n <= 0) throw parameter_error("rho_cs: m, n must be positive");
  const double nm = n / m;
  return g_or_inf(nm, 2.0 * s / n) + g_or_inf(nm, 3.0 * s / n);
}

double rho_cs2(double m, double n, double s) {
  if (m <= 0 || n <= 0) throw parameter_error("rho_cs2: m, n must be positive");
  return g_or_inf(n / m, 2.0 * s / n);
}

double max_sparsity_fraction(double m_over_n, BoundRule rule) {
  if (m_over_n <= 0.0 || m_over_n > 1.0)
    throw parameter_error("max_sparsity_fraction: m/n must be in (0,1]");
  auto ok = [&](double x) {
    switch (rule) {
      case BoundRule::modcs:
        return rho_modcs(m_over_n, 1.0, x, x / 50.0, x / 50.0) < 1.0;
      case BoundRule::cs:
        return rho_cs(m_over_n, 1.0, x) < 1.0;
      case BoundRule::cs2:
        return rho_cs2(m_over_n, 1.0, x) < std::sqrt(2.0) - 1.0;
    }
    return false;
  };
  double lo = 0.0, hi = 1e-6;
  while (ok(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 0.45) return lo;  // past the relevant domain, all rules fail here
  }
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (ok(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

std::vector<std::pair<double, double>> bound_curve(BoundRule rule,
                                                   double m_over_n,
                                                   std::size_t n) {
  if (n == 0) throw parameter_error("bound_curve: n must be positive");
  std::vector<std::pair<double, double>> out;
  out.reserve(n);
  const double m = m_over_n * double(n);
  for (std::size_t s = 1; s <= n; ++s) {
    double rho = 0.0;
    double churn = std::floor(double(s) / 50.0 + 0.5);
    switch (rule) {
      case BoundRule::modcs:
        rho = rho_modcs(m, double(n), double(s), churn, churn);
        break;
      case BoundRule::cs:
        rho = rho_cs(m, double(n), double(s));
        break;
      case BoundRule::cs2:
        rho = rho_cs2(m, double(n), double(s));
        break;
    }
    out.emplace_back(double(s) / double(n), rho);
  }
  return out;
}

}  // namespace modcs
