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

#include "modcs/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "modcs/errors.hpp"
#include "modcs/kernels.hpp"

namespace modcs {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iter: return "max-iter";
    case SolveStatus::infeasible: return "infeasible";
  }
  return "?";
}

namespace {

double objective_value(const Vec& x, const IndexSet& comp, const IndexSet& known,
                       const Vec* prior, double gamma) {
  double obj = 0.0;
  for (std::size_t i : comp) obj += std::abs(x[i]);
  if (gamma > 0.0 && prior) {
    for (std::size_t j = 0; j < known.size(); ++j) {
      double d = x[known[j]] - (*prior)[j];
      obj += gamma * d * d;
    }
  }
  return obj;
}

// Equality-constrained quadratic case: the l1 part is absent (the known set
// covers every column). gamma = 0 degenerates to the min-norm solution.
SolverResult solve_all_known(const Mat& D, const Vec& y, const IndexSet& known,
                             const Vec* prior, double gamma,
                             const SolverConfig& cfg) {
  SolverResult res;
  const double yscale = std::max(nrm2(y), 1.0);
  Vec base(D.cols, 0.0);
  if (gamma > 0.0 && prior)
    for (std::size_t j = 0; j < known.size(); ++j) base[known[j]] = (*prior)[j];
  Vec shifted(y);
  if (gamma > 0.0 && prior) {
    Vec Ab = gemv(D, base);
    for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] -= Ab[i];
  }
  MinNorm mn = min_norm_solution(D, shifted);
  if (!mn.ok) {
    res.status = SolveStatus::infeasible;
    return res;
  }
  res.x = base;
  for (std::size_t i = 0; i < res.x.size(); ++i) res.x[i] += mn.x[i];
  Vec r = gemv(D, res.x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= y[i];
  res.primal_residual = nrm2(r) / yscale;
  res.status = res.primal_residual <= std::max(cfg.feas_tol, 1e-8)
                   ? SolveStatus::converged
                   : SolveStatus::infeasible;
  res.objective = objective_value(res.x, {}, known, prior, gamma);
  res.certificate.assign(D.rows, 0.0);
  res.nonunique = (gamma == 0.0);
  return res;
}

struct Workspace {
  // p-sized
  Vec u, lam1, lam2, f1, f2, q1, q2, sig1, sig2, sigx, wc, w2;
  Vec du, dlam1, dlam2, dxc, lam1c, lam2c, f1c, f2c;
  // n-sized
  Vec x, Atv, dx, xc;
  // m-sized
  Vec Ax, v, dv, Adx, Atdv_n;  // Atdv_n is n-sized, listed here for locality
};

double residual_norm_sq(const Vec& x, const Vec& lam1, const Vec& lam2,
                        const Vec& f1, const Vec& f2, const Vec& Atv,
                        const Vec& Ax, const Vec& y, const IndexSet& comp,
                        const IndexSet& known, const Vec* prior, double gamma,
                        double inv_tau) {
  double s = 0.0;
  for (std::size_t i = 0; i < comp.size(); ++i) {
    double rd = (lam1[i] - lam2[i]) + Atv[comp[i]];
    double ru = 1.0 - lam1[i] - lam2[i];
    double rc1 = -lam1[i] * f1[i] - inv_tau;
    double rc2 = -lam2[i] * f2[i] - inv_tau;
    s += rd * rd + ru * ru + rc1 * rc1 + rc2 * rc2;
  }
  for (std::size_t j = 0; j < known.size(); ++j) {
    double rd = Atv[known[j]];
    if (gamma > 0.0 && prior) rd += 2.0 * gamma * (x[known[j]] - (*prior)[j]);
    s += rd * rd;
  }
  for (std::size_t i = 0; i < y.size(); ++i) {
    double rp = Ax[i] - y[i];
    s += rp * rp;
  }
  return s;
}

// Least-norm multiplier w with A_j'w pinned on the known set and the
// detected support, box-checked elsewhere; evaluating the dual objective at
// it gives a rigorous optimality gap by weak duality.
struct DualBound {
  bool ok = false;
  Vec w;
  double value = 0.0;  // dual objective (lower bound on the optimum)
};

// Least-norm w with the pinned targets B'w = rhs (two refinement passes).
// Returns false when the pinned columns are numerically dependent.
bool pinned_least_norm(const Mat& D, const std::vector<std::size_t>& pins,
                       const Vec& rhs, Vec& w) {
  const std::size_t m = D.rows;
  const std::size_t cols = pins.size();
  w.assign(m, 0.0);
  if (cols == 0) return true;
  Mat Bt(cols, m);
  for (std::size_t r = 0; r < cols; ++r)
    for (std::size_t i = 0; i < m; ++i) Bt(r, i) = D(i, pins[r]);
  Mat G(cols, cols);
  for (std::size_t i = 0; i < cols; ++i)
    for (std::size_t j = i; j < cols; ++j)
      G(i, j) = G(j, i) = kernels::dot(Bt.row(i), Bt.row(j), m);
  Cholesky f = cholesky(G);
  if (!f.ok) return false;
  Vec z = chol_solve(f, rhs);
  for (std::size_t i = 0; i < cols; ++i)
    kernels::axpy(z[i], Bt.row(i), w.data(), m);
  for (int pass = 0; pass < 2; ++pass) {
    Vec resid(cols);
    for (std::size_t i = 0; i < cols; ++i)
      resid[i] = rhs[i] - kernels::dot(Bt.row(i), w.data(), m);
    Vec dz = chol_solve(f, resid);
    for (std::size_t i = 0; i < cols; ++i)
      kernels::axpy(dz[i], Bt.row(i), w.data(), m);
  }
  return true;
}

DualBound reconstruct_dual_at(const Mat& D, const Vec& y, const IndexSet& known,
                              const Vec* prior, double gamma, const Vec& x,
                              double support_threshold) {
  DualBound out;
  const std::size_t m = D.rows, n = D.cols;

  // Pinned equations: stationarity targets on the known set (0, or
  // 2*gamma*(x_T - prior)) and the sign pattern on the detected support.
  std::vector<std::pair<std::size_t, double>> pinned;
  for (std::size_t idx = 0; idx < known.size(); ++idx)
    pinned.emplace_back(known[idx],
                        gamma > 0.0 && prior
                            ? 2.0 * gamma * (x[known[idx]] - (*prior)[idx])
                            : 0.0);
  for (std::size_t j = 0; j < n; ++j)
    if (std::abs(x[j]) > support_threshold && !set_contains(known, j))
      pinned.emplace_back(j, x[j] > 0 ? 1.0 : -1.0);
  std::sort(pinned.begin(), pinned.end());
  if (pinned.size() > m) return out;
  std::vector<std::size_t> pins;
  Vec rhs;
  for (auto& [j, t] : pinned) {
    pins.push_back(j);
    rhs.push_back(t);
  }

  // Active-set restoration: a box violation at an unpinned column means the
  // bound is active there; pinning it to the violating sign leaves y'w
  // unchanged (the primal vanishes off the support) and restores
  // feasibility. A handful of rounds settles generic instances.
  Vec w;
  Vec atw(n);
  for (int round = 0; round < 64; ++round) {
    if (!pinned_least_norm(D, pins, rhs, w)) return out;
    gemv_t(D, w.data(), atw.data());
    double worst = 0.0;
    std::size_t worst_j = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (set_contains(known, j)) continue;
      if (std::binary_search(pins.begin(), pins.end(), j)) continue;
      double v = std::abs(atw[j]);
      if (v > worst) {
        worst = v;
        worst_j = j;
      }
    }
    if (worst <= 1.0 + 1e-12 || worst_j == n || pins.size() >= m) break;
    // Keep pins sorted for the binary search above.
    double target = atw[worst_j] > 0 ? 1.0 : -1.0;
    auto pos = std::lower_bound(pins.begin(), pins.end(), worst_j);
    rhs.insert(rhs.begin() + (pos - pins.begin()), target);
    pins.insert(pos, worst_j);
  }

  // Any residual violation is paid for by scaling (keeps weak duality valid).
  double worst = 1.0;
  for (std::size_t j = 0; j < n; ++j)
    if (!set_contains(known, j)) worst = std::max(worst, std::abs(atw[j]));
  if (worst > 1.0)
    for (auto& v : w) v /= worst;

  double g = dot(y, w);
  if (gamma > 0.0 && prior) {
    // Quadratic part of the dual: -mu' A_T'w - ||A_T'w||^2 / (4 gamma).
    atw = gemv_t(D, w);
    double lin = 0.0, sq = 0.0;
    for (std::size_t j = 0; j < known.size(); ++j) {
      double v = atw[known[j]];
      lin += (*prior)[j] * v;
      sq += v * v;
    }
    g -= lin + sq / (4.0 * gamma);
  }
  out.w = std::move(w);
  out.value = g;
  out.ok = true;
  return out;
}

// Fixed-sign refit of the regularized objective on a detected support:
// minimize gamma ||x_T - mu||^2 + sum_S sigma_j x_j over A x = y with x
// supported on T u S. Smooth equality-constrained QP, solved via its KKT
// system. Fails when the recovered signs disagree with sigma.
struct QpPolish {
  bool ok = false;
  Vec x;
};

QpPolish regmod_polish_at(const Mat& D, const Vec& y, const IndexSet& known,
                          const Vec& prior, double gamma, const Vec& x_hat,
                          double support_threshold) {
  QpPolish out;
  const std::size_t m = D.rows, n = D.cols;
  IndexSet off;
  Vec sigma;
  for (std::size_t j = 0; j < n; ++j)
    if (!set_contains(known, j) && std::abs(x_hat[j]) > support_threshold) {
      off.push_back(j);
      sigma.push_back(x_hat[j] > 0 ? 1.0 : -1.0);
    }
  const std::size_t k = known.size(), s2 = off.size();
  const std::size_t dim = k + s2 + m;
  if (k + s2 > m) return out;

  Mat M(dim, dim);
  Vec rhs(dim, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    M(i, i) = 2.0 * gamma;
    for (std::size_t r = 0; r < m; ++r) M(i, k + s2 + r) = D(r, known[i]);
    rhs[i] = 2.0 * gamma * prior[i];
  }
  for (std::size_t j = 0; j < s2; ++j) {
    for (std::size_t r = 0; r < m; ++r) M(k + j, k + s2 + r) = D(r, off[j]);
    rhs[k + j] = -sigma[j];
  }
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t i = 0; i < k; ++i) M(k + s2 + r, i) = D(r, known[i]);
    for (std::size_t j = 0; j < s2; ++j) M(k + s2 + r, k + j) = D(r, off[j]);
    rhs[k + s2 + r] = y[r];
  }
  Lu lu = lu_factor(std::move(M));
  if (!lu.ok) return out;
  Vec sol = lu_solve(lu, rhs);
  out.x.assign(n, 0.0);
  for (std::size_t i = 0; i < k; ++i) out.x[known[i]] = sol[i];
  for (std::size_t j = 0; j < s2; ++j) {
    if (sol[k + j] * sigma[j] < 0.0) return out;  // sign pattern broke
    out.x[off[j]] = sol[k + j];
  }
  out.ok = true;
  return out;
}

// Support detection at several scales; keep the strongest certificate.
DualBound reconstruct_dual(const Mat& D, const Vec& y, const IndexSet& known,
                           const Vec* prior, double gamma, const Vec& x) {
  DualBound best;
  const double xmax = linf(x);
  for (double rel : {1e-5, 1e-6, 1e-7, 1e-8}) {
    DualBound db =
        reconstruct_dual_at(D, y, known, prior, gamma, x, rel * xmax);
    if (db.ok && (!best.ok || db.value > best.value)) best = db;
  }
  return best;
}

SolverResult solve_core_normalized(const Mat& D, const Vec& y,
                                   const IndexSet& known, const Vec* prior,
                                   double gamma, const SolverConfig& cfg);

SolverResult solve_core(const Mat& D_in, const Vec& y_in, const IndexSet& known,
                        const Vec* prior_in, double gamma,
                        const SolverConfig& cfg) {
  const std::size_t m = D_in.rows, n = D_in.cols;
  if (y_in.size() != m) throw parameter_error("solve: rhs dimension mismatch");
  for (std::size_t i = 0; i < known.size(); ++i) {
    if (known[i] >= n) throw parameter_error("solve: known index out of range");
    if (i > 0 && known[i] <= known[i - 1])
      throw parameter_error("solve: known set must be sorted and unique");
  }
  if (gamma < 0.0) throw parameter_error("solve: gamma must be >= 0");
  if (prior_in && prior_in->size() != known.size())
    throw parameter_error("solve: prior must be indexed along the known set");

  if (known.size() == n)
    return solve_all_known(D_in, y_in, known, prior_in, gamma, cfg);

  // Normalize so the largest column norm and ||y|| are 1: the trajectory is
  // then invariant under (cA, cy) and the interior point sees O(1) data.
  double col_scale = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += D_in(i, j) * D_in(i, j);
    col_scale = std::max(col_scale, s);
  }
  col_scale = std::sqrt(col_scale);
  if (col_scale == 0.0) col_scale = 1.0;
  Mat D = D_in;
  for (auto& v : D.a) v /= col_scale;
  Vec y = y_in;
  for (auto& v : y) v /= col_scale;
  double y_scale = nrm2(y);
  if (y_scale == 0.0) y_scale = 1.0;
  for (auto& v : y) v /= y_scale;
  Vec prior_scaled;
  const Vec* prior = nullptr;
  double gamma_scaled = gamma;
  if (prior_in) {
    prior_scaled = *prior_in;
    for (auto& v : prior_scaled) v /= y_scale;
    prior = &prior_scaled;
    gamma_scaled = gamma * y_scale;
  }

  SolverResult res = solve_core_normalized(D, y, known, prior, gamma_scaled, cfg);

  // Map back to the original scale. The surrogate gap was relative to the
  // normalized objective; carry it over as an absolute quantity first.
  double gap_abs = res.duality_gap * std::max(1.0, std::abs(res.objective)) * y_scale;
  for (auto& v : res.x) v *= y_scale;
  for (auto& v : res.certificate) v /= col_scale;
  const IndexSet comp = complement(known, n);
  res.objective = objective_value(res.x, comp, known, prior_in, gamma);
  res.duality_gap = gap_abs / std::max(1.0, std::abs(res.objective));
  {
    Vec r = gemv(D_in, res.x);
    for (std::size_t i = 0; i < m; ++i) r[i] -= y_in[i];
    res.primal_residual = nrm2(r) / std::max(nrm2(y_in), 1.0);
  }
  for (auto& v : res.objective_trace) v *= y_scale;

  // Support polish (pure l1 objective only): least-squares refit on the
  // detected support, accepted when it stays feasible and does not increase
  // the objective. Exact zeros off the support let a zero threshold recover
  // the support downstream.
  if (cfg.polish && gamma == 0.0 && res.status != SolveStatus::infeasible) {
    double xmax_abs = linf(res.x);
    if (xmax_abs > 0.0) {
      IndexSet supp;
      double thr = 1e-7 * xmax_abs;
      for (std::size_t i = 0; i < n; ++i)
        if (std::abs(res.x[i]) > thr) supp.push_back(i);
      if (supp.size() <= m) {
        LsOnSupport ls = least_squares_on_support(D_in, y_in, supp);
        // Prune refit entries that came out negligible (spurious support
        // members picked up from interior-point fuzz) and refit once.
        if (ls.ok) {
          IndexSet pruned;
          for (std::size_t i : supp)
            if (std::abs(ls.x[i]) > 1e-12 * xmax_abs) pruned.push_back(i);
          if (pruned.size() < supp.size()) {
            LsOnSupport again = least_squares_on_support(D_in, y_in, pruned);
            if (again.ok) ls = std::move(again);
          }
        }
        if (ls.ok) {
          Vec r = gemv(D_in, ls.x);
          for (std::size_t i = 0; i < m; ++i) r[i] -= y_in[i];
          double relres = nrm2(r) / std::max(nrm2(y_in), 1.0);
          double obj_p = objective_value(ls.x, comp, known, prior_in, gamma);
          double slack = std::max(res.duality_gap * std::max(1.0, res.objective),
                                  1e-12 * (1.0 + std::abs(res.objective)));
          if (relres <= 1e-8 && obj_p <= res.objective + slack) {
            res.x = std::move(ls.x);
            res.objective = obj_p;
            res.primal_residual = relres;
            res.polished = true;
          }
        }
      }
    }
  }

  // Quadratic-objective polish: fixed-sign KKT refit on detected supports.
  if (cfg.polish && gamma > 0.0 && prior_in &&
      res.status != SolveStatus::infeasible) {
    double xmax_abs = linf(res.x);
    if (xmax_abs > 0.0) {
      for (double rel_thr : {1e-5, 1e-6, 1e-7}) {
        QpPolish qp = regmod_polish_at(D_in, y_in, known, *prior_in, gamma,
                                       res.x, rel_thr * xmax_abs);
        if (!qp.ok) continue;
        Vec r = gemv(D_in, qp.x);
        for (std::size_t i = 0; i < m; ++i) r[i] -= y_in[i];
        double relres = nrm2(r) / std::max(nrm2(y_in), 1.0);
        double obj_p = objective_value(qp.x, comp, known, prior_in, gamma);
        double slack = std::max(res.duality_gap * std::max(1.0, res.objective),
                                1e-12 * (1.0 + std::abs(res.objective)));
        if (relres <= 1e-8 && obj_p <= res.objective + slack) {
          res.x = std::move(qp.x);
          res.objective = obj_p;
          res.primal_residual = relres;
          res.polished = true;
        }
      }
    }
  }

  // Certified optimality gap by weak duality; tighter and rigorous, unlike
  // the interior-point surrogate.
  if (res.status != SolveStatus::infeasible && !res.x.empty()) {
    DualBound db = reconstruct_dual(D_in, y_in, known, prior_in, gamma, res.x);
    if (db.ok) {
      double gap = res.objective - db.value;
      if (gap > -1e-9 * std::max(1.0, std::abs(res.objective))) {
        gap = std::max(gap, 0.0);
        double rel = gap / std::max(1.0, std::abs(res.objective));
        if (rel < res.duality_gap) {
          res.duality_gap = rel;
          res.certificate = std::move(db.w);
        }
      }
    }
    res.status = (res.duality_gap <= cfg.gap_tol &&
                  res.primal_residual <= cfg.feas_tol)
                     ? SolveStatus::converged
                     : SolveStatus::max_iter;
  }
  return res;
}

SolverResult solve_core_normalized(const Mat& D, const Vec& y,
                                   const IndexSet& known, const Vec* prior,
                                   double gamma, const SolverConfig& cfg) {
  const std::size_t m = D.rows, n = D.cols;
  SolverResult res;
  const IndexSet comp = complement(known, n);
  const std::size_t p = comp.size(), k = known.size();
  const double yscale = std::max(nrm2(y), 1.0);

  // Strictly feasible start: the min-norm solution of Ax = y.
  MinNorm mn = min_norm_solution(D, y);
  if (!mn.ok) {
    res.status = SolveStatus::infeasible;
    res.x.assign(n, 0.0);
    return res;
  }
  {
    Vec r = gemv(D, mn.x);
    for (std::size_t i = 0; i < m; ++i) r[i] -= y[i];
    if (nrm2(r) / yscale > 1e-6) {
      res.status = SolveStatus::infeasible;
      res.x = mn.x;
      res.primal_residual = nrm2(r) / yscale;
      return res;
    }
  }

  const Mat At = D.transposed();

  Workspace w;
  w.x = mn.x;
  w.u.assign(p, 0.0);
  double xmax = 0.0;
  for (std::size_t i = 0; i < p; ++i) xmax = std::max(xmax, std::abs(w.x[comp[i]]));
  if (xmax == 0.0) {
    for (std::size_t i = 0; i < p; ++i) w.u[i] = 1e-2;
  } else {
    for (std::size_t i = 0; i < p; ++i)
      w.u[i] = 0.95 * std::abs(w.x[comp[i]]) + 0.10 * xmax;
  }
  w.f1.assign(p, 0.0);
  w.f2.assign(p, 0.0);
  w.lam1.assign(p, 0.0);
  w.lam2.assign(p, 0.0);
  for (std::size_t i = 0; i < p; ++i) {
    w.f1[i] = w.x[comp[i]] - w.u[i];
    w.f2[i] = -w.x[comp[i]] - w.u[i];
    w.lam1[i] = -1.0 / w.f1[i];
    w.lam2[i] = -1.0 / w.f2[i];
  }
  w.v.assign(m, 0.0);
  w.Atv.assign(n, 0.0);
  w.Ax = gemv(D, w.x);

  w.q1.assign(p, 0.0); w.q2.assign(p, 0.0);
  w.sig1.assign(p, 0.0); w.sig2.assign(p, 0.0); w.sigx.assign(p, 0.0);
  w.wc.assign(p, 0.0); w.w2.assign(p, 0.0);
  w.du.assign(p, 0.0); w.dlam1.assign(p, 0.0); w.dlam2.assign(p, 0.0);
  w.dxc.assign(p, 0.0);
  w.lam1c.assign(p, 0.0); w.lam2c.assign(p, 0.0);
  w.f1c.assign(p, 0.0); w.f2c.assign(p, 0.0);
  w.dx.assign(n, 0.0);
  w.dv.assign(m, 0.0);
  w.Adx.assign(m, 0.0);
  w.Atdv_n.assign(n, 0.0);

  Mat M(m + k, m + k);
  Vec rhs(m + k), sol(m + k);
  Vec xcand(n), vcand(m), Axcand(m), Atvcand(n), ucand(p);

  const double mu = cfg.barrier_mu;
  int iter = 0;
  bool stalled = false;

  auto rel_gap_of = [&](double sdg) {
    double obj = objective_value(w.x, comp, known, prior, gamma);
    return sdg / std::max(1.0, std::abs(obj));
  };

  for (iter = 0; iter < cfg.max_iters; ++iter) {
    double sdg = 0.0;
    for (std::size_t i = 0; i < p; ++i)
      sdg -= w.f1[i] * w.lam1[i] + w.f2[i] * w.lam2[i];
    double rpri = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double r = w.Ax[i] - y[i];
      rpri += r * r;
    }
    rpri = std::sqrt(rpri) / yscale;
    res.duality_gap = rel_gap_of(sdg);
    res.primal_residual = rpri;
    if (res.duality_gap <= cfg.gap_tol && rpri <= cfg.feas_tol) {
      res.status = SolveStatus::converged;
      break;
    }
    if (!std::isfinite(sdg)) {
      stalled = true;
      break;
    }

    const double tau = mu * 2.0 * double(p) / sdg;
    const double inv_tau = 1.0 / tau;

    double res0_sq = residual_norm_sq(w.x, w.lam1, w.lam2, w.f1, w.f2, w.Atv,
                                      w.Ax, y, comp, known, prior, gamma,
                                      inv_tau);

    for (std::size_t i = 0; i < p; ++i) {
      w.q1[i] = w.lam1[i] / w.f1[i];
      w.q2[i] = w.lam2[i] / w.f2[i];
      w.sig1[i] = -w.q1[i] - w.q2[i];
      w.sig2[i] = w.q1[i] - w.q2[i];
      w.sigx[i] = w.sig1[i] - w.sig2[i] * w.sig2[i] / w.sig1[i];
      double w1 = inv_tau * (1.0 / w.f1[i] - 1.0 / w.f2[i]) - w.Atv[comp[i]];
      w.w2[i] = -1.0 - inv_tau * (1.0 / w.f1[i] + 1.0 / w.f2[i]);
      w.wc[i] = w1 - (w.sig2[i] / w.sig1[i]) * w.w2[i];
    }

    // Augmented Newton system over (dv, dx on the known set):
    //   [ H      -A_known ] [dv ]   [ rp + A_comp (wc/sigx) ]
    //   [ A_k'   2*gamma  ] [dxk] = [ wT ]
    // with H = A_comp diag(1/sigx) A_comp'.
    std::fill(M.a.begin(), M.a.end(), 0.0);
    for (std::size_t t = 0; t < p; ++t) {
      const double* arow = At.row(comp[t]);
      const double wgt = 1.0 / w.sigx[t];
      for (std::size_t r = 0; r < m; ++r)
        kernels::axpy(wgt * arow[r], arow + r, M.row(r) + r, m - r);
    }
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < r; ++c) M(r, c) = M(c, r);
    for (std::size_t j = 0; j < k; ++j) {
      const double* arow = At.row(known[j]);
      for (std::size_t r = 0; r < m; ++r) {
        M(r, m + j) = -arow[r];
        M(m + j, r) = arow[r];
      }
      M(m + j, m + j) = 2.0 * gamma;
    }
    std::fill(rhs.begin(), rhs.end(), 0.0);
    for (std::size_t t = 0; t < p; ++t)
      kernels::axpy(w.wc[t] / w.sigx[t], At.row(comp[t]), rhs.data(), m);
    for (std::size_t i = 0; i < m; ++i) rhs[i] += w.Ax[i] - y[i];
    for (std::size_t j = 0; j < k; ++j) {
      double wT = -w.Atv[known[j]];
      if (gamma > 0.0 && prior)
        wT -= 2.0 * gamma * (w.x[known[j]] - (*prior)[j]);
      rhs[m + j] = wT;
    }

    Lu lu = lu_factor(M);
    if (!lu.ok) {
      // Jitter the diagonal once; the system can get stiff near the optimum.
      for (std::size_t r = 0; r < m + k; ++r) M(r, r) += 1e-10 * (1.0 + std::abs(M(r, r)));
      lu = lu_factor(M);
      if (!lu.ok) {
        stalled = true;
        break;
      }
    }
    sol = lu_solve(lu, rhs);
    {
      // One step of iterative refinement; the system gets stiff as the
      // barrier sharpens and the raw LU solution loses digits.
      Vec resid(m + k);
      gemv(M, sol.data(), resid.data());
      for (std::size_t i = 0; i < m + k; ++i) resid[i] = rhs[i] - resid[i];
      Vec corr = lu_solve(lu, resid);
      for (std::size_t i = 0; i < m + k; ++i) sol[i] += corr[i];
    }
    std::copy(sol.begin(), sol.begin() + m, w.dv.begin());

    gemv(At, w.dv.data(), w.Atdv_n.data());  // A' dv, length n
    for (std::size_t t = 0; t < p; ++t)
      w.dxc[t] = (w.wc[t] - w.Atdv_n[comp[t]]) / w.sigx[t];
    std::fill(w.dx.begin(), w.dx.end(), 0.0);
    for (std::size_t t = 0; t < p; ++t) w.dx[comp[t]] = w.dxc[t];
    for (std::size_t j = 0; j < k; ++j) w.dx[known[j]] = sol[m + j];
    for (std::size_t t = 0; t < p; ++t) {
      w.du[t] = (w.w2[t] - w.sig2[t] * w.dxc[t]) / w.sig1[t];
      w.dlam1[t] = -w.q1[t] * (w.dxc[t] - w.du[t]) - w.lam1[t] - inv_tau / w.f1[t];
      w.dlam2[t] = w.q2[t] * (w.dxc[t] + w.du[t]) - w.lam2[t] - inv_tau / w.f2[t];
    }
    gemv(D, w.dx.data(), w.Adx.data());

    // Longest step keeping lam > 0 and f < 0, backed off 1%.
    double s = 1.0;
    for (std::size_t t = 0; t < p; ++t) {
      if (w.dlam1[t] < 0) s = std::min(s, -w.lam1[t] / w.dlam1[t]);
      if (w.dlam2[t] < 0) s = std::min(s, -w.lam2[t] / w.dlam2[t]);
      double df1 = w.dxc[t] - w.du[t];
      double df2 = -w.dxc[t] - w.du[t];
      if (df1 > 0) s = std::min(s, -w.f1[t] / df1);
      if (df2 > 0) s = std::min(s, -w.f2[t] / df2);
    }
    s *= 0.99;

    bool accepted = false;
    for (int bt = 0; bt < 48; ++bt) {
      for (std::size_t i = 0; i < n; ++i) {
        xcand[i] = w.x[i] + s * w.dx[i];
        Atvcand[i] = w.Atv[i] + s * w.Atdv_n[i];
      }
      for (std::size_t i = 0; i < m; ++i) {
        vcand[i] = w.v[i] + s * w.dv[i];
        Axcand[i] = w.Ax[i] + s * w.Adx[i];
      }
      for (std::size_t t = 0; t < p; ++t) {
        ucand[t] = w.u[t] + s * w.du[t];
        w.lam1c[t] = w.lam1[t] + s * w.dlam1[t];
        w.lam2c[t] = w.lam2[t] + s * w.dlam2[t];
        w.f1c[t] = xcand[comp[t]] - ucand[t];
        w.f2c[t] = -xcand[comp[t]] - ucand[t];
      }
      double res_sq = residual_norm_sq(xcand, w.lam1c, w.lam2c, w.f1c, w.f2c,
                                       Atvcand, Axcand, y, comp, known, prior,
                                       gamma, inv_tau);
      if (std::sqrt(res_sq) <= (1.0 - cfg.ls_alpha * s) * std::sqrt(res0_sq)) {
        accepted = true;
        break;
      }
      s *= cfg.ls_beta;
      if (s < 1e-14) break;
    }
    if (!accepted) {
      stalled = true;
      break;
    }
    w.x.swap(xcand);
    w.Atv.swap(Atvcand);
    w.v.swap(vcand);
    w.Ax.swap(Axcand);
    w.u.swap(ucand);
    w.lam1.swap(w.lam1c);
    w.lam2.swap(w.lam2c);
    w.f1.swap(w.f1c);
    w.f2.swap(w.f2c);
    res.objective_trace.push_back(
        objective_value(w.x, comp, known, prior, gamma));
  }

  res.x = w.x;
  res.iterations = iter;
  res.certificate.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) res.certificate[i] = -w.v[i];
  res.objective = objective_value(w.x, comp, known, prior, gamma);
  {
    Vec r = gemv(D, w.x);
    for (std::size_t i = 0; i < m; ++i) r[i] -= y[i];
    res.primal_residual = nrm2(r) / yscale;
  }
  if (res.status != SolveStatus::converged) {
    double sdg = 0.0;
    for (std::size_t i = 0; i < p; ++i)
      sdg -= w.f1[i] * w.lam1[i] + w.f2[i] * w.lam2[i];
    res.duality_gap = rel_gap_of(sdg);
    res.status = SolveStatus::max_iter;
    (void)stalled;
  }
  return res;
}

}  // namespace

SolverResult solve_modcs(const Mat& A, const Vec& y, const IndexSet& known,
                         const SolverConfig& cfg) {
  return solve_core(A, y, known, nullptr, 0.0, cfg);
}

SolverResult solve_modcs(const LinearOperator& A, const Vec& y,
                         const IndexSet& known, const SolverConfig& cfg) {
  return solve_core(A.dense(), y, known, nullptr, 0.0, cfg);
}

SolverResult solve_bp(const Mat& A, const Vec& y, const SolverConfig& cfg) {
  return solve_core(A, y, {}, nullptr, 0.0, cfg);
}

SolverResult solve_bp(const LinearOperator& A, const Vec& y,
                      const SolverConfig& cfg) {
  return solve_core(A.dense(), y, {}, nullptr, 0.0, cfg);
}

SolverResult solve_regmodcs(const Mat& A, const Vec& y, const IndexSet& known,
                            const Vec& prior, double gamma,
                            const SolverConfig& cfg) {
  return solve_core(A, y, known, &prior, gamma, cfg);
}

SolverResult solve_regmodcs(const LinearOperator& A, const Vec& y,
                            const IndexSet& known, const Vec& prior,
                            double gamma, const SolverConfig& cfg) {
  return solve_core(A.dense(), y, known, &prior, gamma, cfg);
}

namespace {

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

}  // namespace

L0Result solve_l0_bruteforce(const Mat& A, const Vec& y, const IndexSet& known,
                             std::size_t max_card, double tol,
                             std::size_t budget) {
  const std::size_t n = A.cols;
  for (std::size_t i = 0; i < known.size(); ++i)
    if (known[i] >= n) throw parameter_error("l0: known index out of range");
  const IndexSet comp = complement(known, n);
  double total = 0.0;
  for (std::size_t j = 0; j <= std::min(max_card, comp.size()); ++j)
    total += binomial_capped(comp.size(), j, double(budget));
  if (total > double(budget))
    throw budget_error("l0 brute force: enumeration exceeds the subset budget");

  const double yn = nrm2(y);
  L0Result out;

  for (std::size_t j = 0; j <= std::min(max_card, comp.size()); ++j) {
    std::vector<std::size_t> pick(j);
    for (std::size_t i = 0; i < j; ++i) pick[i] = i;
    bool more = true;
    std::vector<Vec> distinct;
    while (more) {
      IndexSet support(known);
      for (std::size_t i = 0; i < j; ++i) support.push_back(comp[pick[i]]);
      std::sort(support.begin(), support.end());
      ++out.subsets_tried;
      LsOnSupport ls = least_squares_on_support(A, y, support);
      if (ls.ok) {
        Vec r = gemv(A, ls.x);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] -= y[i];
        if (nrm2(r) <= tol * std::max(yn, 1e-300)) {
          if (!out.found) {
            out.found = true;
            out.x = ls.x;
            out.cardinality = j;
            for (std::size_t i = 0; i < j; ++i) out.chosen.push_back(comp[pick[i]]);
            std::sort(out.chosen.begin(), out.chosen.end());
          }
          bool is_new = true;
          for (const Vec& other : distinct) {
            double diff = 0.0, scale = 1.0;
            for (std::size_t i = 0; i < n; ++i) {
              diff = std::max(diff, std::abs(other[i] - ls.x[i]));
              scale = std::max(scale, std::abs(other[i]));
            }
            if (diff <= 1e-6 * scale) {
              is_new = false;
              break;
            }
          }
          if (is_new) distinct.push_back(ls.x);
        }
      }
      // Advance the combination (lexicographic).
      if (j == 0) {
        more = false;
      } else {
        std::size_t i = j;
        while (i-- > 0) {
          if (pick[i] != i + comp.size() - j) {
            ++pick[i];
            for (std::size_t t = i + 1; t < j; ++t) pick[t] = pick[t - 1] + 1;
            break;
          }
          if (i == 0) {
            more = false;
            break;
          }
        }
      }
    }
    if (out.found) {
      out.unique_solution = (distinct.size() == 1);
      return out;
    }
  }
  return out;
}

double nrmse(const Vec& truth, const Vec& estimate) {
  if (truth.size() != estimate.size())
    throw parameter_error("nrmse: size mismatch");
  double tn = nrm2(truth);
  if (tn == 0.0) throw parameter_error("nrmse: zero reference signal");
  double d = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    double e = truth[i] - estimate[i];
    d += e * e;
  }
  return std::sqrt(d) / tn;
}

bool is_exact(const Vec& truth, const Vec& estimate) {
  return nrmse(truth, estimate) < 1e-5;
}

}  // namespace modcs
