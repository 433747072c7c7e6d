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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace modcs::oracles {

namespace {

constexpr double kEps = 1e-10;

// One simplex phase on the tableau; basis holds the basic column per row.
// Returns false on unbounded.
bool simplex_iterate(Mat& T, std::vector<std::size_t>& basis) {
  const std::size_t rows = T.rows - 1;  // last row is the objective
  const std::size_t cols = T.cols - 1;  // last column is the rhs
  for (;;) {
    // Bland: entering variable = lowest index with negative reduced cost.
    std::size_t enter = cols;
    for (std::size_t j = 0; j < cols; ++j) {
      if (T(rows, j) < -kEps) {
        enter = j;
        break;
      }
    }
    if (enter == cols) return true;  // optimal
    // Ratio test, Bland tie-break on the basic variable index.
    std::size_t leave = rows;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rows; ++i) {
      if (T(i, enter) > kEps) {
        double ratio = T(i, cols) / T(i, enter);
        if (ratio < best - kEps ||
            (ratio < best + kEps && (leave == rows || basis[i] < basis[leave]))) {
          best = ratio;
          leave = i;
        }
      }
    }
    if (leave == rows) return false;  // unbounded
    // Pivot.
    double piv = T(leave, enter);
    for (std::size_t j = 0; j <= cols; ++j) T(leave, j) /= piv;
    for (std::size_t i = 0; i <= rows; ++i) {
      if (i == leave) continue;
      double f = T(i, enter);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= cols; ++j) T(i, j) -= f * T(leave, j);
    }
    basis[leave] = enter;
  }
}

}  // namespace

std::optional<double> simplex_min(const Mat& E, const Vec& b, const Vec& c) {
  const std::size_t m = E.rows, n = E.cols;
  // Phase 1 tableau with artificial variables; rows flipped so rhs >= 0.
  Mat T(m + 1, n + m + 1);
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    double sgn = b[i] < 0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) T(i, j) = sgn * E(i, j);
    T(i, n + i) = 1.0;
    T(i, n + m) = sgn * b[i];
    basis[i] = n + i;
  }
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += T(i, j);
    T(m, j) = -s;
  }
  double rhs_sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) rhs_sum += T(i, n + m);
  T(m, n + m) = -rhs_sum;
  if (!simplex_iterate(T, basis)) return std::nullopt;
  if (T(m, n + m) < -1e-7) return std::nullopt;  // infeasible

  // Drive artificial variables out of the basis where possible.
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] >= n) {
      std::size_t enter = n;
      for (std::size_t j = 0; j < n; ++j) {
        if (std::abs(T(i, j)) > 1e-8) {
          enter = j;
          break;
        }
      }
      if (enter == n) continue;  // redundant row
      double piv = T(i, enter);
      for (std::size_t j = 0; j <= n + m; ++j) T(i, j) /= piv;
      for (std::size_t r = 0; r <= m; ++r) {
        if (r == i) continue;
        double f = T(r, enter);
        if (f == 0.0) continue;
        for (std::size_t j = 0; j <= n + m; ++j) T(r, j) -= f * T(i, j);
      }
      basis[i] = enter;
    }
  }

  // Phase 2: original objective over the first n columns.
  Mat T2(m + 1, n + 1);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) T2(i, j) = T(i, j);
    T2(i, n) = T(i, n + m);
  }
  for (std::size_t j = 0; j < n; ++j) T2(m, j) = c[j];
  T2(m, n) = 0.0;
  // Reduce the objective row against the current basis.
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] >= n) continue;
    double f = T2(m, basis[i]);
    if (f == 0.0) continue;
    for (std::size_t j = 0; j <= n; ++j) T2(m, j) -= f * T2(i, j);
  }
  if (!simplex_iterate(T2, basis)) return std::nullopt;  // unbounded
  return -T2(m, n);
}

std::optional<double> l1_objective_lp(const Mat& A, const Vec& y,
                                      const IndexSet& known) {
  const std::size_t m = A.rows, n = A.cols;
  Mat E(m, 2 * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      E(i, j) = A(i, j);
      E(i, n + j) = -A(i, j);
    }
  Vec c(2 * n, 1.0);
  for (std::size_t j : known) {
    c[j] = 0.0;
    c[n + j] = 0.0;
  }
  return simplex_min(E, y, c);
}

Mat nullspace_basis(const Mat& A) {
  const std::size_t m = A.rows, n = A.cols;
  // Householder QR of A' (n x m); the trailing n-m columns of Q span null(A).
  Mat R = A.transposed();
  Mat Q = Mat::identity(n);
  for (std::size_t k = 0; k < std::min(m, n); ++k) {
    double norm = 0.0;
    for (std::size_t i = k; i < n; ++i) norm += R(i, k) * R(i, k);
    norm = std::sqrt(norm);
    if (norm < 1e-300) continue;
    Vec v(n, 0.0);
    double alpha = R(k, k) >= 0 ? -norm : norm;
    v[k] = R(k, k) - alpha;
    for (std::size_t i = k + 1; i < n; ++i) v[i] = R(i, k);
    double vtv = 0.0;
    for (std::size_t i = k; i < n; ++i) vtv += v[i] * v[i];
    if (vtv < 1e-300) continue;
    for (std::size_t j = 0; j < m; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < n; ++i) s += v[i] * R(i, j);
      s = 2.0 * s / vtv;
      for (std::size_t i = k; i < n; ++i) R(i, j) -= s * v[i];
    }
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < n; ++i) s += v[i] * Q(j, i);
      s = 2.0 * s / vtv;
      for (std::size_t i = k; i < n; ++i) Q(j, i) -= s * v[i];
    }
  }
  Mat Z(n, n - m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n - m; ++j) Z(i, j) = Q(i, m + j);
  return Z;
}

std::vector<std::complex<double>> direct_dft2(
    const std::vector<std::complex<double>>& grid, std::size_t side,
    bool inverse) {
  const double sign = inverse ? 2.0 : -2.0;
  std::vector<std::complex<double>> out(side * side, {0.0, 0.0});
  for (std::size_t p = 0; p < side; ++p)
    for (std::size_t q = 0; q < side; ++q) {
      std::complex<double> acc{0.0, 0.0};
      for (std::size_t r = 0; r < side; ++r)
        for (std::size_t cidx = 0; cidx < side; ++cidx) {
          double ang = sign * std::numbers::pi *
                       (double(p * r + q * cidx)) / double(side);
          acc += grid[r * side + cidx] *
                 std::complex<double>(std::cos(ang), std::sin(ang));
        }
      out[p * side + q] = acc / double(side);
    }
  return out;
}

double max_pairwise_coherence(const Mat& A) {
  double best = 0.0;
  for (std::size_t i = 0; i < A.cols; ++i)
    for (std::size_t j = i + 1; j < A.cols; ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < A.rows; ++r) s += A(r, i) * A(r, j);
      best = std::max(best, std::abs(s));
    }
  return best;
}

IndexSet energy_support_by_threshold(const Vec& x, double percent) {
  double total = 0.0;
  for (double v : x) total += v * v;
  const double target = (percent / 100.0) * total;
  // Candidate thresholds: just below each distinct squared value.
  std::vector<double> energies;
  for (double v : x) energies.push_back(v * v);
  std::sort(energies.begin(), energies.end(), std::greater<>());
  double cum = 0.0;
  for (std::size_t k = 0; k < energies.size(); ++k) {
    cum += energies[k];
    if (cum >= target) {
      double z = energies[k] * (1.0 - 1e-12);
      IndexSet out;
      for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] * x[i] > z) out.push_back(i);
      return out;
    }
  }
  IndexSet all(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) all[i] = i;
  return all;
}

long double g_bound_ld(long double n_over_m, long double frac) {
  if (frac <= 0.0L) return 0.0L;
  long double H = -frac * std::log(frac) - (1.0L - frac) * std::log(1.0L - frac);
  long double f = std::sqrt(n_over_m) * (std::sqrt(frac) + std::sqrt(2.0L * H));
  return (1.0L + f) * (1.0L + f) - 1.0L;
}

}  // namespace modcs::oracles
