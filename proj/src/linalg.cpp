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

#include "modcs/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "modcs/errors.hpp"
#include "modcs/kernels.hpp"

namespace modcs {

Mat Mat::identity(std::size_t n) {
  Mat I(n, n);
  for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
  return I;
}

Mat Mat::transposed() const {
  Mat T(cols, rows);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) T(j, i) = (*this)(i, j);
  return T;
}

Vec Mat::col(std::size_t j) const {
  Vec c(rows);
  for (std::size_t i = 0; i < rows; ++i) c[i] = (*this)(i, j);
  return c;
}

void gemv(const Mat& A, const double* x, double* y) {
  for (std::size_t i = 0; i < A.rows; ++i)
    y[i] = kernels::dot(A.row(i), x, A.cols);
}

void gemv_t(const Mat& A, const double* y, double* x) {
  std::fill(x, x + A.cols, 0.0);
  for (std::size_t i = 0; i < A.rows; ++i)
    kernels::axpy(y[i], A.row(i), x, A.cols);
}

Vec gemv(const Mat& A, const Vec& x) {
  if (x.size() != A.cols) throw parameter_error("gemv: dimension mismatch");
  Vec y(A.rows);
  gemv(A, x.data(), y.data());
  return y;
}

Vec gemv_t(const Mat& A, const Vec& y) {
  if (y.size() != A.rows) throw parameter_error("gemv_t: dimension mismatch");
  Vec x(A.cols);
  gemv_t(A, y.data(), x.data());
  return x;
}

Mat matmul(const Mat& A, const Mat& B) {
  if (A.cols != B.rows) throw parameter_error("matmul: dimension mismatch");
  Mat C(A.rows, B.cols);
  for (std::size_t i = 0; i < A.rows; ++i) {
    const double* arow = A.row(i);
    double* crow = C.row(i);
    for (std::size_t k = 0; k < A.cols; ++k)
      kernels::axpy(arow[k], B.row(k), crow, B.cols);
  }
  return C;
}

double dot(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw parameter_error("dot: size mismatch");
  return kernels::dot(x.data(), y.data(), x.size());
}

double nrm2_sq(const Vec& x) { return kernels::nrm2_sq(x.data(), x.size()); }
double nrm2(const Vec& x) { return std::sqrt(nrm2_sq(x)); }

double linf(const Vec& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

Cholesky cholesky(const Mat& A) {
  const std::size_t n = A.rows;
  Cholesky f;
  f.L = Mat(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = A(j, j) - kernels::nrm2_sq(f.L.row(j), j);
    if (d <= 0.0 || !std::isfinite(d)) return f;  // ok stays false
    double ljj = std::sqrt(d);
    f.L(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i)
      f.L(i, j) = (A(i, j) - kernels::dot(f.L.row(i), f.L.row(j), j)) / ljj;
  }
  f.ok = true;
  return f;
}

Vec chol_solve(const Cholesky& f, const Vec& b) {
  const std::size_t n = f.L.rows;
  Vec y(b);
  for (std::size_t i = 0; i < n; ++i)
    y[i] = (y[i] - kernels::dot(f.L.row(i), y.data(), i)) / f.L(i, i);
  // Back substitution with L' (column access on L).
  for (std::size_t ii = n; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= f.L(j, ii) * y[j];
    y[ii] = s / f.L(ii, ii);
  }
  return y;
}

Lu lu_factor(Mat A) {
  const std::size_t n = A.rows;
  Lu f;
  f.piv.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(A(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      double v = std::abs(A(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    f.piv[k] = p;
    if (p != k)
      for (std::size_t j = 0; j < n; ++j) std::swap(A(k, j), A(p, j));
    double pivot = A(k, k);
    if (pivot == 0.0 || !std::isfinite(pivot)) {
      f.lu = std::move(A);
      return f;  // ok stays false
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      double m = A(i, k) / pivot;
      A(i, k) = m;
      kernels::axpy(-m, A.row(k) + k + 1, A.row(i) + k + 1, n - k - 1);
    }
  }
  f.lu = std::move(A);
  f.ok = true;
  return f;
}

Vec lu_solve(const Lu& f, const Vec& b) {
  const std::size_t n = f.lu.rows;
  Vec x(b);
  for (std::size_t k = 0; k < n; ++k) {
    if (f.piv[k] != k) std::swap(x[k], x[f.piv[k]]);
    // forward eliminate below k
  }
  for (std::size_t i = 1; i < n; ++i)
    x[i] -= kernels::dot(f.lu.row(i), x.data(), i);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = x[ii] - kernels::dot(f.lu.row(ii) + ii + 1, x.data() + ii + 1,
                                    n - ii - 1);
    x[ii] = s / f.lu(ii, ii);
  }
  return x;
}

Vec symmetric_eigenvalues(Mat S) {
  const std::size_t n = S.rows;
  if (n == 0) return {};
  auto off_norm = [&]() {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += S(i, j) * S(i, j);
    return std::sqrt(2.0 * s);
  };
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(S(i, j)));
  const double tol = 1e-15 * std::max(scale, 1e-300) * n;
  for (int sweep = 0; sweep < 100 && off_norm() > tol; ++sweep) {
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = S(p, q);
        if (std::abs(apq) <= tol / (n * n + 1)) continue;
        double app = S(p, p), aqq = S(q, q);
        double theta = (aqq - app) / (2.0 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double skp = S(k, p), skq = S(k, q);
          S(k, p) = c * skp - s * skq;
          S(k, q) = s * skp + c * skq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double spk = S(p, k), sqk = S(q, k);
          S(p, k) = c * spk - s * sqk;
          S(q, k) = s * spk + c * sqk;
        }
      }
    }
  }
  Vec ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = S(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

double spectral_norm(const Mat& M) {
  // Gram on the smaller side keeps the eigensolve cheap.
  const bool tall = M.rows >= M.cols;
  const std::size_t k = tall ? M.cols : M.rows;
  Mat G(k, k);
  if (tall) {
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i; j < k; ++j) {
        double s = 0.0;
        for (std::size_t r = 0; r < M.rows; ++r) s += M(r, i) * M(r, j);
        G(i, j) = G(j, i) = s;
      }
  } else {
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i; j < k; ++j) {
        double s = kernels::dot(M.row(i), M.row(j), M.cols);
        G(i, j) = G(j, i) = s;
      }
  }
  Vec ev = symmetric_eigenvalues(std::move(G));
  double lmax = ev.empty() ? 0.0 : ev.back();
  return std::sqrt(std::max(0.0, lmax));
}

MinNorm min_norm_solution(const Mat& A, const Vec& b) {
  MinNorm out;
  const std::size_t m = A.rows;
  Mat G(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j)
      G(i, j) = G(j, i) = kernels::dot(A.row(i), A.row(j), A.cols);
  Cholesky f = cholesky(G);
  if (!f.ok) {
    // Jittered retry; callers decide feasibility from the residual.
    double tr = 0.0;
    for (std::size_t i = 0; i < m; ++i) tr += G(i, i);
    double jitter = 1e-12 * std::max(tr / std::max<std::size_t>(m, 1), 1.0);
    for (std::size_t i = 0; i < m; ++i) G(i, i) += jitter;
    f = cholesky(G);
    if (!f.ok) return out;
  }
  Vec w = chol_solve(f, b);
  out.x = gemv_t(A, w);
  out.ok = true;
  return out;
}

LsOnSupport least_squares_on_support(const Mat& A, const Vec& b,
                                     const std::vector<std::size_t>& support) {
  LsOnSupport out;
  const std::size_t k = support.size();
  out.x.assign(A.cols, 0.0);
  if (k == 0) {
    out.ok = true;
    return out;
  }
  if (k > A.rows) return out;
  // Normal equations on the gathered columns.
  Mat Bt(k, A.rows);  // rows are the selected columns of A
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < A.rows; ++i) Bt(j, i) = A(i, support[j]);
  Mat G(k, k);
  Vec rhs(k);
  for (std::size_t i = 0; i < k; ++i) {
    rhs[i] = kernels::dot(Bt.row(i), b.data(), A.rows);
    for (std::size_t j = i; j < k; ++j)
      G(i, j) = G(j, i) = kernels::dot(Bt.row(i), Bt.row(j), A.rows);
  }
  Cholesky f = cholesky(G);
  if (!f.ok) {
    double tr = 0.0;
    for (std::size_t i = 0; i < k; ++i) tr += G(i, i);
    for (std::size_t i = 0; i < k; ++i) G(i, i) += 1e-12 * std::max(tr / k, 1.0);
    f = cholesky(G);
    if (!f.ok) return out;
  }
  Vec z = chol_solve(f, rhs);
  for (std::size_t j = 0; j < k; ++j) out.x[support[j]] = z[j];
  out.ok = true;
  return out;
}

}  // namespace modcs
