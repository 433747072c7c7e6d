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

#ifndef MODCS_LINALG_HPP
#define MODCS_LINALG_HPP

#include <cstddef>
#include <vector>

namespace modcs {

using Vec = std::vector<double>;

/// Dense row-major matrix.
struct Mat {
  std::size_t rows = 0, cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

  double* row(std::size_t i) { return a.data() + i * cols; }
  const double* row(std::size_t i) const { return a.data() + i * cols; }
  double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  static Mat identity(std::size_t n);
  Mat transposed() const;
  Vec col(std::size_t j) const;
};

// Kernel-backed products.
void gemv(const Mat& A, const double* x, double* y);    // y = A x
void gemv_t(const Mat& A, const double* y, double* x);  // x = A' y
Vec gemv(const Mat& A, const Vec& x);
Vec gemv_t(const Mat& A, const Vec& y);
Mat matmul(const Mat& A, const Mat& B);

double dot(const Vec& x, const Vec& y);
double nrm2(const Vec& x);
double nrm2_sq(const Vec& x);
double linf(const Vec& x);

/// A = L L' for symmetric positive definite A (lower factor stored).
/// ok=false when a pivot is not strictly positive.
struct Cholesky {
  Mat L;
  bool ok = false;
};
Cholesky cholesky(const Mat& A);
Vec chol_solve(const Cholesky& f, const Vec& b);

/// PA = LU with partial pivoting; ok=false on a vanishing pivot.
struct Lu {
  Mat lu;
  std::vector<std::size_t> piv;
  bool ok = false;
};
Lu lu_factor(Mat A);
Vec lu_solve(const Lu& f, const Vec& b);

/// Eigenvalues of a symmetric matrix, ascending (cyclic Jacobi).
Vec symmetric_eigenvalues(Mat S);
/// Largest singular value of a general matrix.
double spectral_norm(const Mat& M);

/// min-norm solution of A x = b for full row rank A (via A'(AA')^{-1} b).
/// ok=false if AA' is numerically singular.
struct MinNorm {
  Vec x;
  bool ok = false;
};
MinNorm min_norm_solution(const Mat& A, const Vec& b);

/// Least-squares solve of A_S z = b on a column subset (normal equations,
/// tiny ridge retry on failure). Returns the full-length vector, zero off S.
struct LsOnSupport {
  Vec x;
  bool ok = false;
};
LsOnSupport least_squares_on_support(const Mat& A, const Vec& b,
                                     const std::vector<std::size_t>& support);

}  // namespace modcs

#endif
