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

#include "modcs/operators.hpp"

#include <cmath>
#include <functional>
#include <mutex>

#include <json.hpp>

#include "modcs/errors.hpp"
#include "modcs/fft.hpp"
#include "modcs/kernels.hpp"
#include "modcs/rng.hpp"
#include "modcs/wavelet.hpp"

namespace modcs {

struct LinearOperator::Impl {
  std::size_t rows = 0, cols = 0;
  Kind kind = Kind::dense;
  std::function<void(const double*, double*)> apply_fn;
  std::function<void(const double*, double*)> adjoint_fn;
  nlohmann::json meta;
  // Direct dense storage when available; otherwise materialized on demand.
  std::shared_ptr<const Mat> direct;
  mutable std::once_flag dense_once;
  mutable std::shared_ptr<const Mat> dense_cache;
};

LinearOperator::LinearOperator(std::shared_ptr<const Impl> impl)
    : impl_(std::move(impl)) {}

std::size_t LinearOperator::rows() const { return impl_->rows; }
std::size_t LinearOperator::cols() const { return impl_->cols; }
LinearOperator::Kind LinearOperator::kind() const { return impl_->kind; }

void LinearOperator::apply(const double* x, double* y) const {
  impl_->apply_fn(x, y);
}

void LinearOperator::apply_adjoint(const double* y, double* x) const {
  impl_->adjoint_fn(y, x);
}

Vec LinearOperator::apply(const Vec& x) const {
  if (x.size() != cols()) throw parameter_error("apply: dimension mismatch");
  Vec y(rows());
  apply(x.data(), y.data());
  return y;
}

Vec LinearOperator::apply_adjoint(const Vec& y) const {
  if (y.size() != rows()) throw parameter_error("apply_adjoint: dimension mismatch");
  Vec x(cols());
  apply_adjoint(y.data(), x.data());
  return x;
}

Vec LinearOperator::column(std::size_t j) const {
  if (j >= cols()) throw parameter_error("column: index out of range");
  if (impl_->direct) return impl_->direct->col(j);
  Vec e(cols(), 0.0);
  e[j] = 1.0;
  return apply(e);
}

const Mat& LinearOperator::dense() const {
  std::call_once(impl_->dense_once, [&] {
    if (impl_->direct) {
      impl_->dense_cache = impl_->direct;
      return;
    }
    auto M = std::make_shared<Mat>(rows(), cols());
    Vec e(cols(), 0.0);
    Vec y(rows());
    for (std::size_t j = 0; j < cols(); ++j) {
      e[j] = 1.0;
      apply(e.data(), y.data());
      e[j] = 0.0;
      for (std::size_t i = 0; i < rows(); ++i) (*M)(i, j) = y[i];
    }
    impl_->dense_cache = M;
  });
  return *impl_->dense_cache;
}

nlohmann::json LinearOperator::spec() const { return impl_->meta; }

LinearOperator dense_operator(Mat A, std::string label) {
  auto impl = std::make_shared<LinearOperator::Impl>();
  impl->rows = A.rows;
  impl->cols = A.cols;
  impl->kind = LinearOperator::Kind::dense;
  impl->meta = {{"kind", std::move(label)}, {"rows", A.rows}, {"cols", A.cols}};
  auto shared = std::make_shared<const Mat>(std::move(A));
  impl->direct = shared;
  impl->apply_fn = [shared](const double* x, double* y) { gemv(*shared, x, y); };
  impl->adjoint_fn = [shared](const double* y, double* x) { gemv_t(*shared, y, x); };
  return LinearOperator(impl);
}

LinearOperator gaussian_operator(std::size_t rows, std::size_t cols,
                                 std::uint64_t seed, bool normalize) {
  if (rows == 0 || rows > cols)
    throw parameter_error("gaussian_operator: need 0 < rows <= cols");
  Rng rng = Rng::stream(seed, {0x6761757373ULL});
  Mat A(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) A(i, j) = rng.normal();
  if (normalize) {
    for (std::size_t j = 0; j < cols; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < rows; ++i) s += A(i, j) * A(i, j);
      double inv = 1.0 / std::sqrt(s);
      for (std::size_t i = 0; i < rows; ++i) A(i, j) *= inv;
    }
  }
  auto impl = std::make_shared<LinearOperator::Impl>();
  impl->rows = rows;
  impl->cols = cols;
  impl->kind = LinearOperator::Kind::dense;
  impl->meta = {{"kind", "gaussian"}, {"rows", rows},          {"cols", cols},
                {"seed", seed},       {"normalized", normalize}};
  auto shared = std::make_shared<const Mat>(std::move(A));
  impl->direct = shared;
  impl->apply_fn = [shared](const double* x, double* y) { gemv(*shared, x, y); };
  impl->adjoint_fn = [shared](const double* y, double* x) { gemv_t(*shared, y, x); };
  return LinearOperator(impl);
}

LinearOperator partial_fourier_operator(std::size_t side, const IndexSet& mask) {
  if (side == 0 || (side & (side - 1)) != 0)
    throw parameter_error("partial_fourier_operator: side must be a power of two");
  const std::size_t n = side * side;
  if (mask.empty()) throw parameter_error("partial_fourier_operator: empty mask");
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i] >= n)
      throw parameter_error("partial_fourier_operator: mask index out of range");
    if (i > 0 && mask[i] <= mask[i - 1])
      throw parameter_error("partial_fourier_operator: mask entries must be distinct");
  }
  auto impl = std::make_shared<LinearOperator::Impl>();
  const std::size_t msel = mask.size();
  impl->rows = 2 * msel;
  impl->cols = n;
  impl->kind = LinearOperator::Kind::partial_fourier;
  impl->meta = {{"kind", "partial_fourier"},
                {"rows", 2 * msel},
                {"cols", n},
                {"side", side},
                {"mask", mask}};
  IndexSet sel = mask;
  impl->apply_fn = [side, n, sel](const double* x, double* y) {
    CVec grid(n);
    for (std::size_t i = 0; i < n; ++i) grid[i] = x[i];
    CVec spec = dft2_unitary(grid, side, false);
    const std::size_t msel2 = sel.size();
    for (std::size_t r = 0; r < msel2; ++r) {
      y[r] = spec[sel[r]].real();
      y[msel2 + r] = spec[sel[r]].imag();
    }
  };
  impl->adjoint_fn = [side, n, sel](const double* y, double* x) {
    CVec spec(n, {0.0, 0.0});
    const std::size_t msel2 = sel.size();
    for (std::size_t r = 0; r < msel2; ++r)
      spec[sel[r]] = {y[r], y[msel2 + r]};
    CVec grid = dft2_unitary(spec, side, true);
    for (std::size_t i = 0; i < n; ++i) x[i] = grid[i].real();
  };
  return LinearOperator(impl);
}

LinearOperator partial_fourier_operator(std::size_t side, std::size_t count,
                                        std::uint64_t seed) {
  if (count == 0 || count > side * side)
    throw parameter_error("partial_fourier_operator: bad mask count");
  Rng rng = Rng::stream(seed, {0x666f75726965ULL});
  IndexSet mask = rng.random_subset(side * side, count);
  return partial_fourier_operator(side, mask);
}

LinearOperator idwt2_operator(std::size_t side, std::size_t levels) {
  const std::size_t n = side * side;
  auto impl = std::make_shared<LinearOperator::Impl>();
  impl->rows = n;
  impl->cols = n;
  impl->kind = LinearOperator::Kind::composition;
  impl->meta = {{"kind", "idwt2_db4"}, {"rows", n}, {"cols", n},
                {"side", side},        {"levels", levels}};
  impl->apply_fn = [side, levels, n](const double* x, double* y) {
    Vec in(x, x + n);
    Vec out = idwt2_db4(in, side, levels);
    std::copy(out.begin(), out.end(), y);
  };
  // The transform is orthonormal, so the adjoint is the forward transform.
  impl->adjoint_fn = [side, levels, n](const double* y, double* x) {
    Vec in(y, y + n);
    Vec out = dwt2_db4(in, side, levels);
    std::copy(out.begin(), out.end(), x);
  };
  // Trip the dimension checks early.
  (void)dwt2_db4(Vec(n, 0.0), side, levels);
  return LinearOperator(impl);
}

LinearOperator compose_measurement(const LinearOperator& H,
                                   const LinearOperator& basis) {
  if (H.cols() != basis.rows())
    throw parameter_error("compose_measurement: inner dimensions disagree");
  auto impl = std::make_shared<LinearOperator::Impl>();
  impl->rows = H.rows();
  impl->cols = basis.cols();
  impl->kind = LinearOperator::Kind::composition;
  impl->meta = {{"kind", "composition"},
                {"rows", H.rows()},
                {"cols", basis.cols()},
                {"left", H.spec()},
                {"right", basis.spec()}};
  LinearOperator h = H, b = basis;
  impl->apply_fn = [h, b](const double* x, double* y) {
    Vec mid(b.rows());
    b.apply(x, mid.data());
    h.apply(mid.data(), y);
  };
  impl->adjoint_fn = [h, b](const double* y, double* x) {
    Vec mid(h.cols());
    h.apply_adjoint(y, mid.data());
    b.apply_adjoint(mid.data(), x);
  };
  return LinearOperator(impl);
}

}  // namespace modcs
