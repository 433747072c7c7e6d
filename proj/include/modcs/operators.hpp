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

#ifndef MODCS_OPERATORS_HPP
#define MODCS_OPERATORS_HPP

#include <cstdint>
#include <memory>
#include <string>

#include <json.hpp>

#include "modcs/linalg.hpp"
#include "modcs/supports.hpp"

namespace modcs {

/// An m x n real linear map with apply, adjoint-apply and column extraction.
/// Immutable after construction; the dense materialization is cached lazily
/// and is thread-safe to request.
class LinearOperator {
 public:
  enum class Kind { dense, partial_fourier, composition };

  std::size_t rows() const;
  std::size_t cols() const;
  Kind kind() const;

  void apply(const double* x, double* y) const;
  void apply_adjoint(const double* y, double* x) const;
  Vec apply(const Vec& x) const;
  Vec apply_adjoint(const Vec& y) const;
  Vec column(std::size_t j) const;

  /// Column-by-column dense materialization (cached).
  const Mat& dense() const;

  /// Construction parameters (kind, dims, seed, mask, ...) for reports.
  nlohmann::json spec() const;

  struct Impl;
  explicit LinearOperator(std::shared_ptr<const Impl> impl);

 private:
  std::shared_ptr<const Impl> impl_;
};

/// Dense wrapper; kind() == dense.
LinearOperator dense_operator(Mat A, std::string label = "dense");

/// i.i.d. zero-mean Gaussian entries; columns scaled to unit l2 norm when
/// normalize is set. Requires 0 < rows <= cols. Deterministic in seed.
LinearOperator gaussian_operator(std::size_t rows, std::size_t cols,
                                 std::uint64_t seed, bool normalize = true);

/// Rows of the unitary 2D DFT of a side x side image selected by `mask`
/// (distinct row-major frequency indices), realified by stacking real parts
/// then imaginary parts: output dimension 2*|mask|. side must be a power of
/// two.
LinearOperator partial_fourier_operator(std::size_t side, const IndexSet& mask);

/// Random mask variant: draws `count` distinct frequencies from the seed.
LinearOperator partial_fourier_operator(std::size_t side, std::size_t count,
                                        std::uint64_t seed);

/// Inverse 2-level db4 transform as the sparsity basis (coefficients in,
/// image out). Square, orthonormal.
LinearOperator idwt2_operator(std::size_t side, std::size_t levels = 2);

/// A = H * basis (apply = H(basis x)); inner dimensions must agree.
LinearOperator compose_measurement(const LinearOperator& H,
                                   const LinearOperator& basis);

}  // namespace modcs

#endif
