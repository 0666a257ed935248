// Copyright 2026 The qfg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QFG_TENSOR_HPP
#define QFG_TENSOR_HPP

#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qfg/errors.hpp"

namespace qfg {

using Complex = std::complex<double>;

/// Numerical comparison knobs. abs_eps is the absolute max-norm threshold;
/// the relative criterion kicks in when the reference norm exceeds 1.
struct Tolerance {
  double abs_eps = 1e-10;
  double rel_eps = 1e-8;
};

/// Dense complex tensor over finite alphabets, row-major storage.
///
/// Axis-group flattening convention, used everywhere a matrix is indexed by
/// variable tuples: the row group precedes the column group, and within a
/// group the earlier-listed variable is the most significant digit. So a
/// matrix over pairs ((a,b),(c,d)) with all sizes 2 stores entry
/// ((a,b),(c,d)) at row 2a+b, column 2c+d.
///
/// Tensors are immutable after construction; all operations below are pure
/// functions returning fresh values.
class ComplexTensor {
 public:
  /// Rank-0 tensor holding the value 0.
  ComplexTensor();

  static ComplexTensor scalar(Complex value);
  static ComplexTensor zeros(std::vector<std::size_t> shape);
  /// Builds from explicit row-major data; throws DimensionError if the data
  /// length does not equal the shape product, ArgumentError on NaN/Inf.
  static ComplexTensor from_data(std::vector<std::size_t> shape,
                                 std::vector<Complex> data);
  static ComplexTensor identity(std::size_t n);
  /// One-axis indicator of a fixed value (a "solid square" factor).
  static ComplexTensor one_hot(std::size_t alphabet, std::size_t value);
  static ComplexTensor matrix2(Complex a00, Complex a01, Complex a10,
                               Complex a11);

  std::size_t rank() const { return shape_.size(); }
  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t size() const { return data_.size(); }
  const std::vector<Complex>& data() const { return data_; }

  const std::vector<std::string>& axis_labels() const { return axis_labels_; }
  ComplexTensor with_axis_labels(std::vector<std::string> labels) const;

  /// Entry lookup by multi-index; throws ArgumentError on rank or range errors.
  Complex at(const std::vector<std::size_t>& index) const;
  /// Entry by flat row-major offset (no range check beyond vector's).
  Complex flat(std::size_t offset) const { return data_[offset]; }

  /// Value of a rank-0 tensor.
  Complex scalar_value() const;

  /// Row-major offset of a multi-index (no validation).
  std::size_t offset_of(const std::vector<std::size_t>& index) const;

  bool same_shape(const ComplexTensor& other) const {
    return shape_ == other.shape_;
  }

 private:
  ComplexTensor(std::vector<std::size_t> shape, std::vector<Complex> data)
      : shape_(std::move(shape)), data_(std::move(data)) {}

  std::vector<std::size_t> shape_;
  std::vector<Complex> data_;
  std::vector<std::string> axis_labels_;  // empty or one per axis
};

/// Iterates row-major over all multi-indices of a shape.
class IndexIterator {
 public:
  explicit IndexIterator(const std::vector<std::size_t>& shape);
  bool done() const { return done_; }
  const std::vector<std::size_t>& index() const { return index_; }
  void advance();

 private:
  std::vector<std::size_t> shape_;
  std::vector<std::size_t> index_;
  bool done_;
};

std::size_t shape_product(const std::vector<std::size_t>& shape);

// --- arithmetic -----------------------------------------------------------

ComplexTensor operator+(const ComplexTensor& a, const ComplexTensor& b);
ComplexTensor operator-(const ComplexTensor& a, const ComplexTensor& b);
ComplexTensor operator*(Complex scale, const ComplexTensor& t);

// --- contraction and reshaping ---------------------------------------------

using AxisPair = std::pair<std::size_t, std::size_t>;

/// Sum over paired axes of a and b; result axes are the remaining axes of a
/// followed by the remaining axes of b. Matrix multiplication is
/// contract(A, B, {{1, 0}}).
ComplexTensor contract(const ComplexTensor& a, const ComplexTensor& b,
                       const std::vector<AxisPair>& pairs);

/// Marginalizes the given axes away. Summing out every axis yields a rank-0
/// tensor.
ComplexTensor sum_out(const ComplexTensor& t,
                      const std::vector<std::size_t>& axes);

/// Sum of diagonal entries of a square matrix.
Complex trace(const ComplexTensor& t);

/// Matrix case (both rank 2): flattened Kronecker product following the
/// axis-group convention documented on ComplexTensor. Any other ranks:
/// plain outer product with axes of a followed by axes of b.
ComplexTensor tensor_product(const ComplexTensor& a, const ComplexTensor& b);

/// Outer product, axes concatenated, never flattened.
ComplexTensor outer(const ComplexTensor& a, const ComplexTensor& b);

/// Permutes axes: axis k of the result is axis perm[k] of the input.
ComplexTensor reorder_axes(const ComplexTensor& t,
                           const std::vector<std::size_t>& perm);

/// Reinterprets the flat data under a new shape of equal total size.
ComplexTensor reshape(const ComplexTensor& t, std::vector<std::size_t> shape);

// --- conjugation -----------------------------------------------------------

ComplexTensor conj(const ComplexTensor& t);
ComplexTensor conj_transpose(const ComplexTensor& matrix);

/// contract(a, b, {{1,0}}) for rank-2 operands.
ComplexTensor matmul(const ComplexTensor& a, const ComplexTensor& b);

// --- predicates and norms ----------------------------------------------------

double max_norm(const ComplexTensor& t);
double frobenius_norm(const ComplexTensor& t);
double max_abs_diff(const ComplexTensor& a, const ComplexTensor& b);

/// Max-norm comparison; threshold abs_eps, scaled up by the reference
/// max-norm once that exceeds 1.
bool approx_equal(const ComplexTensor& a, const ComplexTensor& b,
                  const Tolerance& tol = {});

bool is_unitary(const ComplexTensor& m, const Tolerance& tol = {});
bool is_hermitian(const ComplexTensor& m, const Tolerance& tol = {});
bool is_psd(const ComplexTensor& m, const Tolerance& tol = {});

/// True iff b = c*a for some complex scalar c. The all-zero tensor is
/// projectively equal only to itself (zero meaning Frobenius norm <= abs_eps).
bool projective_equal(const ComplexTensor& a, const ComplexTensor& b,
                      const Tolerance& tol = {});

// --- spectral decomposition --------------------------------------------------

struct SpectralDecomposition {
  ComplexTensor eigenvectors;       // unitary, columns are eigenvectors
  std::vector<double> eigenvalues;  // real, sorted descending
};

/// A = U diag(lambda) U^H for Hermitian A (cyclic Jacobi). Throws DomainError
/// if the input is not Hermitian within tol.
SpectralDecomposition spectral_decompose(const ComplexTensor& hermitian,
                                         const Tolerance& tol = {});

}  // namespace qfg

#endif  // QFG_TENSOR_HPP
