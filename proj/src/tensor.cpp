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

#include "qfg/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qfg {

namespace {

void check_finite(const std::vector<Complex>& data) {
  for (const Complex& v : data) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw ArgumentError("tensor entry is not finite");
    }
  }
}

}  // namespace

std::size_t shape_product(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (std::size_t s : shape) n *= s;
  return n;
}

ComplexTensor::ComplexTensor() : shape_(), data_(1, Complex(0.0, 0.0)) {}

ComplexTensor ComplexTensor::scalar(Complex value) {
  return ComplexTensor({}, {value});
}

ComplexTensor ComplexTensor::zeros(std::vector<std::size_t> shape) {
  for (std::size_t s : shape) {
    if (s == 0) throw DimensionError("axis size must be >= 1");
  }
  std::size_t n = shape_product(shape);
  return ComplexTensor(std::move(shape), std::vector<Complex>(n));
}

ComplexTensor ComplexTensor::from_data(std::vector<std::size_t> shape,
                                       std::vector<Complex> data) {
  for (std::size_t s : shape) {
    if (s == 0) throw DimensionError("axis size must be >= 1");
  }
  if (data.size() != shape_product(shape)) {
    throw DimensionError("data length does not match shape product");
  }
  check_finite(data);
  return ComplexTensor(std::move(shape), std::move(data));
}

ComplexTensor ComplexTensor::identity(std::size_t n) {
  ComplexTensor t = zeros({n, n});
  for (std::size_t i = 0; i < n; ++i) t.data_[i * n + i] = 1.0;
  return t;
}

ComplexTensor ComplexTensor::one_hot(std::size_t alphabet, std::size_t value) {
  if (value >= alphabet) throw ArgumentError("one_hot value out of range");
  ComplexTensor t = zeros({alphabet});
  t.data_[value] = 1.0;
  return t;
}

ComplexTensor ComplexTensor::matrix2(Complex a00, Complex a01, Complex a10,
                                     Complex a11) {
  return from_data({2, 2}, {a00, a01, a10, a11});
}

ComplexTensor ComplexTensor::with_axis_labels(
    std::vector<std::string> labels) const {
  if (!labels.empty() && labels.size() != shape_.size()) {
    throw DimensionError("axis label count does not match rank");
  }
  ComplexTensor t = *this;
  t.axis_labels_ = std::move(labels);
  return t;
}

std::size_t ComplexTensor::offset_of(
    const std::vector<std::size_t>& index) const {
  std::size_t off = 0;
  for (std::size_t k = 0; k < shape_.size(); ++k) {
    off = off * shape_[k] + index[k];
  }
  return off;
}

Complex ComplexTensor::at(const std::vector<std::size_t>& index) const {
  if (index.size() != shape_.size()) {
    throw ArgumentError("index rank does not match tensor rank");
  }
  for (std::size_t k = 0; k < shape_.size(); ++k) {
    if (index[k] >= shape_[k]) throw ArgumentError("index out of range");
  }
  return data_[offset_of(index)];
}

Complex ComplexTensor::scalar_value() const {
  if (!shape_.empty()) throw DimensionError("tensor is not rank 0");
  return data_[0];
}

IndexIterator::IndexIterator(const std::vector<std::size_t>& shape)
    : shape_(shape), index_(shape.size(), 0), done_(false) {
  for (std::size_t s : shape_) {
    if (s == 0) done_ = true;
  }
}

void IndexIterator::advance() {
  for (std::size_t k = shape_.size(); k-- > 0;) {
    if (++index_[k] < shape_[k]) return;
    index_[k] = 0;
  }
  done_ = true;
}

ComplexTensor operator+(const ComplexTensor& a, const ComplexTensor& b) {
  if (!a.same_shape(b)) throw DimensionError("shape mismatch in addition");
  std::vector<Complex> out(a.data());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b.data()[i];
  return ComplexTensor::from_data(a.shape(), std::move(out));
}

ComplexTensor operator-(const ComplexTensor& a, const ComplexTensor& b) {
  if (!a.same_shape(b)) throw DimensionError("shape mismatch in subtraction");
  std::vector<Complex> out(a.data());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b.data()[i];
  return ComplexTensor::from_data(a.shape(), std::move(out));
}

ComplexTensor operator*(Complex scale, const ComplexTensor& t) {
  std::vector<Complex> out(t.data());
  for (Complex& v : out) v *= scale;
  return ComplexTensor::from_data(t.shape(), std::move(out));
}

ComplexTensor contract(const ComplexTensor& a, const ComplexTensor& b,
                       const std::vector<AxisPair>& pairs) {
  std::vector<bool> a_used(a.rank(), false), b_used(b.rank(), false);
  for (const AxisPair& p : pairs) {
    if (p.first >= a.rank() || p.second >= b.rank()) {
      throw ArgumentError("contraction axis out of range");
    }
    if (a_used[p.first] || b_used[p.second]) {
      throw ArgumentError("repeated axis in contraction pairs");
    }
    if (a.shape()[p.first] != b.shape()[p.second]) {
      throw DimensionError("paired axes have different sizes");
    }
    a_used[p.first] = true;
    b_used[p.second] = true;
  }

  std::vector<std::size_t> a_free, b_free, sum_sizes;
  for (std::size_t k = 0; k < a.rank(); ++k) {
    if (!a_used[k]) a_free.push_back(k);
  }
  for (std::size_t k = 0; k < b.rank(); ++k) {
    if (!b_used[k]) b_free.push_back(k);
  }
  for (const AxisPair& p : pairs) sum_sizes.push_back(a.shape()[p.first]);

  std::vector<std::size_t> out_shape;
  for (std::size_t k : a_free) out_shape.push_back(a.shape()[k]);
  for (std::size_t k : b_free) out_shape.push_back(b.shape()[k]);

  ComplexTensor out = ComplexTensor::zeros(out_shape);
  std::vector<Complex> out_data(out.size(), Complex(0.0, 0.0));

  std::vector<std::size_t> a_idx(a.rank(), 0), b_idx(b.rank(), 0);
  std::size_t out_off = 0;
  for (IndexIterator it(out_shape); !it.done(); it.advance(), ++out_off) {
    const std::vector<std::size_t>& oi = it.index();
    for (std::size_t k = 0; k < a_free.size(); ++k) a_idx[a_free[k]] = oi[k];
    for (std::size_t k = 0; k < b_free.size(); ++k) {
      b_idx[b_free[k]] = oi[a_free.size() + k];
    }
    Complex acc(0.0, 0.0);
    for (IndexIterator s(sum_sizes); !s.done(); s.advance()) {
      for (std::size_t k = 0; k < pairs.size(); ++k) {
        a_idx[pairs[k].first] = s.index()[k];
        b_idx[pairs[k].second] = s.index()[k];
      }
      acc += a.flat(a.offset_of(a_idx)) * b.flat(b.offset_of(b_idx));
    }
    out_data[out_off] = acc;
  }
  return ComplexTensor::from_data(out_shape, std::move(out_data));
}

ComplexTensor sum_out(const ComplexTensor& t,
                      const std::vector<std::size_t>& axes) {
  std::vector<bool> drop(t.rank(), false);
  for (std::size_t a : axes) {
    if (a >= t.rank()) throw ArgumentError("sum_out axis out of range");
    if (drop[a]) throw ArgumentError("repeated axis in sum_out");
    drop[a] = true;
  }
  std::vector<std::size_t> keep, out_shape;
  for (std::size_t k = 0; k < t.rank(); ++k) {
    if (!drop[k]) {
      keep.push_back(k);
      out_shape.push_back(t.shape()[k]);
    }
  }
  std::vector<Complex> out_data(shape_product(out_shape), Complex(0.0, 0.0));
  std::vector<std::size_t> out_idx(keep.size(), 0);
  for (IndexIterator it(t.shape()); !it.done(); it.advance()) {
    for (std::size_t k = 0; k < keep.size(); ++k) {
      out_idx[k] = it.index()[keep[k]];
    }
    std::size_t off = 0;
    for (std::size_t k = 0; k < keep.size(); ++k) {
      off = off * out_shape[k] + out_idx[k];
    }
    out_data[off] += t.flat(t.offset_of(it.index()));
  }
  return ComplexTensor::from_data(out_shape, std::move(out_data));
}

Complex trace(const ComplexTensor& t) {
  if (t.rank() != 2 || t.shape()[0] != t.shape()[1]) {
    throw DimensionError("trace requires a square matrix");
  }
  Complex acc(0.0, 0.0);
  std::size_t n = t.shape()[0];
  for (std::size_t i = 0; i < n; ++i) acc += t.flat(i * n + i);
  return acc;
}

ComplexTensor outer(const ComplexTensor& a, const ComplexTensor& b) {
  return contract(a, b, {});
}

ComplexTensor tensor_product(const ComplexTensor& a, const ComplexTensor& b) {
  if (a.rank() == 2 && b.rank() == 2) {
    std::size_t ra = a.shape()[0], ca = a.shape()[1];
    std::size_t rb = b.shape()[0], cb = b.shape()[1];
    ComplexTensor four = outer(a, b);  // axes (ra, ca, rb, cb)
    four = reorder_axes(four, {0, 2, 1, 3});
    return reshape(four, {ra * rb, ca * cb});
  }
  return outer(a, b);
}

ComplexTensor reorder_axes(const ComplexTensor& t,
                           const std::vector<std::size_t>& perm) {
  if (perm.size() != t.rank()) throw ArgumentError("permutation rank mismatch");
  std::vector<bool> seen(t.rank(), false);
  std::vector<std::size_t> out_shape(t.rank());
  for (std::size_t k = 0; k < perm.size(); ++k) {
    if (perm[k] >= t.rank() || seen[perm[k]]) {
      throw ArgumentError("invalid axis permutation");
    }
    seen[perm[k]] = true;
    out_shape[k] = t.shape()[perm[k]];
  }
  std::vector<Complex> out_data(t.size());
  std::vector<std::size_t> src(t.rank(), 0);
  std::size_t off = 0;
  for (IndexIterator it(out_shape); !it.done(); it.advance(), ++off) {
    for (std::size_t k = 0; k < perm.size(); ++k) {
      src[perm[k]] = it.index()[k];
    }
    out_data[off] = t.flat(t.offset_of(src));
  }
  return ComplexTensor::from_data(out_shape, std::move(out_data));
}

ComplexTensor reshape(const ComplexTensor& t, std::vector<std::size_t> shape) {
  if (shape_product(shape) != t.size()) {
    throw DimensionError("reshape changes total size");
  }
  return ComplexTensor::from_data(std::move(shape), t.data());
}

ComplexTensor conj(const ComplexTensor& t) {
  std::vector<Complex> out(t.data());
  for (Complex& v : out) v = std::conj(v);
  return ComplexTensor::from_data(t.shape(), std::move(out));
}

ComplexTensor conj_transpose(const ComplexTensor& matrix) {
  if (matrix.rank() != 2) {
    throw DimensionError("conj_transpose requires a matrix");
  }
  return reorder_axes(conj(matrix), {1, 0});
}

ComplexTensor matmul(const ComplexTensor& a, const ComplexTensor& b) {
  if (a.rank() != 2 || b.rank() != 2) {
    throw DimensionError("matmul requires matrices");
  }
  return contract(a, b, {{1, 0}});
}

double max_norm(const ComplexTensor& t) {
  double m = 0.0;
  for (const Complex& v : t.data()) m = std::max(m, std::abs(v));
  return m;
}

double frobenius_norm(const ComplexTensor& t) {
  double s = 0.0;
  for (const Complex& v : t.data()) s += std::norm(v);
  return std::sqrt(s);
}

double max_abs_diff(const ComplexTensor& a, const ComplexTensor& b) {
  if (!a.same_shape(b)) throw DimensionError("shape mismatch in comparison");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  }
  return m;
}

bool approx_equal(const ComplexTensor& a, const ComplexTensor& b,
                  const Tolerance& tol) {
  double ref = std::max(max_norm(a), max_norm(b));
  double thr = tol.abs_eps * std::max(1.0, ref);
  return max_abs_diff(a, b) <= thr;
}

bool is_hermitian(const ComplexTensor& m, const Tolerance& tol) {
  if (m.rank() != 2 || m.shape()[0] != m.shape()[1]) {
    throw DimensionError("is_hermitian requires a square matrix");
  }
  return approx_equal(m, conj_transpose(m), tol);
}

bool is_unitary(const ComplexTensor& m, const Tolerance& tol) {
  if (m.rank() != 2 || m.shape()[0] != m.shape()[1]) {
    throw DimensionError("is_unitary requires a square matrix");
  }
  ComplexTensor prod = matmul(conj_transpose(m), m);
  return approx_equal(prod, ComplexTensor::identity(m.shape()[0]), tol);
}

bool is_psd(const ComplexTensor& m, const Tolerance& tol) {
  if (m.rank() != 2 || m.shape()[0] != m.shape()[1]) {
    throw DimensionError("is_psd requires a square matrix");
  }
  if (!is_hermitian(m, tol)) return false;
  SpectralDecomposition d = spectral_decompose(m, tol);
  double lo = d.eigenvalues.empty() ? 0.0 : d.eigenvalues.back();
  return lo >= -tol.abs_eps * std::max(1.0, max_norm(m));
}

bool projective_equal(const ComplexTensor& a, const ComplexTensor& b,
                      const Tolerance& tol) {
  if (!a.same_shape(b)) throw DimensionError("shape mismatch in comparison");
  double na = frobenius_norm(a), nb = frobenius_norm(b);
  bool za = na <= tol.abs_eps, zb = nb <= tol.abs_eps;
  if (za || zb) return za && zb;

  // Unit Frobenius norm, then unit phase of the first entry whose magnitude
  // exceeds the tolerance.
  auto normalized = [&](const ComplexTensor& t, double n) {
    ComplexTensor u = Complex(1.0 / n, 0.0) * t;
    for (const Complex& v : u.data()) {
      if (std::abs(v) > tol.abs_eps) return (std::abs(v) / v) * u;
    }
    return u;
  };
  ComplexTensor ua = normalized(a, na);
  ComplexTensor ub = normalized(b, nb);
  return max_abs_diff(ua, ub) <= tol.abs_eps;
}

SpectralDecomposition spectral_decompose(const ComplexTensor& hermitian,
                                         const Tolerance& tol) {
  if (hermitian.rank() != 2 ||
      hermitian.shape()[0] != hermitian.shape()[1]) {
    throw DimensionError("spectral_decompose requires a square matrix");
  }
  if (!is_hermitian(hermitian, tol)) {
    throw DomainError("spectral_decompose requires a Hermitian matrix");
  }
  std::size_t n = hermitian.shape()[0];

  // Work on the exactly Hermitian average (A + A^H)/2.
  std::vector<Complex> a(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      a[i * n + j] = 0.5 * (hermitian.flat(i * n + j) +
                            std::conj(hermitian.flat(j * n + i)));
    }
  }
  std::vector<Complex> u(n * n, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < n; ++i) u[i * n + i] = 1.0;

  double scale = 0.0;
  for (const Complex& v : a) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) scale = 1.0;
  const double stop = 1e-15 * scale;

  // Cyclic Jacobi sweeps with complex Givens rotations.
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(a[p * n + q]));
    }
    if (off <= stop) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        Complex apq = a[p * n + q];
        double mag = std::abs(apq);
        if (mag <= stop * 1e-2) continue;
        double app = a[p * n + p].real();
        double aqq = a[q * n + q].real();
        Complex phase = apq / mag;  // e^{i phi}

        double tau = (aqq - app) / (2.0 * mag);
        double tpar;
        if (tau >= 0.0) {
          tpar = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
        } else {
          tpar = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        }
        double c = 1.0 / std::sqrt(1.0 + tpar * tpar);
        double s = tpar * c;
        // V = [[c, s], [-s*conj(phase)^... ]] realized through the phased
        // column/row updates below; A <- V^H A V, U <- U V.
        Complex sc = s * std::conj(phase);

        for (std::size_t k = 0; k < n; ++k) {
          Complex akp = a[k * n + p], akq = a[k * n + q];
          a[k * n + p] = c * akp - sc * akq;
          a[k * n + q] = s * akp + c * std::conj(phase) * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          Complex apk = a[p * n + k], aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * phase * aqk;
          a[q * n + k] = s * apk + c * phase * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          Complex ukp = u[k * n + p], ukq = u[k * n + q];
          u[k * n + p] = c * ukp - sc * ukq;
          u[k * n + q] = s * ukp + c * std::conj(phase) * ukq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = a[i * n + i].real();
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return diag[x] > diag[y]; });

  std::vector<Complex> u_sorted(n * n);
  std::vector<double> lambda(n);
  for (std::size_t j = 0; j < n; ++j) {
    lambda[j] = diag[order[j]];
    for (std::size_t i = 0; i < n; ++i) {
      u_sorted[i * n + j] = u[i * n + order[j]];
    }
  }
  SpectralDecomposition out;
  out.eigenvectors = ComplexTensor::from_data({n, n}, std::move(u_sorted));
  out.eigenvalues = std::move(lambda);
  return out;
}

}  // namespace qfg
