#include "doctest.h"

#include <complex>

#include "qfg/gates.hpp"
#include "qfg/tensor.hpp"
#include "test_util.hpp"

using namespace qfg;
using testutil::Rng;

namespace {
const Complex I(0.0, 1.0);
}

TEST_CASE("contract: identity composition and Pauli squares") {
  ComplexTensor i2 = ComplexTensor::identity(2);
  CHECK(max_abs_diff(contract(i2, i2, {{1, 0}}), i2) == 0.0);

  ComplexTensor s1 = gates::pauli(1);
  CHECK(max_abs_diff(contract(s1, s1, {{1, 0}}), gates::pauli(0)) == 0.0);
}

TEST_CASE("contract matches the naive triple-loop oracle") {
  Rng rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    ComplexTensor a = testutil::random_tensor(rng, {3, 3});
    ComplexTensor b = testutil::random_tensor(rng, {3, 3});
    CHECK(max_abs_diff(contract(a, b, {{1, 0}}), testutil::naive_matmul(a, b)) <
          1e-12);
  }
}

TEST_CASE("contract errors") {
  ComplexTensor a = ComplexTensor::zeros({2, 3});
  ComplexTensor b = ComplexTensor::zeros({2, 2});
  CHECK_THROWS_AS(contract(a, b, {{1, 0}}), DimensionError);
  CHECK_THROWS_AS(contract(a, b, {{0, 0}, {0, 1}}), ArgumentError);
  CHECK_THROWS_AS(contract(a, b, {{5, 0}}), ArgumentError);
}

TEST_CASE("contract is bilinear") {
  Rng rng(12);
  Tolerance tol;
  for (int rep = 0; rep < 10; ++rep) {
    ComplexTensor a = testutil::random_tensor(rng, {2, 4});
    ComplexTensor b = testutil::random_tensor(rng, {4, 3});
    Complex alpha = rng.cnormal();
    ComplexTensor lhs = contract(alpha * a, b, {{1, 0}});
    ComplexTensor rhs = alpha * contract(a, b, {{1, 0}});
    CHECK(max_abs_diff(lhs, rhs) < tol.abs_eps);
  }
}

TEST_CASE("reordering independent contractions agrees with the naive oracle") {
  Rng rng(13);
  for (int rep = 0; rep < 10; ++rep) {
    ComplexTensor a = testutil::random_tensor(rng, {4, 4});
    ComplexTensor b = testutil::random_tensor(rng, {4, 4});
    ComplexTensor c = testutil::random_tensor(rng, {4, 4});
    ComplexTensor left = contract(contract(a, b, {{1, 0}}), c, {{1, 0}});
    ComplexTensor right = contract(a, contract(b, c, {{1, 0}}), {{1, 0}});
    ComplexTensor oracle =
        testutil::naive_matmul(testutil::naive_matmul(a, b), c);
    CHECK(max_abs_diff(left, right) < 1e-10);
    CHECK(max_abs_diff(left, oracle) < 1e-10);
  }
}

TEST_CASE("sum_out: full sum of identity, delta, and loop oracle") {
  ComplexTensor i5 = ComplexTensor::identity(5);
  CHECK(sum_out(i5, {0, 1}).scalar_value() == Complex(5.0, 0.0));

  ComplexTensor delta = ComplexTensor::one_hot(4, 2);
  CHECK(sum_out(delta, {0}).scalar_value() == Complex(1.0, 0.0));

  Rng rng(14);
  ComplexTensor t = testutil::random_tensor(rng, {2, 3, 2});
  ComplexTensor got = sum_out(t, {1});
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t c = 0; c < 2; ++c) {
      Complex acc(0.0, 0.0);
      for (std::size_t b = 0; b < 3; ++b) acc += t.at({a, b, c});
      CHECK(std::abs(got.at({a, c}) - acc) < 1e-13);
    }
  }

  CHECK_THROWS_AS(sum_out(t, {7}), ArgumentError);
  CHECK_THROWS_AS(sum_out(t, {1, 1}), ArgumentError);
}

TEST_CASE("trace basics and cyclic identity") {
  CHECK(trace(ComplexTensor::identity(3)) == Complex(3.0, 0.0));
  CHECK(trace(gates::pauli(1)) == Complex(0.0, 0.0));
  CHECK_THROWS_AS(trace(ComplexTensor::zeros({2, 3})), DimensionError);
  CHECK_THROWS_AS(trace(ComplexTensor::zeros({2, 2, 2})), DimensionError);

  Rng rng(15);
  for (int rep = 0; rep < 10; ++rep) {
    ComplexTensor a = testutil::random_tensor(rng, {4, 4});
    ComplexTensor b = testutil::random_tensor(rng, {4, 4});
    Complex tab = trace(testutil::naive_matmul(a, b));
    Complex tba = trace(testutil::naive_matmul(b, a));
    CHECK(std::abs(trace(matmul(a, b)) - tab) < 1e-12);
    CHECK(std::abs(tab - tba) < 1e-10);
  }
}

TEST_CASE("tensor_product: matrix case flattens by row/column groups") {
  ComplexTensor i2 = ComplexTensor::identity(2);
  CHECK(max_abs_diff(tensor_product(i2, i2), ComplexTensor::identity(4)) == 0.0);

  ComplexTensor d = tensor_product(gates::pauli(3), gates::pauli(0));
  CHECK(d.at({0, 0}) == Complex(1.0, 0.0));
  CHECK(d.at({1, 1}) == Complex(1.0, 0.0));
  CHECK(d.at({2, 2}) == Complex(-1.0, 0.0));
  CHECK(d.at({3, 3}) == Complex(-1.0, 0.0));
  CHECK(d.at({0, 1}) == Complex(0.0, 0.0));

  Rng rng(16);
  ComplexTensor a = testutil::random_tensor(rng, {2, 2});
  ComplexTensor b = testutil::random_tensor(rng, {3, 3});
  CHECK(max_abs_diff(tensor_product(a, b), testutil::naive_kron(a, b)) < 1e-13);
}

TEST_CASE("conj and conj_transpose") {
  CHECK(max_abs_diff(conj_transpose(gates::pauli(2)), gates::pauli(2)) == 0.0);
  CHECK(max_abs_diff(conj_transpose(gates::hadamard()), gates::hadamard()) ==
        0.0);

  Rng rng(17);
  ComplexTensor t = testutil::random_tensor(rng, {2, 3, 4});
  CHECK(max_abs_diff(conj(conj(t)), t) == 0.0);
  CHECK_THROWS_AS(conj_transpose(t), DimensionError);

  ComplexTensor a = testutil::random_tensor(rng, {3, 3});
  ComplexTensor b = testutil::random_tensor(rng, {3, 3});
  CHECK(max_abs_diff(conj_transpose(matmul(a, b)),
                     matmul(conj_transpose(b), conj_transpose(a))) < 1e-12);
}

TEST_CASE("is_unitary / is_hermitian / is_psd") {
  Tolerance tol;
  CHECK(is_unitary(gates::hadamard(), tol));
  // (s1 + s0)^H (s1 + s0) = [[2, 2], [2, 2]] != I.
  ComplexTensor m = gates::pauli(1) + gates::pauli(0);
  ComplexTensor gram = matmul(conj_transpose(m), m);
  CHECK(gram.at({0, 0}) == Complex(2.0, 0.0));
  CHECK(gram.at({0, 1}) == Complex(2.0, 0.0));
  CHECK_FALSE(is_unitary(m, tol));

  Rng rng(18);
  ComplexTensor u = testutil::random_unitary(rng, 4);
  CHECK(is_unitary(u, tol));

  // Rank-1 Gram matrix of a unit column is PSD.
  ComplexTensor col = ComplexTensor::from_data(
      {2, 1}, {Complex(1.0 / std::sqrt(2.0), 0.0),
               Complex(0.0, 1.0 / std::sqrt(2.0))});
  ComplexTensor proj = matmul(col, conj_transpose(col));
  CHECK(is_psd(proj, tol));
  CHECK(is_hermitian(proj, tol));
  CHECK_FALSE(is_psd(gates::pauli(3), tol));  // eigenvalue -1
  CHECK_THROWS_AS(is_unitary(ComplexTensor::zeros({2, 3}), tol),
                  DimensionError);
}

TEST_CASE("projective_equal") {
  Tolerance tol;
  ComplexTensor s1 = gates::pauli(1);
  CHECK(projective_equal(s1, (3.0 * I) * s1, tol));
  CHECK_FALSE(projective_equal(s1, gates::pauli(2), tol));

  ComplexTensor zero = ComplexTensor::zeros({2, 2});
  CHECK(projective_equal(zero, zero, tol));
  CHECK_FALSE(projective_equal(zero, gates::pauli(0), tol));
  CHECK_FALSE(projective_equal(gates::pauli(0), zero, tol));

  Rng rng(19);
  ComplexTensor t = testutil::random_tensor(rng, {3, 2});
  CHECK(projective_equal(t, rng.cnormal() * t, tol));
}

TEST_CASE("spectral_decompose: Pauli matrices") {
  Tolerance tol;
  SpectralDecomposition d3 = spectral_decompose(gates::pauli(3), tol);
  CHECK(d3.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d3.eigenvalues[1] == doctest::Approx(-1.0).epsilon(1e-12));

  SpectralDecomposition d1 = spectral_decompose(gates::pauli(1), tol);
  CHECK(d1.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d1.eigenvalues[1] == doctest::Approx(-1.0).epsilon(1e-12));
  // Eigenvector of +1 is proportional to (1,1)/sqrt(2).
  ComplexTensor v0 = ComplexTensor::from_data(
      {2, 1}, {d1.eigenvectors.at({0, 0}), d1.eigenvectors.at({1, 0})});
  ComplexTensor ref = ComplexTensor::from_data(
      {2, 1}, {Complex(1.0, 0.0), Complex(1.0, 0.0)});
  CHECK(projective_equal(v0, ref, Tolerance{1e-9, 1e-8}));
}

TEST_CASE("spectral_decompose: reconstruction of random Hermitians") {
  Rng rng(20);
  Tolerance tol;
  for (int rep = 0; rep < 8; ++rep) {
    ComplexTensor h = testutil::random_hermitian(rng, 8);
    SpectralDecomposition d = spectral_decompose(h, tol);
    CHECK(is_unitary(d.eigenvectors, Tolerance{1e-9, 1e-8}));
    std::size_t n = 8;
    ComplexTensor lam = ComplexTensor::zeros({n, n});
    std::vector<Complex> ld(n * n, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < n; ++i) ld[i * n + i] = d.eigenvalues[i];
    lam = ComplexTensor::from_data({n, n}, std::move(ld));
    ComplexTensor rec =
        matmul(matmul(d.eigenvectors, lam), conj_transpose(d.eigenvectors));
    CHECK(max_abs_diff(rec, h) < 1e-9);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      CHECK(d.eigenvalues[i] >= d.eigenvalues[i + 1]);
    }
  }
}

TEST_CASE("spectral_decompose: density matrices have nonnegative unit-sum spectra") {
  Rng rng(21);
  Tolerance tol;
  for (int rep = 0; rep < 5; ++rep) {
    ComplexTensor rho = testutil::random_density(rng, 5);
    SpectralDecomposition d = spectral_decompose(rho, tol);
    double sum = 0.0;
    for (double lam : d.eigenvalues) {
      CHECK(lam >= -1e-10);
      sum += lam;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
  }
  CHECK_THROWS_AS(spectral_decompose(testutil::random_tensor(rng, {3, 3}), tol),
                  DomainError);
}

TEST_CASE("from_data validation") {
  CHECK_THROWS_AS(
      ComplexTensor::from_data({2, 2}, std::vector<Complex>(3)),
      DimensionError);
  std::vector<Complex> bad(4, Complex(0.0, 0.0));
  bad[2] = Complex(std::nan(""), 0.0);
  CHECK_THROWS_AS(ComplexTensor::from_data({2, 2}, bad), ArgumentError);
}
