#include "doctest.h"

#include "qfg/gates.hpp"
#include "qfg/graph.hpp"
#include "test_util.hpp"

using namespace qfg;
using testutil::Rng;

namespace {
const Complex I(0.0, 1.0);
}

TEST_CASE("equality_tensor basics") {
  CHECK(max_abs_diff(gates::equality_tensor(2, 3), ComplexTensor::identity(3)) ==
        0.0);

  // Dropping a half edge from a degree-3 equality leaves the identity.
  ComplexTensor eq3 = gates::equality_tensor(3, 2);
  CHECK(max_abs_diff(sum_out(eq3, {2}), ComplexTensor::identity(2)) == 0.0);

  // Two degree-3 equalities chained equal a degree-4 one, by enumeration.
  ComplexTensor joined = contract(eq3, eq3, {{2, 0}});
  ComplexTensor eq4 = gates::equality_tensor(4, 2);
  CHECK(max_abs_diff(joined, eq4) == 0.0);
}

TEST_CASE("mod_add_tensor") {
  ComplexTensor f2 = gates::mod_add_tensor(2);
  CHECK(f2.at({0, 1, 1}) == Complex(1.0, 0.0));
  CHECK(f2.at({1, 1, 1}) == Complex(0.0, 0.0));

  // Each slice at fixed (x1, x2) has exactly one 1.
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 2; ++b) {
      double s = 0.0;
      for (std::size_t c = 0; c < 2; ++c) s += f2.at({a, b, c}).real();
      CHECK(s == 1.0);
    }
  }

  ComplexTensor f3 = gates::mod_add_tensor(3);
  CHECK(f3.at({1, 1, 1}) == Complex(1.0, 0.0));

  // Symmetric under all axis permutations.
  for (std::size_t m : {2u, 3u, 5u}) {
    ComplexTensor f = gates::mod_add_tensor(m);
    CHECK(max_abs_diff(f, reorder_axes(f, {1, 2, 0})) == 0.0);
    CHECK(max_abs_diff(f, reorder_axes(f, {2, 1, 0})) == 0.0);
    CHECK(max_abs_diff(f, reorder_axes(f, {0, 2, 1})) == 0.0);
  }
}

TEST_CASE("pauli matrices and hadamard are exact") {
  ComplexTensor s2 = gates::pauli(2);
  CHECK(s2.at({0, 0}) == Complex(0.0, 0.0));
  CHECK(s2.at({0, 1}) == -I);
  CHECK(s2.at({1, 0}) == I);
  CHECK(s2.at({1, 1}) == Complex(0.0, 0.0));

  for (int k = 0; k < 4; ++k) {
    CHECK(max_abs_diff(matmul(gates::pauli(k), gates::pauli(k)),
                       gates::pauli(0)) == 0.0);
  }

  ComplexTensor h = gates::hadamard();
  CHECK(max_abs_diff(matmul(matmul(h, gates::pauli(1)), h), gates::pauli(3)) <
        1e-15);
  CHECK(max_abs_diff(matmul(h, gates::pauli(1)),
                     matmul(gates::pauli(3), h)) < 1e-15);
  CHECK(max_abs_diff(matmul(h, gates::pauli(2)),
                     Complex(-1.0, 0.0) * matmul(gates::pauli(2), h)) < 1e-15);
}

TEST_CASE("cnot and swap") {
  ComplexTensor cx = gates::cnot();
  CHECK(max_abs_diff(matmul(cx, cx), ComplexTensor::identity(4)) <= 1e-12);
  // Basis (1,1) -> (1,0): column 3 has its 1 in row 2.
  CHECK(cx.at({2, 3}) == Complex(1.0, 0.0));
  CHECK(cx.at({3, 3}) == Complex(0.0, 0.0));

  ComplexTensor sw = gates::swap_gate();
  CHECK(max_abs_diff(matmul(sw, sw), ComplexTensor::identity(4)) <= 1e-12);
  CHECK(sw.at({1, 2}) == Complex(1.0, 0.0));
  CHECK(sw.at({2, 1}) == Complex(1.0, 0.0));
}

TEST_CASE("chained cnot networks reduce to the equality pair") {
  // Two controlled-not networks composed inside one graph: the exterior
  // function equals a pair of two-variable equality constraints.
  FactorGraph g;
  VariableId c_out = g.add_variable(2);
  VariableId t_out = g.add_variable(2);
  VariableId c_in = g.add_variable(2);
  VariableId t_in = g.add_variable(2);
  VariableId c_mid = g.add_variable(2);
  VariableId t_mid = g.add_variable(2);
  VariableId b1 = g.add_variable(2);
  VariableId b2 = g.add_variable(2);
  g.add_factor(gates::equality_tensor(3, 2), {c_in, c_mid, b1});
  g.add_factor(gates::mod_add_tensor(2), {t_in, b1, t_mid});
  g.add_factor(gates::equality_tensor(3, 2), {c_mid, c_out, b2});
  g.add_factor(gates::mod_add_tensor(2), {t_mid, b2, t_out});
  ComplexTensor ext = exterior_function(g, whole_graph(g));
  // Axes ascending: (c_out, t_out, c_in, t_in); expected [c_out=c_in][t_out=t_in].
  ComplexTensor expected =
      outer(ComplexTensor::identity(2), ComplexTensor::identity(2));
  expected = reorder_axes(expected, {0, 2, 1, 3});
  CHECK(max_abs_diff(ext, expected) <= 1e-12);
}

TEST_CASE("controlled") {
  CHECK(max_abs_diff(gates::controlled(gates::pauli(1)), gates::cnot()) <=
        1e-12);
  CHECK(max_abs_diff(gates::controlled(ComplexTensor::identity(2)),
                     ComplexTensor::identity(4)) == 0.0);

  Rng rng(31);
  ComplexTensor u = testutil::random_unitary(rng, 3);
  CHECK(is_unitary(gates::controlled(u), Tolerance{1e-12, 1e-8}));
  CHECK_THROWS_AS(gates::controlled(Complex(2.0, 0.0) * u), DomainError);
}

TEST_CASE("every unitary gate passes is_unitary at 1e-12") {
  Tolerance strict{1e-12, 1e-8};
  for (int k = 0; k < 4; ++k) CHECK(is_unitary(gates::pauli(k), strict));
  CHECK(is_unitary(gates::hadamard(), strict));
  CHECK(is_unitary(gates::cnot(), strict));
  CHECK(is_unitary(gates::swap_gate(), strict));
  for (std::size_t m : {2u, 3u, 5u}) CHECK(is_unitary(gates::dft(m), strict));
}

TEST_CASE("gate resolution by name") {
  gates::GateSpec spec = gates::resolve_gate("equality", {3, 3, 3});
  CHECK(max_abs_diff(spec.tensor, gates::equality_tensor(3, 3)) == 0.0);
  CHECK(max_abs_diff(gates::resolve_gate("cnot", {4, 4}).tensor, gates::cnot()) ==
        0.0);
  CHECK_THROWS_AS(gates::resolve_gate("nope", {2, 2}), ArgumentError);
  CHECK_THROWS_AS(gates::resolve_gate("hadamard", {3, 3}), ArgumentError);
}
