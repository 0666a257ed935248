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

#include "qfg/gates.hpp"

#include <cmath>

#include "qfg/graph.hpp"

namespace qfg::gates {

ComplexTensor equality_tensor(std::size_t degree, std::size_t alphabet) {
  if (degree == 0) throw ArgumentError("equality degree must be >= 1");
  if (alphabet == 0) throw ArgumentError("alphabet must be >= 1");
  std::vector<std::size_t> shape(degree, alphabet);
  std::vector<Complex> data(shape_product(shape), Complex(0.0, 0.0));
  for (std::size_t v = 0; v < alphabet; ++v) {
    std::size_t off = 0;
    for (std::size_t k = 0; k < degree; ++k) off = off * alphabet + v;
    data[off] = 1.0;
  }
  return ComplexTensor::from_data(std::move(shape), std::move(data));
}

ComplexTensor mod_add_tensor(std::size_t alphabet, std::size_t offset) {
  if (alphabet < 2) throw ArgumentError("mod_add alphabet must be >= 2");
  std::vector<std::size_t> shape(3, alphabet);
  std::vector<Complex> data(alphabet * alphabet * alphabet, Complex(0.0, 0.0));
  for (std::size_t a = 0; a < alphabet; ++a) {
    for (std::size_t b = 0; b < alphabet; ++b) {
      for (std::size_t c = 0; c < alphabet; ++c) {
        if ((a + b + c) % alphabet == offset % alphabet) {
          data[(a * alphabet + b) * alphabet + c] = 1.0;
        }
      }
    }
  }
  return ComplexTensor::from_data(std::move(shape), std::move(data));
}

ComplexTensor one_hot(std::size_t alphabet, std::size_t value) {
  return ComplexTensor::one_hot(alphabet, value);
}

ComplexTensor pauli(int k) {
  const Complex i(0.0, 1.0);
  switch (k) {
    case 0:
      return ComplexTensor::matrix2(1, 0, 0, 1);
    case 1:
      return ComplexTensor::matrix2(0, 1, 1, 0);
    case 2:
      return ComplexTensor::matrix2(0, -i, i, 0);
    case 3:
      return ComplexTensor::matrix2(1, 0, 0, -1);
    default:
      throw ArgumentError("pauli index must be in 0..3");
  }
}

ComplexTensor hadamard() {
  double s = 1.0 / std::sqrt(2.0);
  return ComplexTensor::matrix2(s, s, s, -s);
}

ComplexTensor cnot() {
  // Fig-style network: an equality branch on the control wire feeding a
  // balanced mod-2 adder on the target wire.
  FactorGraph g;
  VariableId c_out = g.add_variable(2);
  VariableId t_out = g.add_variable(2);
  VariableId c_in = g.add_variable(2);
  VariableId t_in = g.add_variable(2);
  VariableId branch = g.add_variable(2);
  g.add_factor(equality_tensor(3, 2), {c_in, c_out, branch});
  g.add_factor(mod_add_tensor(2), {t_in, branch, t_out});
  ComplexTensor ext = exterior_function(g, whole_graph(g));
  // Boundary order is ascending id: (c_out, t_out, c_in, t_in) already.
  return reshape(ext, {4, 4});
}

ComplexTensor swap_gate() {
  FactorGraph g;
  VariableId o1 = g.add_variable(2);
  VariableId o2 = g.add_variable(2);
  VariableId i1 = g.add_variable(2);
  VariableId i2 = g.add_variable(2);
  g.add_factor(equality_tensor(2, 2), {i1, o2});
  g.add_factor(equality_tensor(2, 2), {i2, o1});
  ComplexTensor ext = exterior_function(g, whole_graph(g));
  return reshape(ext, {4, 4});
}

ComplexTensor controlled(const ComplexTensor& u, const Tolerance& tol) {
  if (u.rank() != 2 || u.shape()[0] != u.shape()[1]) {
    throw DimensionError("controlled requires a square matrix");
  }
  if (!is_unitary(u, tol)) {
    throw DomainError("controlled requires a unitary matrix");
  }
  std::size_t m = u.shape()[0];
  std::size_t n = 2 * m;
  std::vector<Complex> data(n * n, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < m; ++i) data[i * n + i] = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      data[(m + i) * n + (m + j)] = u.flat(i * m + j);
    }
  }
  return ComplexTensor::from_data({n, n}, std::move(data));
}

ComplexTensor dft(std::size_t m) {
  if (m == 0) throw ArgumentError("dft size must be >= 1");
  constexpr double kPi = 3.14159265358979323846;
  std::vector<Complex> data(m * m);
  double s = 1.0 / std::sqrt(static_cast<double>(m));
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < m; ++k) {
      double ang = 2.0 * kPi * static_cast<double>(j * k) / static_cast<double>(m);
      data[j * m + k] = s * Complex(std::cos(ang), std::sin(ang));
    }
  }
  return ComplexTensor::from_data({m, m}, std::move(data));
}

GateSpec resolve_gate(const std::string& name,
                      const std::vector<std::size_t>& axis_sizes) {
  auto all_equal = [&]() {
    for (std::size_t s : axis_sizes) {
      if (s != axis_sizes[0]) return false;
    }
    return !axis_sizes.empty();
  };
  auto require = [&](bool ok, const std::string& what) {
    if (!ok) {
      throw ArgumentError("gate '" + name + "' incompatible with axis sizes (" +
                          what + ")");
    }
  };

  GateSpec spec;
  spec.name = name;
  spec.dims = axis_sizes;
  if (name == "equality") {
    require(all_equal(), "equal sizes expected");
    spec.tensor = equality_tensor(axis_sizes.size(), axis_sizes[0]);
  } else if (name == "mod_add") {
    require(axis_sizes.size() == 3 && all_equal(), "three equal sizes expected");
    spec.tensor = mod_add_tensor(axis_sizes[0]);
  } else if (name == "pauli0" || name == "pauli1" || name == "pauli2" ||
             name == "pauli3") {
    require(axis_sizes == std::vector<std::size_t>{2, 2}, "2x2 expected");
    spec.tensor = pauli(name[5] - '0');
  } else if (name == "hadamard") {
    require(axis_sizes == std::vector<std::size_t>{2, 2}, "2x2 expected");
    spec.tensor = hadamard();
  } else if (name == "cnot") {
    require(axis_sizes == std::vector<std::size_t>{4, 4}, "4x4 expected");
    spec.tensor = cnot();
  } else if (name == "swap") {
    require(axis_sizes == std::vector<std::size_t>{4, 4}, "4x4 expected");
    spec.tensor = swap_gate();
  } else if (name == "dft") {
    require(axis_sizes.size() == 2 && all_equal(), "square expected");
    spec.tensor = dft(axis_sizes[0]);
  } else {
    throw ArgumentError("unknown gate name '" + name + "'");
  }
  return spec;
}

}  // namespace qfg::gates
