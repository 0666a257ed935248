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

#ifndef QFG_GATES_HPP
#define QFG_GATES_HPP

#include <string>
#include <vector>

#include "qfg/tensor.hpp"

namespace qfg::gates {

/// n-axis constraint tensor: 1 where all indices agree, 0 elsewhere.
/// Degree 2 is the identity matrix.
ComplexTensor equality_tensor(std::size_t degree, std::size_t alphabet);

/// 3-axis indicator of (x1 + x2 + x3) mod M == offset. The balanced relation
/// has offset 0; a nonzero offset is only useful as a negative control.
ComplexTensor mod_add_tensor(std::size_t alphabet, std::size_t offset = 0);

/// One-hot indicator factor of a fixed value.
ComplexTensor one_hot(std::size_t alphabet, std::size_t value);

/// Pauli matrices sigma_0..sigma_3 (k in 0..3).
ComplexTensor pauli(int k);

/// Normalized Hadamard matrix (1/sqrt(2)) [[1,1],[1,-1]].
ComplexTensor hadamard();

/// Controlled-NOT over two qubits, rows and columns flattened as
/// (control, target) tuples with the control as the most significant digit.
/// Generated by contracting its equality / mod-2 adder network.
ComplexTensor cnot();

/// Swap over two qubits (crossed wires), same flattening.
ComplexTensor swap_gate();

/// Block-diagonal [[I, 0], [0, U]] over 2m; throws DomainError for
/// non-unitary U.
ComplexTensor controlled(const ComplexTensor& u, const Tolerance& tol = {});

/// Discrete Fourier unitary F(j,k) = exp(2 pi i jk / m) / sqrt(m).
ComplexTensor dft(std::size_t m);

struct GateSpec {
  std::string name;
  std::vector<std::size_t> dims;
  ComplexTensor tensor;
};

/// Resolves a gate by string key against per-axis sizes (used by the file
/// formats): "equality", "mod_add", "pauli0".."pauli3", "hadamard", "cnot",
/// "swap", "dft". Throws ArgumentError for unknown names or incompatible
/// sizes.
GateSpec resolve_gate(const std::string& name,
                      const std::vector<std::size_t>& axis_sizes);

}  // namespace qfg::gates

#endif  // QFG_GATES_HPP
