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

#ifndef QFG_QEC_HPP
#define QFG_QEC_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "qfg/graph.hpp"
#include "qfg/tensor.hpp"

namespace qfg::qec {

/// A single-qubit error: a nonzero 2x2 matrix at a 1-based qubit location.
/// The matrix and its Pauli-basis coefficients w0..w3 interconvert exactly.
struct ErrorSpec {
  std::size_t location = 1;
  ComplexTensor matrix;

  static ErrorSpec from_matrix(std::size_t location, ComplexTensor a);
  static ErrorSpec from_coeffs(std::size_t location,
                               const std::array<Complex, 4>& w);
};

/// w_k = tr(sigma_k A) / 2.
std::array<Complex, 4> pauli_coeffs(const ComplexTensor& a);
ComplexTensor from_pauli_coeffs(const std::array<Complex, 4>& w);

/// Length-2 repetition code, error in the direct path: contraction of the
/// encoder / error / detector sandwich at syndrome y. Equals the projection
/// of A onto span{s0,s3} (y=0) or span{s1,s2} (y=1).
ComplexTensor effective_channel_direct(const ComplexTensor& a, int y);

/// Length-2 repetition code, error in the check path.
ComplexTensor effective_channel_check(const ComplexTensor& a, int y);

/// Effective channels of the length-3 repetition code for each syndrome
/// (y2, y1), obtained by contracting the nested encoder-detector sandwich.
/// Zero channels mark impossible syndrome/location pairs.
struct SyndromeTable {
  std::array<ComplexTensor, 4> channels;  // index y2 * 2 + y1

  const ComplexTensor& channel(int y2, int y1) const {
    return channels[static_cast<std::size_t>(y2) * 2 +
                    static_cast<std::size_t>(y1)];
  }
};

SyndromeTable rep3_syndrome_table(const ErrorSpec& error);

/// Conjugate-pair graph of a code sandwich: input density matrix, encoder,
/// error, mirror detector on both chains, syndrome outcome variables exposed
/// as half edges (through equality nodes), and a terminal equality on the
/// decoded qubit.
struct CodeGraph {
  FactorGraph graph;
  std::vector<VariableId> syndrome_vars;  // observable outcome variables
};

/// Length-3 repetition code graph; syndrome_vars = {Y1, Y2}.
CodeGraph rep3_graph(const ErrorSpec& error, const ComplexTensor& rho_in);

/// Nine-qubit Shor code graph (three inner repetition encoders glued by an
/// outer encoder through Hadamards, mirror detector). syndrome_vars holds
/// eight bits in the order: block1 (Y1, Y2), block2 (Y1, Y2), block3
/// (Y1, Y2), outer (Y1, Y2); within a pair Y1 is the first-wire syndrome and
/// Y2 the second, as in the length-3 table. rho_in defaults to the maximally
/// mixed qubit.
CodeGraph shor_graph(const ErrorSpec& error);
CodeGraph shor_graph(const ErrorSpec& error, const ComplexTensor& rho_in);

using ShorSyndrome = std::array<int, 8>;

/// Contraction of the Shor encoder / error / mirror-detector sandwich at a
/// clamped syndrome: always a scalar multiple of a Pauli matrix, or zero for
/// impossible syndromes.
ComplexTensor shor_effective_channel(const ErrorSpec& error,
                                     const ShorSyndrome& syndrome);

/// Closed-form composition rules for the repetition-code tables; the test
/// oracle against which the contracted channels are checked.
ComplexTensor rep3_predicted_channel(const ErrorSpec& error, int y2, int y1);
ComplexTensor shor_predicted_channel(const ErrorSpec& error,
                                     const ShorSyndrome& syndrome);

struct RecoveryReport {
  int correction;       // Pauli index k with sigma_k * channel proportional to I
  double fidelity;      // |<psi_in|psi_out>|^2 for a random input pure state
  ComplexTensor channel;  // the contracted effective channel
};

/// Finds the Pauli correction for the syndrome's effective channel and
/// verifies it on a random pure state. Throws ImpossibleSyndromeError when
/// the channel is zero.
RecoveryReport shor_recover(const ErrorSpec& error, const ShorSyndrome& syndrome,
                            std::uint64_t seed = 1);

/// Probability of each syndrome tuple under the code graph's distribution
/// (row-major over syndrome_vars). Sums to one for unitary error matrices.
std::vector<double> syndrome_distribution(const CodeGraph& code);

}  // namespace qfg::qec

#endif  // QFG_QEC_HPP
