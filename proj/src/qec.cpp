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

#include "qfg/qec.hpp"

#include <cmath>
#include <string>

#include "qfg/gates.hpp"

namespace qfg::qec {

namespace {

// Contracted channels whose Frobenius norm falls at or below this fraction
// of the error's norm are impossible-syndrome zeros.
constexpr double kImpossibleEps = 1e-12;

// One half (upper or mirrored lower) of the code circuits. The lower half
// conjugates every placed factor; the indicator factors are real, so only
// error matrices and Hadamards are affected.
class HalfBuilder {
 public:
  HalfBuilder(FactorGraph& g, bool conjugated)
      : g_(g), conjugated_(conjugated) {}

  VariableId wire() { return g_.add_variable(2); }

  void place(const ComplexTensor& t, std::vector<VariableId> vars) {
    g_.add_factor(conjugated_ ? conj(t) : t, std::move(vars));
  }

  // Fresh wire pinned to |0> (an encoder ancilla).
  VariableId ancilla_zero() {
    VariableId v = wire();
    place(gates::one_hot(2, 0), {v});
    return v;
  }

  // out = gate * in.
  VariableId gate1(const ComplexTensor& u, VariableId in) {
    VariableId out = wire();
    place(u, {out, in});
    return out;
  }

  // Controlled-not with control `in`: returns the continued control wire and
  // the target wire carrying in xor target_in.
  std::pair<VariableId, VariableId> cnot_from(VariableId control_in,
                                              VariableId target_in) {
    VariableId control_out = wire();
    VariableId branch = wire();
    place(gates::equality_tensor(3, 2), {control_in, control_out, branch});
    VariableId target_out = wire();
    place(gates::mod_add_tensor(2), {target_in, branch, target_out});
    return {control_out, target_out};
  }

  // Detector element: branches the data wire into an adder that consumes the
  // ancilla wire and emits the syndrome variable.
  std::pair<VariableId, VariableId> syndrome_from(VariableId data_in,
                                                  VariableId ancilla_in) {
    VariableId data_out = wire();
    VariableId branch = wire();
    place(gates::equality_tensor(3, 2), {data_in, data_out, branch});
    VariableId syndrome = wire();
    place(gates::mod_add_tensor(2), {ancilla_in, branch, syndrome});
    return {data_out, syndrome};
  }

  // Repetition encoder of length 3: expands one wire into three.
  std::array<VariableId, 3> rep3_encode(VariableId in) {
    auto [mid, w2] = cnot_from(in, ancilla_zero());
    auto [w1, w3] = cnot_from(mid, ancilla_zero());
    return {w1, w2, w3};
  }

  // Mirror-image detector: collapses three wires back into one and emits the
  // syndromes (y1 from the second wire, y2 from the third).
  struct DetectorResult {
    VariableId out;
    VariableId y1;
    VariableId y2;
  };
  DetectorResult rep3_detect(const std::array<VariableId, 3>& w) {
    auto [mid, y2] = syndrome_from(w[0], w[2]);
    auto [out, y1] = syndrome_from(mid, w[1]);
    return {out, y1, y2};
  }

 private:
  FactorGraph& g_;
  bool conjugated_;
};

void require_error_matrix(const ComplexTensor& a) {
  if (a.rank() != 2 || a.shape() != std::vector<std::size_t>{2, 2}) {
    throw DimensionError("error matrix must be 2x2");
  }
  if (frobenius_norm(a) == 0.0) {
    throw ArgumentError("error matrix must be nonzero");
  }
}

void clamp_bit(FactorGraph& g, VariableId v, int bit) {
  if (bit != 0 && bit != 1) throw ArgumentError("syndrome bits must be 0 or 1");
  g.add_factor(gates::one_hot(2, static_cast<std::size_t>(bit)), {v});
}

// Upper-half sandwiches of the length-2 figures; out is created before in so
// the contracted matrix comes out as (row, column) = (output, input).
ComplexTensor rep2_channel(const ComplexTensor& a, int y, bool direct_path) {
  require_error_matrix(a);
  FactorGraph g;
  HalfBuilder hb(g, false);
  VariableId out = g.add_variable(2);
  VariableId in = g.add_variable(2);

  auto [mid, check] = hb.cnot_from(in, hb.ancilla_zero());
  VariableId mid2 = mid;
  VariableId check2 = check;
  if (direct_path) {
    mid2 = hb.gate1(a, mid);
  } else {
    check2 = hb.gate1(a, check);
  }
  auto [data_out, syndrome] = hb.syndrome_from(mid2, check2);
  g.add_factor(gates::equality_tensor(2, 2), {data_out, out});
  clamp_bit(g, syndrome, y);
  return exterior_function(g, whole_graph(g));
}

// Coefficient maps of the length-2 channels: (w0,0,0,w3) at syndrome 0,
// (0,w1,w2,0) in the direct path at syndrome 1, and (w1,0,0,i w2) in the
// check path at syndrome 1.
std::array<Complex, 4> direct_map(const std::array<Complex, 4>& c, int y) {
  if (y == 0) return {c[0], Complex(0, 0), Complex(0, 0), c[3]};
  return {Complex(0, 0), c[1], c[2], Complex(0, 0)};
}

std::array<Complex, 4> check_map(const std::array<Complex, 4>& c, int y) {
  if (y == 0) return {c[0], Complex(0, 0), Complex(0, 0), c[3]};
  return {c[1], Complex(0, 0), Complex(0, 0), Complex(0, 1) * c[2]};
}

// Conjugation by the Hadamard: s1 <-> s3, s2 -> -s2.
std::array<Complex, 4> hadamard_map(const std::array<Complex, 4>& c) {
  return {c[0], c[3], -c[2], c[1]};
}

// Length-3 composition: the inner encoder-detector pair produces y2, the
// outer pair produces y1; `location` is the wire (1..3) carrying the error.
std::array<Complex, 4> rep3_map(const std::array<Complex, 4>& w, int location,
                                int y2, int y1) {
  const std::array<Complex, 4> zero = {};
  switch (location) {
    case 1:
      return direct_map(direct_map(w, y2), y1);
    case 2:
      return y2 == 0 ? check_map(w, y1) : zero;
    case 3:
      return direct_map(check_map(w, y2), y1);
    default:
      throw ArgumentError("repetition-code location must be in 1..3");
  }
}

struct ShorHalfResult {
  VariableId out;
  std::array<VariableId, 8> syndromes;  // block1 y1,y2, block2, block3, outer
};

ShorHalfResult shor_half(FactorGraph& g, bool conjugated, VariableId in,
                         const ComplexTensor& error, std::size_t location) {
  HalfBuilder hb(g, conjugated);
  ComplexTensor h = gates::hadamard();

  std::array<VariableId, 3> outer = hb.rep3_encode(in);
  std::array<std::array<VariableId, 3>, 3> qubits;
  for (std::size_t b = 0; b < 3; ++b) {
    qubits[b] = hb.rep3_encode(hb.gate1(h, outer[b]));
  }

  // Error at qubit `location` (1-based, block-major as in the encoder figure).
  std::size_t block = (location - 1) / 3;
  std::size_t pos = (location - 1) % 3;
  qubits[block][pos] = hb.gate1(error, qubits[block][pos]);

  ShorHalfResult result;
  std::array<VariableId, 3> collected;
  for (std::size_t b = 0; b < 3; ++b) {
    HalfBuilder::DetectorResult det = hb.rep3_detect(qubits[b]);
    collected[b] = hb.gate1(h, det.out);
    result.syndromes[2 * b] = det.y1;
    result.syndromes[2 * b + 1] = det.y2;
  }
  HalfBuilder::DetectorResult outer_det = hb.rep3_detect(collected);
  result.out = outer_det.out;
  result.syndromes[6] = outer_det.y1;
  result.syndromes[7] = outer_det.y2;
  return result;
}

struct Rep3HalfResult {
  VariableId out;
  std::array<VariableId, 2> syndromes;  // y1, y2
};

Rep3HalfResult rep3_half(FactorGraph& g, bool conjugated, VariableId in,
                         const ComplexTensor& error, std::size_t location) {
  HalfBuilder hb(g, conjugated);
  std::array<VariableId, 3> wires = hb.rep3_encode(in);
  wires[location - 1] = hb.gate1(error, wires[location - 1]);
  HalfBuilder::DetectorResult det = hb.rep3_detect(wires);
  return {det.out, {det.y1, det.y2}};
}

// Full conjugate-pair code graph from a pair of half builders.
template <typename HalfFn>
CodeGraph pair_graph(const ComplexTensor& rho_in, std::size_t n_syndromes,
                     HalfFn&& half) {
  if (rho_in.rank() != 2 || rho_in.shape() != std::vector<std::size_t>{2, 2}) {
    throw DimensionError("input density matrix must be 2x2");
  }
  CodeGraph code;
  FactorGraph& g = code.graph;
  VariableId in_up = g.add_variable(2);
  VariableId in_lo = g.add_variable(2);
  g.add_factor(rho_in, {in_up, in_lo});

  auto upper = half(g, false, in_up);
  auto lower = half(g, true, in_lo);

  g.add_factor(gates::equality_tensor(2, 2), {upper.out, lower.out});
  for (std::size_t i = 0; i < n_syndromes; ++i) {
    VariableId obs = g.add_variable(2);
    g.add_factor(gates::equality_tensor(3, 2),
                 {upper.syndromes[i], obs, lower.syndromes[i]});
    code.syndrome_vars.push_back(obs);
  }
  return code;
}

}  // namespace

ErrorSpec ErrorSpec::from_matrix(std::size_t location, ComplexTensor a) {
  require_error_matrix(a);
  ErrorSpec e;
  e.location = location;
  e.matrix = std::move(a);
  return e;
}

ErrorSpec ErrorSpec::from_coeffs(std::size_t location,
                                 const std::array<Complex, 4>& w) {
  return from_matrix(location, from_pauli_coeffs(w));
}

std::array<Complex, 4> pauli_coeffs(const ComplexTensor& a) {
  if (a.rank() != 2 || a.shape() != std::vector<std::size_t>{2, 2}) {
    throw DimensionError("pauli_coeffs requires a 2x2 matrix");
  }
  std::array<Complex, 4> w;
  for (int k = 0; k < 4; ++k) {
    w[k] = 0.5 * trace(matmul(gates::pauli(k), a));
  }
  return w;
}

ComplexTensor from_pauli_coeffs(const std::array<Complex, 4>& w) {
  ComplexTensor a = ComplexTensor::zeros({2, 2});
  for (int k = 0; k < 4; ++k) a = a + w[k] * gates::pauli(k);
  return a;
}

ComplexTensor effective_channel_direct(const ComplexTensor& a, int y) {
  if (y != 0 && y != 1) throw ArgumentError("syndrome bit must be 0 or 1");
  return rep2_channel(a, y, /*direct_path=*/true);
}

ComplexTensor effective_channel_check(const ComplexTensor& a, int y) {
  if (y != 0 && y != 1) throw ArgumentError("syndrome bit must be 0 or 1");
  return rep2_channel(a, y, /*direct_path=*/false);
}

SyndromeTable rep3_syndrome_table(const ErrorSpec& error) {
  require_error_matrix(error.matrix);
  if (error.location < 1 || error.location > 3) {
    throw ArgumentError("repetition-code location must be in 1..3");
  }
  SyndromeTable table;
  for (int y2 = 0; y2 < 2; ++y2) {
    for (int y1 = 0; y1 < 2; ++y1) {
      FactorGraph g;
      VariableId out = g.add_variable(2);
      VariableId in = g.add_variable(2);
      Rep3HalfResult half = rep3_half(g, false, in, error.matrix, error.location);
      g.add_factor(gates::equality_tensor(2, 2), {half.out, out});
      clamp_bit(g, half.syndromes[0], y1);
      clamp_bit(g, half.syndromes[1], y2);
      table.channels[static_cast<std::size_t>(y2) * 2 +
                     static_cast<std::size_t>(y1)] =
          exterior_function(g, whole_graph(g));
    }
  }
  return table;
}

CodeGraph rep3_graph(const ErrorSpec& error, const ComplexTensor& rho_in) {
  require_error_matrix(error.matrix);
  if (error.location < 1 || error.location > 3) {
    throw ArgumentError("repetition-code location must be in 1..3");
  }
  return pair_graph(rho_in, 2, [&](FactorGraph& g, bool conjugated,
                                   VariableId in) {
    return rep3_half(g, conjugated, in, error.matrix, error.location);
  });
}

CodeGraph shor_graph(const ErrorSpec& error) {
  return shor_graph(error, Complex(0.5, 0.0) * ComplexTensor::identity(2));
}

CodeGraph shor_graph(const ErrorSpec& error, const ComplexTensor& rho_in) {
  require_error_matrix(error.matrix);
  if (error.location < 1 || error.location > 9) {
    throw ArgumentError("Shor-code location must be in 1..9");
  }
  return pair_graph(rho_in, 8, [&](FactorGraph& g, bool conjugated,
                                   VariableId in) {
    return shor_half(g, conjugated, in, error.matrix, error.location);
  });
}

ComplexTensor shor_effective_channel(const ErrorSpec& error,
                                     const ShorSyndrome& syndrome) {
  require_error_matrix(error.matrix);
  if (error.location < 1 || error.location > 9) {
    throw ArgumentError("Shor-code location must be in 1..9");
  }
  FactorGraph g;
  VariableId out = g.add_variable(2);
  VariableId in = g.add_variable(2);
  ShorHalfResult half = shor_half(g, false, in, error.matrix, error.location);
  g.add_factor(gates::equality_tensor(2, 2), {half.out, out});
  for (std::size_t i = 0; i < 8; ++i) {
    clamp_bit(g, half.syndromes[i], syndrome[i]);
  }
  return exterior_function(g, whole_graph(g));
}

ComplexTensor rep3_predicted_channel(const ErrorSpec& error, int y2, int y1) {
  return from_pauli_coeffs(
      rep3_map(pauli_coeffs(error.matrix),
               static_cast<int>(error.location), y2, y1));
}

ComplexTensor shor_predicted_channel(const ErrorSpec& error,
                                     const ShorSyndrome& syndrome) {
  std::size_t block = (error.location - 1) / 3;
  int pos = static_cast<int>((error.location - 1) % 3) + 1;

  // Error-free blocks can only report (0, 0).
  for (std::size_t b = 0; b < 3; ++b) {
    if (b == block) continue;
    if (syndrome[2 * b] != 0 || syndrome[2 * b + 1] != 0) {
      return ComplexTensor::zeros({2, 2});
    }
  }
  std::array<Complex, 4> inner =
      rep3_map(pauli_coeffs(error.matrix), pos, syndrome[2 * block + 1],
               syndrome[2 * block]);
  std::array<Complex, 4> rotated = hadamard_map(inner);
  std::array<Complex, 4> outer =
      rep3_map(rotated, static_cast<int>(block) + 1, syndrome[7], syndrome[6]);
  return from_pauli_coeffs(outer);
}

RecoveryReport shor_recover(const ErrorSpec& error, const ShorSyndrome& syndrome,
                            std::uint64_t seed) {
  ComplexTensor channel = shor_effective_channel(error, syndrome);
  double scale = frobenius_norm(error.matrix);
  if (frobenius_norm(channel) <= kImpossibleEps * scale) {
    throw ImpossibleSyndromeError("syndrome has a zero effective channel");
  }

  std::array<Complex, 4> w = pauli_coeffs(channel);
  int best = 0;
  for (int k = 1; k < 4; ++k) {
    if (std::abs(w[k]) > std::abs(w[best])) best = k;
  }
  ComplexTensor corrected = matmul(gates::pauli(best), channel);
  if (!projective_equal(corrected, ComplexTensor::identity(2),
                        Tolerance{1e-9, 1e-8})) {
    throw InternalError("effective channel is not a Pauli multiple");
  }

  // Random input pure state from the seed (SplitMix64 into two angles).
  auto mix = [&seed]() {
    std::uint64_t z = (seed += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return static_cast<double>((z ^ (z >> 31)) >> 11) * 0x1.0p-53;
  };
  constexpr double kTau = 6.283185307179586;
  double theta = mix() * kTau;
  double phi = mix() * kTau;
  ComplexTensor psi = ComplexTensor::from_data(
      {2, 1}, {Complex(std::cos(theta), 0.0),
               std::sin(theta) * Complex(std::cos(phi), std::sin(phi))});

  ComplexTensor out = matmul(corrected, psi);
  double norm_out = frobenius_norm(out);
  Complex overlap(0.0, 0.0);
  for (std::size_t i = 0; i < 2; ++i) {
    overlap += std::conj(psi.flat(i)) * out.flat(i);
  }
  RecoveryReport report;
  report.correction = best;
  report.fidelity = std::norm(overlap) / (norm_out * norm_out);
  report.channel = channel;
  return report;
}

std::vector<double> syndrome_distribution(const CodeGraph& code) {
  ComplexTensor ext = exterior_function(code.graph, whole_graph(code.graph));
  std::vector<VariableId> bd = boundary_variables(code.graph, whole_graph(code.graph));
  if (bd != code.syndrome_vars) {
    // Boundary order is ascending VariableId; syndrome_vars are created in
    // ascending order by construction, so a mismatch is a builder bug.
    throw InternalError("code graph has unexpected open edges");
  }
  std::vector<double> out;
  out.reserve(ext.size());
  for (const Complex& v : ext.data()) {
    if (std::abs(v.imag()) > 1e-9) {
      throw InternalError("syndrome distribution has imaginary residue");
    }
    out.push_back(std::max(v.real(), 0.0));
  }
  return out;
}

}  // namespace qfg::qec
