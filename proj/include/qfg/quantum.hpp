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

#ifndef QFG_QUANTUM_HPP
#define QFG_QUANTUM_HPP

#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "qfg/graph.hpp"
#include "qfg/tensor.hpp"

namespace qfg::quantum {

/// Outcome-indexed square matrices {A(y)} with sum_y A(y)^H A(y) = I.
struct MeasurementFamily {
  std::vector<ComplexTensor> matrices;  // one M x M matrix per outcome

  std::size_t num_outcomes() const { return matrices.size(); }
  std::size_t dimension() const {
    return matrices.empty() ? 0 : matrices[0].shape()[0];
  }
};

struct MeasurementValidation {
  bool ok;
  double max_deviation;  // max-norm distance of sum A(y)^H A(y) from I
};

/// Checks the completeness condition; never throws on a bad family, the
/// report carries the deviation.
MeasurementValidation validate_measurement(const MeasurementFamily& fam,
                                           const Tolerance& tol = {});

/// Rank-1 projector family A(y) = B(.,y) B(.,y)^H from a unitary basis.
MeasurementFamily projection_family(const ComplexTensor& basis,
                                    const Tolerance& tol = {});

/// Family measuring only the second tensor factor of an (idle_dim x m)
/// composite: A(y) = I ⊗ (B(.,y) B(.,y)^H).
MeasurementFamily partial_family(const ComplexTensor& basis,
                                 std::size_t idle_dim,
                                 const Tolerance& tol = {});

// --- timelines ---------------------------------------------------------------

struct ClassicalPrior {
  std::vector<double> probabilities;
};
struct KnownValue {
  std::size_t value;
};
struct GivenDensity {
  ComplexTensor rho;
};
using InitialState = std::variant<ClassicalPrior, KnownValue, GivenDensity>;

struct UnitaryStep {
  ComplexTensor matrix;
};
struct MeasureStep {
  MeasurementFamily family;
  std::optional<std::size_t> observed;
};
using Step = std::variant<UnitaryStep, MeasureStep>;

/// Initial state followed by an ordered sequence of unitary and measurement
/// steps over a fixed dimension M.
struct QuantumTimeline {
  std::size_t dimension = 0;
  InitialState initial = KnownValue{0};
  std::vector<Step> steps;
};

/// Throws on any violated invariant (prior normalization, unitarity,
/// completeness, dimension consistency).
void validate_timeline(const QuantumTimeline& t, const Tolerance& tol = {});

std::size_t count_measurements(const QuantumTimeline& t);

/// Hermitian, PSD, trace-1 matrix; construction validates.
class DensityMatrix {
 public:
  DensityMatrix(ComplexTensor matrix, const Tolerance& tol = {});
  const ComplexTensor& matrix() const { return matrix_; }
  std::size_t dimension() const { return matrix_.shape()[0]; }

 private:
  ComplexTensor matrix_;
};

// --- graph compilation ---------------------------------------------------------

/// Compiled conjugate-pair graph plus a registry locating the timeline's
/// variables inside it.
struct CompiledTimeline {
  FactorGraph graph;

  /// For each measurement step, in order: the observable outcome variable
  /// (half edge unless observed), its alphabet, and whether it was clamped.
  std::vector<VariableId> outcome_vars;
  std::vector<std::size_t> outcome_sizes;
  std::vector<bool> outcome_observed;

  /// Upper-chain variable paired with its lower-chain mirror, in creation
  /// order. Outcome variables are shared and do not appear here.
  std::vector<std::pair<VariableId, VariableId>> mirror_pairs;

  /// Factors from the initial-state segment, then one segment per step.
  std::vector<std::vector<FactorId>> segments;

  /// State-pair (upper, lower) entering each step, one entry per step, plus
  /// the final frontier at the end.
  std::vector<std::pair<VariableId, VariableId>> frontiers;
};

CompiledTimeline build_graph(const QuantumTimeline& t, const Tolerance& tol = {});

// --- queries ------------------------------------------------------------------

/// Real distribution over the unobserved outcome variables, in step order.
struct ProbabilityTable {
  std::vector<std::size_t> shape;  // alphabet per unobserved outcome
  std::vector<double> values;     // row-major
  double total = 0.0;

  double at(const std::vector<std::size_t>& index) const;
};

/// Joint distribution of the unobserved outcomes. Checks the conjugate-pair
/// realness invariant (|Im| <= abs_eps, then truncated) and, when no outcome
/// is observed, normalization; violations raise InternalError.
ProbabilityTable joint_distribution(const QuantumTimeline& t,
                                    const Tolerance& tol = {});

/// Distribution of outcome k (1-based: k = prefix length + 1) given the
/// observed prefix, via the trace formula on the pre-measurement density
/// matrix. Zero-probability prefixes raise NullConditionError.
std::vector<double> conditional_next(const QuantumTimeline& t,
                                     const std::vector<std::size_t>& prefix,
                                     const Tolerance& tol = {});

/// Closes the box over everything before measurement k (1-based) with the
/// prefix outcomes clamped: returns the normalized density matrix and the
/// prefix probability (the trace of the unnormalized box).
std::pair<DensityMatrix, double> density_matrix_before(
    const QuantumTimeline& t, std::size_t k,
    const std::vector<std::size_t>& prefix, const Tolerance& tol = {});

/// U rho U^H.
DensityMatrix evolve(const DensityMatrix& rho, const ComplexTensor& unitary,
                     const Tolerance& tol = {});

/// Probability tr(A(y) rho A(y)^H) and the collapsed state
/// A(y) rho A(y)^H / p. Zero-probability outcomes raise NullConditionError.
std::pair<double, DensityMatrix> collapse(const DensityMatrix& rho,
                                          const MeasurementFamily& fam,
                                          std::size_t outcome,
                                          const Tolerance& tol = {});

/// tr(rho O) for Hermitian O, with rho taken just before the first
/// measurement (or after all steps when none exists).
double observable_expectation(const QuantumTimeline& t,
                              const ComplexTensor& observable,
                              const Tolerance& tol = {});

/// Contracts the family's measurement box with the outcome summed out and
/// checks it equals the identity; true iff the completeness condition holds.
bool dont_mind_future_check(const MeasurementFamily& fam,
                            const Tolerance& tol = {});

/// sum_y E(y) rho E(y)^H for a valid family.
DensityMatrix kraus_apply(const DensityMatrix& rho,
                          const MeasurementFamily& fam,
                          const Tolerance& tol = {});

/// Exterior function of the marginalized-interaction box: a 4-axis tensor
/// S[x, x', xt, xt'] over system input pair and output pair, with the
/// ancilla (prior p(xi)) traced out. The joint unitary acts on the
/// (system, ancilla) composite with the system as the most significant digit.
ComplexTensor interaction_superoperator(const ComplexTensor& joint_unitary,
                                        const std::vector<double>& ancilla_prior,
                                        const Tolerance& tol = {});

/// Kraus family of the marginalized interaction, built by eigendecomposing
/// the Choi matrix of interaction_superoperator and keeping eigenvalues
/// above the rank-truncation threshold (1e-12).
MeasurementFamily interaction_to_kraus(const ComplexTensor& joint_unitary,
                                       const std::vector<double>& ancilla_prior,
                                       const Tolerance& tol = {});

/// Superoperator of an explicit family, arranged like
/// interaction_superoperator.
ComplexTensor family_superoperator(const MeasurementFamily& fam);

/// Contracts a projection measurement realized as a unitary interaction
/// through balanced mod-M adders against the direct projection-measurement
/// box and compares the two exterior functions. corrupt_adder unbalances the
/// lower adder and serves as a negative control.
bool interaction_measurement_equivalence(std::size_t m,
                                         const ComplexTensor& basis,
                                         bool corrupt_adder = false,
                                         const Tolerance& tol = {});

enum class Subsystem { First, Second };

/// Partial trace of a density matrix over an (n x m) composite; keeps the
/// named factor and traces the other out.
DensityMatrix partial_trace(const DensityMatrix& rho, std::size_t dim_first,
                            std::size_t dim_second, Subsystem keep,
                            const Tolerance& tol = {});

/// Post-processing of an outcome table through a column-stochastic channel
/// p(y|z): table rows must match the channel's column count.
std::vector<double> apply_classical_channel(
    const std::vector<double>& outcome_probs,
    const std::vector<std::vector<double>>& channel);

}  // namespace qfg::quantum

#endif  // QFG_QUANTUM_HPP
