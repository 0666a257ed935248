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

#include "qfg/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qfg/gates.hpp"

namespace qfg::quantum {

namespace {

// Eigenvalues of the Choi matrix at or below this threshold are dropped when
// extracting Kraus operators.
constexpr double kKrausRankEps = 1e-12;

double real_or_throw(Complex v, const Tolerance& tol, const char* what) {
  if (std::abs(v.imag()) > tol.abs_eps * std::max(1.0, std::abs(v.real()))) {
    throw InternalError(std::string(what) +
                        " has imaginary residue beyond tolerance");
  }
  return v.real();
}

void require_square(const ComplexTensor& m, const char* what) {
  if (m.rank() != 2 || m.shape()[0] != m.shape()[1]) {
    throw DimensionError(std::string(what) + " must be a square matrix");
  }
}

void require_unitary(const ComplexTensor& m, const Tolerance& tol,
                     const char* what) {
  require_square(m, what);
  if (!is_unitary(m, tol)) {
    throw DomainError(std::string(what) + " is not unitary within tolerance");
  }
}

// 3-axis measurement tensor T[xt, x, y] = A(y)(xt, x).
ComplexTensor family_tensor(const MeasurementFamily& fam) {
  std::size_t m = fam.dimension();
  std::size_t ny = fam.num_outcomes();
  std::vector<Complex> data(m * m * ny);
  for (std::size_t xt = 0; xt < m; ++xt) {
    for (std::size_t x = 0; x < m; ++x) {
      for (std::size_t y = 0; y < ny; ++y) {
        data[(xt * m + x) * ny + y] = fam.matrices[y].flat(xt * m + x);
      }
    }
  }
  return ComplexTensor::from_data({m, m, ny}, std::move(data));
}

ComplexTensor prior_tensor(const std::vector<double>& p) {
  std::vector<Complex> data(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) data[i] = p[i];
  return ComplexTensor::from_data({p.size()}, std::move(data));
}

void check_prior(const std::vector<double>& p, const Tolerance& tol) {
  if (p.empty()) throw ArgumentError("prior is empty");
  double sum = 0.0;
  for (double v : p) {
    if (v < -tol.abs_eps) throw DomainError("prior has a negative entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw DomainError("prior does not sum to one");
  }
}

}  // namespace

MeasurementValidation validate_measurement(const MeasurementFamily& fam,
                                           const Tolerance& tol) {
  if (fam.matrices.empty()) {
    throw ArgumentError("measurement family has no outcomes");
  }
  std::size_t m = fam.dimension();
  for (const ComplexTensor& a : fam.matrices) {
    require_square(a, "measurement matrix");
    if (a.shape()[0] != m) {
      throw DimensionError("measurement matrices have mixed sizes");
    }
  }
  ComplexTensor sum = ComplexTensor::zeros({m, m});
  for (const ComplexTensor& a : fam.matrices) {
    sum = sum + matmul(conj_transpose(a), a);
  }
  double dev = max_abs_diff(sum, ComplexTensor::identity(m));
  return MeasurementValidation{dev <= tol.abs_eps, dev};
}

MeasurementFamily projection_family(const ComplexTensor& basis,
                                    const Tolerance& tol) {
  require_unitary(basis, tol, "projection basis");
  std::size_t m = basis.shape()[0];
  MeasurementFamily fam;
  for (std::size_t y = 0; y < m; ++y) {
    std::vector<Complex> col(m);
    for (std::size_t i = 0; i < m; ++i) col[i] = basis.flat(i * m + y);
    std::vector<Complex> proj(m * m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        proj[i * m + j] = col[i] * std::conj(col[j]);
      }
    }
    fam.matrices.push_back(ComplexTensor::from_data({m, m}, std::move(proj)));
  }
  return fam;
}

MeasurementFamily partial_family(const ComplexTensor& basis,
                                 std::size_t idle_dim, const Tolerance& tol) {
  if (idle_dim == 0) throw ArgumentError("idle dimension must be >= 1");
  MeasurementFamily projected = projection_family(basis, tol);
  if (idle_dim == 1) return projected;
  MeasurementFamily fam;
  ComplexTensor idle = ComplexTensor::identity(idle_dim);
  for (const ComplexTensor& p : projected.matrices) {
    fam.matrices.push_back(tensor_product(idle, p));
  }
  return fam;
}

std::size_t count_measurements(const QuantumTimeline& t) {
  std::size_t n = 0;
  for (const Step& s : t.steps) {
    if (std::holds_alternative<MeasureStep>(s)) ++n;
  }
  return n;
}

void validate_timeline(const QuantumTimeline& t, const Tolerance& tol) {
  if (t.dimension == 0) throw ArgumentError("timeline dimension must be >= 1");
  if (const auto* prior = std::get_if<ClassicalPrior>(&t.initial)) {
    if (prior->probabilities.size() != t.dimension) {
      throw DimensionError("prior length does not match dimension");
    }
    check_prior(prior->probabilities, tol);
  } else if (const auto* known = std::get_if<KnownValue>(&t.initial)) {
    if (known->value >= t.dimension) {
      throw ArgumentError("initial value out of range");
    }
  } else {
    const auto& rho = std::get<GivenDensity>(t.initial).rho;
    require_square(rho, "initial density matrix");
    if (rho.shape()[0] != t.dimension) {
      throw DimensionError("initial density size does not match dimension");
    }
    DensityMatrix check(rho, tol);  // validates Hermitian/PSD/trace
  }
  for (const Step& s : t.steps) {
    if (const auto* u = std::get_if<UnitaryStep>(&s)) {
      require_unitary(u->matrix, tol, "timeline unitary");
      if (u->matrix.shape()[0] != t.dimension) {
        throw DimensionError("unitary size does not match dimension");
      }
    } else {
      const auto& ms = std::get<MeasureStep>(s);
      if (ms.family.dimension() != t.dimension) {
        throw DimensionError("measurement size does not match dimension");
      }
      MeasurementValidation v = validate_measurement(ms.family, tol);
      if (!v.ok) {
        throw DomainError("measurement family violates completeness, deviation " +
                          std::to_string(v.max_deviation));
      }
      if (ms.observed && *ms.observed >= ms.family.num_outcomes()) {
        throw ArgumentError("observed outcome out of range");
      }
    }
  }
}

DensityMatrix::DensityMatrix(ComplexTensor matrix, const Tolerance& tol)
    : matrix_(std::move(matrix)) {
  require_square(matrix_, "density matrix");
  if (!is_hermitian(matrix_, tol)) {
    throw DomainError("density matrix is not Hermitian within tolerance");
  }
  double tr = real_or_throw(trace(matrix_), tol, "density matrix trace");
  if (std::abs(tr - 1.0) > 1e-8) {
    throw DomainError("density matrix trace is not one");
  }
  if (!is_psd(matrix_, Tolerance{std::max(tol.abs_eps, 1e-9), tol.rel_eps})) {
    throw DomainError("density matrix is not positive semidefinite");
  }
}

CompiledTimeline build_graph(const QuantumTimeline& t, const Tolerance& tol) {
  validate_timeline(t, tol);
  CompiledTimeline out;
  FactorGraph& g = out.graph;
  const std::size_t m = t.dimension;

  VariableId up, lo;
  std::vector<FactorId> seg;
  if (const auto* prior = std::get_if<ClassicalPrior>(&t.initial)) {
    VariableId x0 = g.add_variable(m);
    up = g.add_variable(m);
    lo = g.add_variable(m);
    seg.push_back(g.add_factor(prior_tensor(prior->probabilities), {x0}));
    seg.push_back(g.add_factor(gates::equality_tensor(3, m), {x0, up, lo}));
  } else if (const auto* known = std::get_if<KnownValue>(&t.initial)) {
    up = g.add_variable(m);
    lo = g.add_variable(m);
    seg.push_back(g.add_factor(gates::one_hot(m, known->value), {up}));
    seg.push_back(g.add_factor(gates::one_hot(m, known->value), {lo}));
  } else {
    const auto& rho = std::get<GivenDensity>(t.initial).rho;
    up = g.add_variable(m);
    lo = g.add_variable(m);
    seg.push_back(g.add_factor(rho, {up, lo}));
  }
  out.mirror_pairs.emplace_back(up, lo);
  out.segments.push_back(seg);

  for (const Step& s : t.steps) {
    out.frontiers.emplace_back(up, lo);
    seg.clear();
    if (const auto* ustep = std::get_if<UnitaryStep>(&s)) {
      VariableId nu = g.add_variable(m);
      VariableId nl = g.add_variable(m);
      seg.push_back(g.add_factor(ustep->matrix, {nu, up}));
      seg.push_back(g.add_factor(conj(ustep->matrix), {nl, lo}));
      out.mirror_pairs.emplace_back(nu, nl);
      up = nu;
      lo = nl;
    } else {
      const auto& ms = std::get<MeasureStep>(s);
      std::size_t ny = ms.family.num_outcomes();
      VariableId nu = g.add_variable(m);
      VariableId nl = g.add_variable(m);
      VariableId yu = g.add_variable(ny);
      VariableId yo = g.add_variable(ny);
      VariableId yl = g.add_variable(ny);
      ComplexTensor up_tensor = family_tensor(ms.family);
      seg.push_back(g.add_factor(up_tensor, {nu, up, yu}));
      seg.push_back(g.add_factor(conj(up_tensor), {nl, lo, yl}));
      seg.push_back(g.add_factor(gates::equality_tensor(3, ny), {yu, yo, yl}));
      if (ms.observed) {
        seg.push_back(g.add_factor(gates::one_hot(ny, *ms.observed), {yo}));
      }
      out.mirror_pairs.emplace_back(nu, nl);
      out.mirror_pairs.emplace_back(yu, yl);
      out.outcome_vars.push_back(yo);
      out.outcome_sizes.push_back(ny);
      out.outcome_observed.push_back(ms.observed.has_value());
      up = nu;
      lo = nl;
    }
    out.segments.push_back(seg);
  }
  out.frontiers.emplace_back(up, lo);

  seg.clear();
  seg.push_back(g.add_factor(gates::equality_tensor(2, m), {up, lo}));
  out.segments.push_back(seg);
  return out;
}

double ProbabilityTable::at(const std::vector<std::size_t>& index) const {
  if (index.size() != shape.size()) {
    throw ArgumentError("table index rank mismatch");
  }
  std::size_t off = 0;
  for (std::size_t k = 0; k < shape.size(); ++k) {
    if (index[k] >= shape[k]) throw ArgumentError("table index out of range");
    off = off * shape[k] + index[k];
  }
  return values[off];
}

ProbabilityTable joint_distribution(const QuantumTimeline& t,
                                    const Tolerance& tol) {
  CompiledTimeline ct = build_graph(t, tol);
  ComplexTensor ext = exterior_function(ct.graph, whole_graph(ct.graph));

  // Boundary must be exactly the unobserved outcome variables, in step order.
  std::vector<VariableId> expect;
  std::vector<std::size_t> shape;
  for (std::size_t k = 0; k < ct.outcome_vars.size(); ++k) {
    if (!ct.outcome_observed[k]) {
      expect.push_back(ct.outcome_vars[k]);
      shape.push_back(ct.outcome_sizes[k]);
    }
  }
  std::vector<VariableId> got = boundary_variables(ct.graph, whole_graph(ct.graph));
  if (got != expect) {
    throw InternalError("compiled graph has unexpected open edges");
  }

  ProbabilityTable table;
  table.shape = shape;
  table.values.reserve(ext.size());
  bool anything_observed =
      std::any_of(ct.outcome_observed.begin(), ct.outcome_observed.end(),
                  [](bool b) { return b; });
  double sum = 0.0;
  for (const Complex& v : ext.data()) {
    if (std::abs(v.imag()) > tol.abs_eps) {
      throw InternalError("outcome table has imaginary residue beyond tolerance");
    }
    double p = v.real();
    if (p < -tol.abs_eps) {
      throw InternalError("outcome table has a negative entry");
    }
    p = std::max(p, 0.0);
    table.values.push_back(p);
    sum += p;
  }
  table.total = sum;
  if (!anything_observed && std::abs(sum - 1.0) > tol.abs_eps) {
    throw InternalError("outcome table does not sum to one");
  }
  return table;
}

std::pair<DensityMatrix, double> density_matrix_before(
    const QuantumTimeline& t, std::size_t k,
    const std::vector<std::size_t>& prefix, const Tolerance& tol) {
  std::size_t total = count_measurements(t);
  if (k == 0 || k > total) {
    throw ArgumentError("measurement index out of range");
  }
  if (prefix.size() + 1 != k) {
    throw ArgumentError("prefix length must be k - 1");
  }

  // Clamp the first k-1 measurements to the prefix; later measurements are
  // outside the box and stay unobserved.
  QuantumTimeline bound = t;
  std::size_t seen = 0;
  std::size_t step_of_k = bound.steps.size();
  for (std::size_t i = 0; i < bound.steps.size(); ++i) {
    if (auto* ms = std::get_if<MeasureStep>(&bound.steps[i])) {
      ++seen;
      if (seen < k) {
        if (prefix[seen - 1] >= ms->family.num_outcomes()) {
          throw ArgumentError("prefix outcome out of range");
        }
        ms->observed = prefix[seen - 1];
      } else {
        ms->observed.reset();
        if (seen == k) step_of_k = i;
      }
    }
  }

  CompiledTimeline ct = build_graph(bound, tol);
  BoxRegion box;
  for (FactorId f : ct.segments[0]) box.factors.push_back(f);
  for (std::size_t i = 0; i < step_of_k; ++i) {
    for (FactorId f : ct.segments[i + 1]) box.factors.push_back(f);
  }
  std::vector<VariableId> bd = boundary_variables(ct.graph, box);
  std::pair<VariableId, VariableId> frontier = ct.frontiers[step_of_k];
  if (bd != std::vector<VariableId>{frontier.first, frontier.second}) {
    throw InternalError("pre-measurement box has unexpected boundary");
  }
  ComplexTensor unnormalized = exterior_function(ct.graph, box);
  double p = real_or_throw(trace(unnormalized), tol, "prefix probability");
  if (p <= tol.abs_eps) {
    throw NullConditionError("conditioning on a zero-probability prefix");
  }
  ComplexTensor rho = Complex(1.0 / p, 0.0) * unnormalized;
  return {DensityMatrix(rho, Tolerance{std::max(tol.abs_eps, 1e-9), tol.rel_eps}),
          p};
}

std::vector<double> conditional_next(const QuantumTimeline& t,
                                     const std::vector<std::size_t>& prefix,
                                     const Tolerance& tol) {
  std::size_t k = prefix.size() + 1;
  auto [rho, p_prefix] = density_matrix_before(t, k, prefix, tol);
  (void)p_prefix;

  // Family of the k-th measurement.
  std::size_t seen = 0;
  const MeasurementFamily* fam = nullptr;
  for (const Step& s : t.steps) {
    if (const auto* ms = std::get_if<MeasureStep>(&s)) {
      if (++seen == k) {
        fam = &ms->family;
        break;
      }
    }
  }
  if (!fam) throw ArgumentError("no such measurement");

  std::vector<double> probs;
  double sum = 0.0;
  for (std::size_t y = 0; y < fam->num_outcomes(); ++y) {
    ComplexTensor a = fam->matrices[y];
    ComplexTensor conjugated = matmul(matmul(a, rho.matrix()), conj_transpose(a));
    double p = real_or_throw(trace(conjugated), tol, "outcome probability");
    p = std::max(p, 0.0);
    probs.push_back(p);
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw InternalError("conditional distribution does not sum to one");
  }
  return probs;
}

DensityMatrix evolve(const DensityMatrix& rho, const ComplexTensor& unitary,
                     const Tolerance& tol) {
  require_unitary(unitary, tol, "evolution matrix");
  ComplexTensor next = matmul(matmul(unitary, rho.matrix()), conj_transpose(unitary));
  return DensityMatrix(next, Tolerance{std::max(tol.abs_eps, 1e-9), tol.rel_eps});
}

std::pair<double, DensityMatrix> collapse(const DensityMatrix& rho,
                                          const MeasurementFamily& fam,
                                          std::size_t outcome,
                                          const Tolerance& tol) {
  MeasurementValidation v = validate_measurement(fam, tol);
  if (!v.ok) {
    throw DomainError("measurement family violates completeness");
  }
  if (outcome >= fam.num_outcomes()) {
    throw ArgumentError("outcome out of range");
  }
  const ComplexTensor& a = fam.matrices[outcome];
  ComplexTensor conjugated = matmul(matmul(a, rho.matrix()), conj_transpose(a));
  double p = real_or_throw(trace(conjugated), tol, "collapse probability");
  if (p <= tol.abs_eps) {
    throw NullConditionError("collapse onto a zero-probability outcome");
  }
  ComplexTensor next = Complex(1.0 / p, 0.0) * conjugated;
  return {p,
          DensityMatrix(next, Tolerance{std::max(tol.abs_eps, 1e-9), tol.rel_eps})};
}

double observable_expectation(const QuantumTimeline& t,
                              const ComplexTensor& observable,
                              const Tolerance& tol) {
  require_square(observable, "observable");
  if (!is_hermitian(observable, tol)) {
    throw DomainError("observable is not Hermitian within tolerance");
  }
  CompiledTimeline ct = build_graph(t, tol);
  std::size_t stop = t.steps.size();
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    if (std::holds_alternative<MeasureStep>(t.steps[i])) {
      stop = i;
      break;
    }
  }
  BoxRegion box;
  for (FactorId f : ct.segments[0]) box.factors.push_back(f);
  for (std::size_t i = 0; i < stop; ++i) {
    for (FactorId f : ct.segments[i + 1]) box.factors.push_back(f);
  }
  ComplexTensor rho = exterior_function(ct.graph, box);
  double tr = real_or_throw(trace(rho), tol, "state trace");
  rho = Complex(1.0 / tr, 0.0) * rho;
  return real_or_throw(trace(matmul(rho, observable)), tol,
                       "observable expectation");
}

bool dont_mind_future_check(const MeasurementFamily& fam,
                            const Tolerance& tol) {
  std::size_t m = fam.dimension();
  ComplexTensor t = family_tensor(fam);
  FactorGraph g;
  VariableId x = g.add_variable(m);
  VariableId xp = g.add_variable(m);
  VariableId xt = g.add_variable(m);
  VariableId y = g.add_variable(fam.num_outcomes());
  g.add_factor(t, {xt, x, y});
  g.add_factor(conj(t), {xt, xp, y});
  ComplexTensor ext = exterior_function(g, whole_graph(g));
  return max_abs_diff(ext, ComplexTensor::identity(m)) <=
         tol.abs_eps * std::max(1.0, max_norm(ext));
}

DensityMatrix kraus_apply(const DensityMatrix& rho,
                          const MeasurementFamily& fam, const Tolerance& tol) {
  MeasurementValidation v = validate_measurement(fam, tol);
  if (!v.ok) {
    throw DomainError("Kraus family violates the completeness condition");
  }
  std::size_t m = rho.dimension();
  ComplexTensor sum = ComplexTensor::zeros({m, m});
  for (const ComplexTensor& e : fam.matrices) {
    sum = sum + matmul(matmul(e, rho.matrix()), conj_transpose(e));
  }
  return DensityMatrix(sum, Tolerance{std::max(tol.abs_eps, 1e-9), tol.rel_eps});
}

ComplexTensor interaction_superoperator(const ComplexTensor& joint_unitary,
                                        const std::vector<double>& ancilla_prior,
                                        const Tolerance& tol) {
  require_unitary(joint_unitary, tol, "joint unitary");
  check_prior(ancilla_prior, tol);
  std::size_t d = ancilla_prior.size();
  std::size_t md = joint_unitary.shape()[0];
  if (md % d != 0) {
    throw DimensionError("joint unitary size is not divisible by ancilla size");
  }
  std::size_t m = md / d;

  ComplexTensor v4 = reshape(joint_unitary, {m, d, m, d});
  FactorGraph g;
  VariableId x = g.add_variable(m);
  VariableId xp = g.add_variable(m);
  VariableId xt = g.add_variable(m);
  VariableId xtp = g.add_variable(m);
  VariableId xi0 = g.add_variable(d);
  VariableId xiu = g.add_variable(d);
  VariableId xil = g.add_variable(d);
  VariableId xitu = g.add_variable(d);
  VariableId xitl = g.add_variable(d);
  g.add_factor(prior_tensor(ancilla_prior), {xi0});
  g.add_factor(gates::equality_tensor(3, d), {xi0, xiu, xil});
  g.add_factor(v4, {xt, xitu, x, xiu});
  g.add_factor(conj(v4), {xtp, xitl, xp, xil});
  g.add_factor(gates::equality_tensor(2, d), {xitu, xitl});
  // Boundary ascending: (x, xp, xt, xtp).
  return exterior_function(g, whole_graph(g));
}

ComplexTensor family_superoperator(const MeasurementFamily& fam) {
  std::size_t m = fam.dimension();
  std::vector<Complex> data(m * m * m * m, Complex(0.0, 0.0));
  for (const ComplexTensor& e : fam.matrices) {
    for (std::size_t x = 0; x < m; ++x) {
      for (std::size_t xp = 0; xp < m; ++xp) {
        for (std::size_t xt = 0; xt < m; ++xt) {
          for (std::size_t xtp = 0; xtp < m; ++xtp) {
            data[((x * m + xp) * m + xt) * m + xtp] +=
                e.flat(xt * m + x) * std::conj(e.flat(xtp * m + xp));
          }
        }
      }
    }
  }
  return ComplexTensor::from_data({m, m, m, m}, std::move(data));
}

MeasurementFamily interaction_to_kraus(const ComplexTensor& joint_unitary,
                                       const std::vector<double>& ancilla_prior,
                                       const Tolerance& tol) {
  ComplexTensor s = interaction_superoperator(joint_unitary, ancilla_prior, tol);
  std::size_t m = s.shape()[0];
  // Choi matrix: rows (x, xt), columns (x', xt').
  ComplexTensor choi = reshape(reorder_axes(s, {0, 2, 1, 3}), {m * m, m * m});
  SpectralDecomposition d =
      spectral_decompose(choi, Tolerance{1e-8, tol.rel_eps});

  MeasurementFamily fam;
  std::size_t n = m * m;
  for (std::size_t j = 0; j < n; ++j) {
    if (d.eigenvalues[j] <= kKrausRankEps) continue;
    double scale = std::sqrt(d.eigenvalues[j]);
    std::vector<Complex> e(m * m);
    for (std::size_t x = 0; x < m; ++x) {
      for (std::size_t xt = 0; xt < m; ++xt) {
        e[xt * m + x] = scale * d.eigenvectors.flat((x * m + xt) * n + j);
      }
    }
    fam.matrices.push_back(ComplexTensor::from_data({m, m}, std::move(e)));
  }
  if (fam.matrices.empty()) {
    throw InternalError("Choi matrix has no positive eigenvalues");
  }
  MeasurementValidation v =
      validate_measurement(fam, Tolerance{1e-8, tol.rel_eps});
  if (!v.ok) {
    throw InternalError("extracted Kraus family violates completeness");
  }
  return fam;
}

bool interaction_measurement_equivalence(std::size_t m,
                                         const ComplexTensor& basis,
                                         bool corrupt_adder,
                                         const Tolerance& tol) {
  require_unitary(basis, tol, "measurement basis");
  if (basis.shape()[0] != m) {
    throw DimensionError("basis size does not match the alphabet");
  }
  std::vector<double> uniform(m, 1.0 / static_cast<double>(m));

  // Left: unitary interaction through balanced mod-M adders with an ancilla.
  ComplexTensor left;
  {
    FactorGraph g;
    VariableId x = g.add_variable(m);
    VariableId xp = g.add_variable(m);
    VariableId xt = g.add_variable(m);
    VariableId xtp = g.add_variable(m);
    VariableId za = g.add_variable(m), zb = g.add_variable(m),
               zc = g.add_variable(m);
    VariableId zpa = g.add_variable(m), zpb = g.add_variable(m),
               zpc = g.add_variable(m);
    VariableId xi0 = g.add_variable(m), xiu = g.add_variable(m),
               xil = g.add_variable(m);
    VariableId xitu = g.add_variable(m), xitl = g.add_variable(m);

    g.add_factor(conj_transpose(basis), {za, x});
    g.add_factor(gates::equality_tensor(3, m), {za, zb, zc});
    g.add_factor(basis, {xt, zb});
    g.add_factor(gates::mod_add_tensor(m), {xiu, zc, xitu});

    g.add_factor(conj(conj_transpose(basis)), {zpa, xp});
    g.add_factor(gates::equality_tensor(3, m), {zpa, zpb, zpc});
    g.add_factor(conj(basis), {xtp, zpb});
    g.add_factor(gates::mod_add_tensor(m, corrupt_adder ? 1 : 0),
                 {xil, zpc, xitl});

    g.add_factor(prior_tensor(uniform), {xi0});
    g.add_factor(gates::equality_tensor(3, m), {xi0, xiu, xil});
    g.add_factor(gates::equality_tensor(2, m), {xitu, xitl});
    left = exterior_function(g, whole_graph(g));
  }

  // Right: the projection measurement with unknown outcome.
  ComplexTensor right;
  {
    FactorGraph g;
    VariableId x = g.add_variable(m);
    VariableId xp = g.add_variable(m);
    VariableId xt = g.add_variable(m);
    VariableId xtp = g.add_variable(m);
    VariableId za = g.add_variable(m), zb = g.add_variable(m),
               zu = g.add_variable(m);
    VariableId zpa = g.add_variable(m), zpb = g.add_variable(m),
               zl = g.add_variable(m);
    g.add_factor(conj_transpose(basis), {za, x});
    g.add_factor(gates::equality_tensor(3, m), {za, zb, zu});
    g.add_factor(basis, {xt, zb});
    g.add_factor(conj(conj_transpose(basis)), {zpa, xp});
    g.add_factor(gates::equality_tensor(3, m), {zpa, zpb, zl});
    g.add_factor(conj(basis), {xtp, zpb});
    g.add_factor(gates::equality_tensor(2, m), {zu, zl});
    right = exterior_function(g, whole_graph(g));
  }

  return max_abs_diff(left, right) <=
         tol.abs_eps * std::max(1.0, std::max(max_norm(left), max_norm(right)));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::size_t dim_first,
                            std::size_t dim_second, Subsystem keep,
                            const Tolerance& tol) {
  std::size_t m = rho.dimension();
  if (dim_first * dim_second != m) {
    throw DimensionError("composite dimension does not factor as given");
  }
  const ComplexTensor& r = rho.matrix();
  std::size_t kept = keep == Subsystem::First ? dim_first : dim_second;
  std::size_t other = keep == Subsystem::First ? dim_second : dim_first;
  std::vector<Complex> out(kept * kept, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < kept; ++i) {
    for (std::size_t j = 0; j < kept; ++j) {
      Complex acc(0.0, 0.0);
      for (std::size_t s = 0; s < other; ++s) {
        std::size_t row, col;
        if (keep == Subsystem::First) {
          row = i * dim_second + s;
          col = j * dim_second + s;
        } else {
          row = s * dim_second + i;
          col = s * dim_second + j;
        }
        acc += r.flat(row * m + col);
      }
      out[i * kept + j] = acc;
    }
  }
  return DensityMatrix(ComplexTensor::from_data({kept, kept}, std::move(out)),
                       Tolerance{std::max(tol.abs_eps, 1e-9), tol.rel_eps});
}

std::vector<double> apply_classical_channel(
    const std::vector<double>& outcome_probs,
    const std::vector<std::vector<double>>& channel) {
  if (channel.empty()) throw ArgumentError("empty channel");
  for (const auto& row : channel) {
    if (row.size() != outcome_probs.size()) {
      throw DimensionError("channel row length does not match outcome count");
    }
  }
  for (std::size_t z = 0; z < outcome_probs.size(); ++z) {
    double col = 0.0;
    for (const auto& row : channel) col += row[z];
    if (std::abs(col - 1.0) > 1e-6) {
      throw ArgumentError("channel columns must sum to one");
    }
  }
  std::vector<double> out(channel.size(), 0.0);
  for (std::size_t y = 0; y < channel.size(); ++y) {
    for (std::size_t z = 0; z < outcome_probs.size(); ++z) {
      out[y] += channel[y][z] * outcome_probs[z];
    }
  }
  return out;
}

}  // namespace qfg::quantum
