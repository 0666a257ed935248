// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qfg/gates.hpp"
#include "qfg/io.hpp"
#include "qfg/monte_carlo.hpp"
#include "qfg/qec.hpp"
#include "qfg/quantum.hpp"
#include "test_util.hpp"

using namespace qfg;
using testutil::Rng;

namespace {

int g_failures = 0;

void run_criterion(int number, const std::string& title,
                   const std::function<std::string()>& body) {
  auto start = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = true;
  try {
    detail = body();
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  std::printf("[%s] criterion %d: %s (%s, %.1fs)\n", ok ? "PASS" : "FAIL",
              number, title.c_str(), detail.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

[[noreturn]] void fail(const std::string& message) {
  throw std::runtime_error(message);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2e", v);
  return buf;
}

// Random normal factor graph with factor entries normalized to unit max-norm.
FactorGraph random_graph(Rng& rng, std::size_t max_vars, std::size_t max_alpha,
                         std::size_t max_factors) {
  FactorGraph g;
  std::size_t nv = 2 + rng.below(max_vars - 1);
  std::vector<VariableId> vars;
  for (std::size_t i = 0; i < nv; ++i) {
    vars.push_back(g.add_variable(1 + rng.below(max_alpha)));
  }
  std::size_t nf = 1 + rng.below(max_factors);
  for (std::size_t i = 0; i < nf; ++i) {
    std::vector<VariableId> open;
    for (VariableId v : vars) {
      if (g.attachment_count(v) < 2) open.push_back(v);
    }
    if (open.empty()) break;
    std::size_t arity = 1 + rng.below(std::min<std::size_t>(3, open.size()));
    for (std::size_t k = open.size(); k > 1; --k) {
      std::swap(open[k - 1], open[rng.below(k)]);
    }
    std::vector<VariableId> picked(open.begin(), open.begin() + arity);
    std::vector<std::size_t> shape;
    for (VariableId v : picked) shape.push_back(g.alphabet_size(v));
    ComplexTensor t = testutil::random_tensor(rng, shape);
    double m = max_norm(t);
    if (m > 0) t = Complex(1.0 / m, 0.0) * t;
    g.add_factor(t, picked);
  }
  return g;
}

quantum::MeasurementFamily random_block_family(Rng& rng, std::size_t m,
                                               std::size_t d) {
  ComplexTensor w = testutil::random_unitary(rng, m * d);
  quantum::MeasurementFamily fam;
  for (std::size_t in = 0; in < d; ++in) {
    for (std::size_t out = 0; out < d; ++out) {
      std::vector<Complex> e(m * m);
      for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < m; ++c) {
          e[r * m + c] = w.flat((r * d + out) * (m * d) + (c * d + in)) /
                         std::sqrt(static_cast<double>(d));
        }
      }
      fam.matrices.push_back(ComplexTensor::from_data({m, m}, std::move(e)));
    }
  }
  return fam;
}

quantum::MeasurementFamily random_family(Rng& rng, std::size_t m) {
  switch (rng.below(3)) {
    case 0:
      return quantum::projection_family(testutil::random_unitary(rng, m));
    case 1:
      if (m % 2 == 0) {
        return quantum::partial_family(testutil::random_unitary(rng, m / 2), 2);
      }
      return quantum::projection_family(testutil::random_unitary(rng, m));
    default:
      return random_block_family(rng, m, 2);
  }
}

quantum::QuantumTimeline random_timeline(Rng& rng, std::size_t max_dim,
                                         std::size_t max_meas) {
  quantum::QuantumTimeline t;
  t.dimension = 2 + rng.below(max_dim - 1);
  switch (rng.below(3)) {
    case 0: {
      std::vector<double> p(t.dimension);
      double s = 0.0;
      for (double& v : p) {
        v = rng.uniform() + 0.05;
        s += v;
      }
      for (double& v : p) v /= s;
      t.initial = quantum::ClassicalPrior{p};
      break;
    }
    case 1:
      t.initial = quantum::KnownValue{rng.below(t.dimension)};
      break;
    default:
      t.initial = quantum::GivenDensity{testutil::random_density(rng, t.dimension)};
      break;
  }
  std::size_t n = 1 + rng.below(max_meas);
  for (std::size_t k = 0; k < n; ++k) {
    t.steps.push_back(
        quantum::UnitaryStep{testutil::random_unitary(rng, t.dimension)});
    t.steps.push_back(quantum::MeasureStep{random_family(rng, t.dimension),
                                           std::nullopt});
  }
  return t;
}

ComplexTensor initial_density(const quantum::QuantumTimeline& t) {
  std::size_t m = t.dimension;
  std::vector<Complex> d(m * m, Complex(0.0, 0.0));
  if (const auto* prior = std::get_if<quantum::ClassicalPrior>(&t.initial)) {
    for (std::size_t i = 0; i < m; ++i) d[i * m + i] = prior->probabilities[i];
  } else if (const auto* known = std::get_if<quantum::KnownValue>(&t.initial)) {
    d[known->value * m + known->value] = 1.0;
  } else {
    return std::get<quantum::GivenDensity>(t.initial).rho;
  }
  return ComplexTensor::from_data({m, m}, std::move(d));
}

// --- criteria --------------------------------------------------------------

std::string criterion_closing_the_box() {
  Rng rng(20260808);
  double worst = 0.0;
  for (int rep = 0; rep < 500; ++rep) {
    FactorGraph g = random_graph(rng, 8, 4, 8);
    BoxRegion box = whole_graph(g);
    ComplexTensor greedy = exterior_function(g, box);
    ComplexTensor oracle = brute_force_exterior(g, box);

    std::vector<VariableId> order = internal_variables(g, box);
    for (std::size_t k = order.size(); k > 1; --k) {
      std::swap(order[k - 1], order[rng.below(k)]);
    }
    ContractionOptions opts;
    opts.elimination_order = order;
    ComplexTensor shuffled = exterior_function(g, box, opts);

    worst = std::max(worst, max_abs_diff(greedy, oracle));
    worst = std::max(worst, max_abs_diff(shuffled, oracle));
    worst = std::max(worst, max_abs_diff(greedy, shuffled));
    if (worst > 1e-10) fail("max deviation " + fmt(worst));
  }
  return "500 graphs, two orders vs enumeration, max dev " + fmt(worst);
}

std::string criterion_born_rule() {
  Rng rng(2);
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    std::size_t m = 2 + rng.below(7);
    std::size_t x = rng.below(m);
    ComplexTensor u = testutil::random_unitary(rng, m);
    ComplexTensor b = testutil::random_unitary(rng, m);

    quantum::QuantumTimeline t;
    t.dimension = m;
    t.initial = quantum::KnownValue{x};
    t.steps.push_back(quantum::UnitaryStep{u});
    t.steps.push_back(
        quantum::MeasureStep{quantum::projection_family(b), std::nullopt});
    quantum::ProbabilityTable table = quantum::joint_distribution(t);

    for (std::size_t y = 0; y < m; ++y) {
      Complex amp(0.0, 0.0);
      for (std::size_t i = 0; i < m; ++i) {
        amp += std::conj(b.at({i, y})) * u.at({i, x});
      }
      worst = std::max(worst, std::abs(table.at({y}) - std::norm(amp)));
    }
    if (worst > 1e-10) fail("max deviation " + fmt(worst));
  }
  return "100 triples (M up to 8), max dev " + fmt(worst);
}

std::string criterion_normalization_future_blindness() {
  Rng rng(3);
  double worst_sum = 0.0;
  double worst_blind = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    quantum::QuantumTimeline t = random_timeline(rng, 4, 3);
    quantum::ProbabilityTable before = quantum::joint_distribution(t);
    worst_sum = std::max(worst_sum, std::abs(before.total - 1.0));
    if (worst_sum > 1e-10) fail("table sum deviates by " + fmt(worst_sum));

    quantum::QuantumTimeline extended = t;
    extended.steps.push_back(
        quantum::UnitaryStep{testutil::random_unitary(rng, t.dimension)});
    extended.steps.push_back(quantum::MeasureStep{
        random_family(rng, t.dimension), std::nullopt});
    quantum::ProbabilityTable after = quantum::joint_distribution(extended);

    std::size_t extra = after.shape.back();
    std::size_t i = 0;
    for (IndexIterator it(before.shape); !it.done(); it.advance(), ++i) {
      std::vector<std::size_t> idx = it.index();
      idx.push_back(0);
      double marg = 0.0;
      for (std::size_t y = 0; y < extra; ++y) {
        idx.back() = y;
        marg += after.at(idx);
      }
      worst_blind = std::max(worst_blind, std::abs(marg - before.values[i]));
    }
    if (worst_blind > 1e-10) fail("future measurement leaked " + fmt(worst_blind));
  }
  return "100 timelines, sum dev " + fmt(worst_sum) + ", future dev " +
         fmt(worst_blind);
}

std::string criterion_measurement_calculus() {
  Rng rng(3);  // same ensemble as criterion 3
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    quantum::QuantumTimeline t = random_timeline(rng, 4, 3);
    quantum::ProbabilityTable table = quantum::joint_distribution(t);

    for (IndexIterator it(table.shape); !it.done(); it.advance()) {
      // Sequential replay of Props 5-7 with validated density matrices.
      quantum::DensityMatrix rho(initial_density(t), Tolerance{1e-9, 1e-8});
      double p = 1.0;
      std::size_t next = 0;
      bool dead = false;
      for (const quantum::Step& s : t.steps) {
        if (const auto* u = std::get_if<quantum::UnitaryStep>(&s)) {
          if (!dead) rho = quantum::evolve(rho, u->matrix);
        } else {
          const auto& ms = std::get<quantum::MeasureStep>(s);
          std::size_t y = it.index()[next++];
          if (dead) continue;
          try {
            auto [py, collapsed] = quantum::collapse(rho, ms.family, y);
            p *= py;
            rho = collapsed;  // construction validates Hermitian/PSD/trace-1
          } catch (const NullConditionError&) {
            p = 0.0;
            dead = true;
          }
        }
      }
      worst = std::max(worst, std::abs(p - table.at(it.index())));
      if (worst > 1e-9) fail("replay deviates by " + fmt(worst));
    }

    // Conditional via the clamped-box density matrix (trace formula) against
    // the replay values on a random achievable prefix.
    std::size_t measurements = quantum::count_measurements(t);
    if (measurements >= 2) {
      std::vector<std::size_t> prefix;
      double acc = 1.0;
      quantum::DensityMatrix rho(initial_density(t), Tolerance{1e-9, 1e-8});
      std::size_t taken = 0;
      for (const quantum::Step& s : t.steps) {
        if (const auto* u = std::get_if<quantum::UnitaryStep>(&s)) {
          rho = quantum::evolve(rho, u->matrix);
        } else if (taken + 1 >= measurements) {
          break;  // stop at the last measurement: rho is now rho_k
        } else {
          const auto& ms = std::get<quantum::MeasureStep>(s);
          std::vector<double> probs;
          for (std::size_t y = 0; y < ms.family.num_outcomes(); ++y) {
            ComplexTensor n = matmul(matmul(ms.family.matrices[y], rho.matrix()),
                                     conj_transpose(ms.family.matrices[y]));
            probs.push_back(std::max(trace(n).real(), 0.0));
          }
          std::size_t pick = 0;
          for (std::size_t y = 1; y < probs.size(); ++y) {
            if (probs[y] > probs[pick]) pick = y;
          }
          auto [py, collapsed] = quantum::collapse(rho, ms.family, pick);
          prefix.push_back(pick);
          acc *= py;
          rho = collapsed;
          ++taken;
        }
      }
      if (!prefix.empty() && acc > 1e-9) {
        auto [rho_k, p_prefix] =
            quantum::density_matrix_before(t, prefix.size() + 1, prefix);
        worst = std::max(worst, std::abs(p_prefix - acc));
        worst = std::max(worst, max_abs_diff(rho_k.matrix(), rho.matrix()));
        if (worst > 1e-9) fail("clamped box deviates by " + fmt(worst));
      }
    }
  }
  return "replay vs contraction on 100 timelines, max dev " + fmt(worst);
}

std::string criterion_repetition_tables() {
  Rng rng(5);
  Tolerance proj{1e-9, 1e-8};
  int cells = 0;
  for (int rep = 0; rep < 50; ++rep) {
    std::array<Complex, 4> w;
    for (auto& v : w) v = rng.cnormal();
    std::array<qec::SyndromeTable, 3> tables;
    for (std::size_t loc = 1; loc <= 3; ++loc) {
      qec::ErrorSpec err = qec::ErrorSpec::from_coeffs(loc, w);
      tables[loc - 1] = qec::rep3_syndrome_table(err);
      double scale = frobenius_norm(err.matrix);
      for (int y2 = 0; y2 < 2; ++y2) {
        for (int y1 = 0; y1 < 2; ++y1) {
          ComplexTensor predicted = qec::rep3_predicted_channel(err, y2, y1);
          const ComplexTensor& got = tables[loc - 1].channel(y2, y1);
          ++cells;
          if (frobenius_norm(predicted) < 1e-12) {
            if (frobenius_norm(got) > 1e-12 * scale) {
              fail("impossible cell is not zero");
            }
          } else {
            if (!projective_equal(got, predicted, proj)) {
              fail("cell disagrees with the table");
            }
            if (max_abs_diff(got, predicted) > 1e-9) {
              fail("cell coefficients deviate");
            }
          }
        }
      }
    }
    // Compression: same-syndrome cells across locations agree projectively.
    for (int y2 = 0; y2 < 2; ++y2) {
      for (int y1 = 0; y1 < 2; ++y1) {
        const ComplexTensor* ref = nullptr;
        for (const auto& t : tables) {
          const ComplexTensor& c = t.channel(y2, y1);
          if (frobenius_norm(c) < 1e-9) continue;
          if (ref && !projective_equal(*ref, c, proj)) {
            fail("table does not compress across locations");
          }
          if (!ref) ref = &c;
        }
      }
    }
  }
  return "50 coefficient vectors, " + std::to_string(cells) + " cells";
}

std::string criterion_shor() {
  Rng rng(6);
  Tolerance proj{1e-9, 1e-8};
  double worst_fid = 1.0;
  for (int rep = 0; rep < 200; ++rep) {
    std::size_t loc = 1 + rng.below(9);
    std::array<Complex, 4> w;
    for (auto& v : w) v = rng.cnormal();
    qec::ErrorSpec err = qec::ErrorSpec::from_coeffs(loc, w);

    // Random achievable syndrome: candidates restricted to the error's block
    // and the outer pair, screened by the composition rules.
    std::size_t block = (loc - 1) / 3;
    qec::ShorSyndrome syndrome{};
    bool found = false;
    for (int attempt = 0; attempt < 64 && !found; ++attempt) {
      qec::ShorSyndrome cand{};
      cand[2 * block] = static_cast<int>(rng.below(2));
      cand[2 * block + 1] = static_cast<int>(rng.below(2));
      cand[6] = static_cast<int>(rng.below(2));
      cand[7] = static_cast<int>(rng.below(2));
      if (frobenius_norm(qec::shor_predicted_channel(err, cand)) > 1e-6) {
        syndrome = cand;
        found = true;
      }
    }
    if (!found) fail("no achievable syndrome found");

    ComplexTensor got = qec::shor_effective_channel(err, syndrome);
    ComplexTensor predicted = qec::shor_predicted_channel(err, syndrome);
    if (!projective_equal(got, predicted, proj)) {
      fail("contracted channel disagrees with the table composition");
    }
    qec::RecoveryReport report = qec::shor_recover(err, syndrome, 1000 + rep);
    worst_fid = std::min(worst_fid, report.fidelity);
    if (std::abs(report.fidelity - 1.0) > 1e-9) {
      fail("recovery fidelity " + fmt(report.fidelity));
    }
  }
  return "200 random errors, min fidelity 1 - " + fmt(1.0 - worst_fid);
}

std::string criterion_interaction_equivalence() {
  Rng rng(7);
  int checks = 0;
  for (std::size_t m : {2u, 3u, 5u}) {
    std::vector<ComplexTensor> bases = {
        ComplexTensor::identity(m), gates::dft(m), testutil::random_unitary(rng, m)};
    for (const ComplexTensor& b : bases) {
      if (!quantum::interaction_measurement_equivalence(m, b)) {
        fail("equivalence failed for M = " + std::to_string(m));
      }
      ++checks;
    }
    if (quantum::interaction_measurement_equivalence(
            m, ComplexTensor::identity(m), /*corrupt_adder=*/true)) {
      fail("corrupted adder not detected for M = " + std::to_string(m));
    }
  }
  return std::to_string(checks) + " positive and 3 negative controls";
}

std::string criterion_kraus_choi() {
  Rng rng(8);
  double worst = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    ComplexTensor v = testutil::random_unitary(rng, 4);
    std::vector<double> prior(2);
    prior[0] = rng.uniform();
    prior[1] = 1.0 - prior[0];
    ComplexTensor box = quantum::interaction_superoperator(v, prior);
    quantum::MeasurementFamily fam = quantum::interaction_to_kraus(v, prior);
    worst = std::max(worst, max_abs_diff(quantum::family_superoperator(fam), box));
    worst = std::max(
        worst, quantum::validate_measurement(fam, Tolerance{1e-9, 1e-8})
                   .max_deviation);
    if (worst > 1e-9) fail("superoperator deviation " + fmt(worst));
  }
  return "50 joint unitaries (M=2, d=2), max dev " + fmt(worst);
}

std::string criterion_monte_carlo() {
  Rng meta(9);

  struct Case {
    FactorGraph graph;
    Complex z;
    mc::Scheme scheme;
    std::vector<std::pair<VariableId, VariableId>> mirrors;  // empty: no augment
  };
  std::vector<Case> cases;

  // The (3,1) toy.
  {
    Case c;
    VariableId v = c.graph.add_variable(2);
    c.graph.add_factor(
        ComplexTensor::from_data({2}, {Complex(3, 0), Complex(1, 0)}), {v});
    c.z = Complex(4, 0);
    c.scheme = mc::Scheme::Uniform;
    cases.push_back(std::move(c));
  }
  // Random real-positive and complex graphs with enumerable Z.
  for (int i = 0; i < 7; ++i) {
    Case c;
    std::vector<VariableId> vs;
    for (int k = 0; k < 4; ++k) vs.push_back(c.graph.add_variable(2));
    for (int k = 0; k + 1 < 4; ++k) {
      ComplexTensor t = testutil::random_tensor(meta, {2, 2});
      if (i < 4) {
        // positive real entries
        std::vector<Complex> d(t.data());
        for (Complex& x : d) x = Complex(std::abs(x) + 0.1, 0.0);
        t = ComplexTensor::from_data({2, 2}, d);
      }
      c.graph.add_factor(t, {vs[k], vs[k + 1]});
    }
    c.z = partition_sum(c.graph);
    c.scheme = i < 4 ? mc::Scheme::AbsF : mc::Scheme::Uniform;
    cases.push_back(std::move(c));
  }
  // Minimal conjugate-pair graph.
  {
    Case c;
    VariableId u = c.graph.add_variable(2);
    VariableId l = c.graph.add_variable(2);
    ComplexTensor g =
        ComplexTensor::from_data({2}, {Complex(1, 0), Complex(0, 1)});
    c.graph.add_factor(g, {u});
    c.graph.add_factor(conj(g), {l});
    c.z = Complex(2, 0);
    c.scheme = mc::Scheme::AbsF;
    c.mirrors = {{u, l}};
    cases.push_back(std::move(c));
  }
  // Quantum single-measurement graph with Z = 1, conjugate-augmented.
  {
    quantum::QuantumTimeline t;
    t.dimension = 2;
    t.initial = quantum::KnownValue{0};
    t.steps.push_back(quantum::UnitaryStep{gates::hadamard()});
    t.steps.push_back(quantum::MeasureStep{
        quantum::projection_family(ComplexTensor::identity(2)), std::nullopt});
    quantum::CompiledTimeline ct = quantum::build_graph(t);
    Case c;
    c.graph = ct.graph;
    c.z = Complex(1, 0);
    c.scheme = mc::Scheme::Uniform;
    c.mirrors = ct.mirror_pairs;
    cases.push_back(std::move(c));
  }
  if (cases.size() != 10) fail("expected 10 graphs");

  const std::size_t k = 10000;
  for (std::size_t ci = 0; ci < cases.size(); ++ci) {
    const Case& c = cases[ci];
    int within = 0;
    for (int run = 0; run < 10; ++run) {
      std::uint64_t seed = 5000 + 100 * ci + run;
      mc::SampleSet s = mc::sample(c.graph, c.scheme, k, seed);
      if (!c.mirrors.empty()) {
        s = mc::augment_conjugate(s, c.graph, c.mirrors);
      }
      mc::EstimatorReport r = mc::estimate_Z(s, c.graph);
      if (!c.mirrors.empty() && r.estimate.imag() != 0.0) {
        fail("augmented estimate has a nonzero imaginary part");
      }
      if (std::abs(r.estimate - c.z) <= 3.0 * r.std_error + 1e-12) ++within;

      if (run == 0) {
        // Bit-identical rerun.
        mc::SampleSet s2 = mc::sample(c.graph, c.scheme, k, seed);
        if (!c.mirrors.empty()) {
          s2 = mc::augment_conjugate(s2, c.graph, c.mirrors);
        }
        mc::EstimatorReport r2 = mc::estimate_Z(s2, c.graph);
        if (r.estimate != r2.estimate || r.std_error != r2.std_error) {
          fail("seeded rerun differs");
        }
      }
    }
    if (within < 9) {
      fail("graph " + std::to_string(ci) + ": only " + std::to_string(within) +
           "/10 runs within 3 standard errors");
    }
  }
  return "10 graphs x 10 runs, K = 10000";
}

std::string criterion_gate_identities() {
  double worst = 0.0;
  ComplexTensor cx = gates::cnot();
  worst = std::max(worst, max_abs_diff(matmul(cx, cx), ComplexTensor::identity(4)));
  ComplexTensor sw = gates::swap_gate();
  worst = std::max(worst, max_abs_diff(matmul(sw, sw), ComplexTensor::identity(4)));
  for (int k = 0; k < 4; ++k) {
    worst = std::max(worst, max_abs_diff(matmul(gates::pauli(k), gates::pauli(k)),
                                         gates::pauli(0)));
  }
  ComplexTensor h = gates::hadamard();
  worst = std::max(worst, max_abs_diff(matmul(matmul(h, gates::pauli(1)), h),
                                       gates::pauli(3)));
  if (worst > 1e-12) fail("max deviation " + fmt(worst));
  return "cnot^2, swap^2, pauli^2, HXH = Z, max dev " + fmt(worst);
}

}  // namespace

int main() {
  run_criterion(1, "closing-the-box soundness", criterion_closing_the_box);
  run_criterion(2, "Born rule", criterion_born_rule);
  run_criterion(3, "normalization and future-blindness",
                criterion_normalization_future_blindness);
  run_criterion(4, "measurement calculus replay", criterion_measurement_calculus);
  run_criterion(5, "repetition-code tables", criterion_repetition_tables);
  run_criterion(6, "Shor tables and recovery", criterion_shor);
  run_criterion(7, "interaction-measurement equivalence",
                criterion_interaction_equivalence);
  run_criterion(8, "Kraus operators from the Choi matrix", criterion_kraus_choi);
  run_criterion(9, "Monte Carlo partition sums", criterion_monte_carlo);
  run_criterion(10, "gate identities", criterion_gate_identities);

  if (g_failures == 0) {
    std::printf("all criteria passed\n");
  } else {
    std::printf("%d criteria failed\n", g_failures);
  }
  return g_failures;
}
