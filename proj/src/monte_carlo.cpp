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

#include "qfg/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace qfg::mc {

namespace {

std::vector<VariableId> attached_variables(const FactorGraph& g) {
  std::vector<VariableId> vars;
  for (VariableId v = 0; v < g.num_variables(); ++v) {
    if (g.attachment_count(v) > 0) vars.push_back(v);
  }
  return vars;
}

// Number of joint configurations of the attached variables.
std::size_t space_size(const FactorGraph& g,
                       const std::vector<VariableId>& vars) {
  std::size_t n = 1;
  for (VariableId v : vars) {
    std::size_t s = g.alphabet_size(v);
    if (n > (std::size_t(1) << 62) / s) {
      throw ResourceError("configuration space too large to count");
    }
    n *= s;
  }
  return n;
}

std::vector<std::size_t> decode(const FactorGraph& g,
                                const std::vector<VariableId>& vars,
                                std::size_t code) {
  std::vector<std::size_t> config(g.num_variables(), 0);
  for (std::size_t k = vars.size(); k-- > 0;) {
    std::size_t s = g.alphabet_size(vars[k]);
    config[vars[k]] = code % s;
    code /= s;
  }
  return config;
}

double target_weight(Complex f, Scheme scheme, double rho) {
  switch (scheme) {
    case Scheme::Uniform:
      return 1.0;
    case Scheme::AbsF:
      return std::abs(f);
    case Scheme::AbsFAnnealed:
      return std::pow(std::abs(f), rho);
  }
  return 0.0;
}

struct Stats {
  Complex mean;
  double sd;  // sample standard deviation around the mean
};

Stats summand_stats(const std::vector<Complex>& summands) {
  Complex mean(0.0, 0.0);
  for (const Complex& v : summands) mean += v;
  mean /= static_cast<double>(summands.size());
  double var = 0.0;
  for (const Complex& v : summands) var += std::norm(v - mean);
  if (summands.size() > 1) {
    var /= static_cast<double>(summands.size() - 1);
  }
  return {mean, std::sqrt(var)};
}

// Summands of a sample set, with adjacent mirror pairs collapsed into their
// exactly-real average.
std::vector<Complex> paired_summands(const SampleSet& s,
                                     const std::vector<Complex>& raw) {
  if (!s.conjugate_augmented) return raw;
  std::vector<Complex> out;
  out.reserve(raw.size() / 2);
  for (std::size_t i = 0; i + 1 < raw.size(); i += 2) {
    out.push_back(Complex((raw[i].real() + raw[i + 1].real()) * 0.5,
                          (raw[i].imag() + raw[i + 1].imag()) * 0.5));
  }
  return out;
}

}  // namespace

std::string scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::Uniform:
      return "uniform";
    case Scheme::AbsF:
      return "abs_f";
    case Scheme::AbsFAnnealed:
      return "abs_f_annealed";
  }
  return "?";
}

double abs_partition_sum(const FactorGraph& g, std::size_t guard) {
  std::vector<VariableId> vars = attached_variables(g);
  std::size_t n = space_size(g, vars);
  if (n > guard) {
    throw ResourceError("exact |f| normalization needs enumeration of " +
                        std::to_string(n) +
                        " configurations; use an annealing ladder instead");
  }
  double z = 0.0;
  for (std::size_t code = 0; code < n; ++code) {
    z += std::abs(evaluate_configuration(g, decode(g, vars, code)));
  }
  return z;
}

SampleSet sample(const FactorGraph& g, Scheme scheme, std::size_t k,
                 std::uint64_t seed, const SamplerOptions& opts, double rho) {
  if (k == 0) throw ArgumentError("sample count must be >= 1");
  if (scheme == Scheme::AbsFAnnealed && (rho <= 0.0 || rho >= 1.0)) {
    throw ArgumentError("annealing exponent must lie in (0, 1)");
  }
  std::vector<VariableId> vars = attached_variables(g);
  if (vars.empty()) throw ArgumentError("graph has no attached variables");
  std::size_t n = space_size(g, vars);

  SampleSet out;
  out.scheme = scheme;
  out.anneal_rho = scheme == Scheme::AbsFAnnealed ? rho : 1.0;
  out.seed = seed;
  out.configs.reserve(k);
  out.values.reserve(k);
  SplitMix64 rng(seed);

  if (scheme == Scheme::Uniform) {
    // Independent per-variable draws.
    for (std::size_t i = 0; i < k; ++i) {
      std::vector<std::size_t> config(g.num_variables(), 0);
      for (VariableId v : vars) config[v] = rng.below(g.alphabet_size(v));
      out.values.push_back(evaluate_configuration(g, config));
      out.configs.push_back(std::move(config));
    }
    return out;
  }

  if (n <= opts.enumeration_guard) {
    // Exact i.i.d. sampling by inverse CDF over the enumerated table.
    std::vector<double> cumulative(n);
    double total = 0.0;
    for (std::size_t code = 0; code < n; ++code) {
      total += target_weight(evaluate_configuration(g, decode(g, vars, code)),
                             scheme, rho);
      cumulative[code] = total;
    }
    if (total <= 0.0) {
      throw DegenerateTargetError("|f| vanishes on every configuration");
    }
    for (std::size_t i = 0; i < k; ++i) {
      double u = rng.uniform() * total;
      std::size_t code = static_cast<std::size_t>(
          std::lower_bound(cumulative.begin(), cumulative.end(), u) -
          cumulative.begin());
      if (code >= n) code = n - 1;
      std::vector<std::size_t> config = decode(g, vars, code);
      out.values.push_back(evaluate_configuration(g, config));
      out.configs.push_back(std::move(config));
    }
    return out;
  }

  // Single-site Metropolis with uniform proposals.
  out.exact_sampler = false;
  out.burn_in = opts.burn_in;
  out.thinning = std::max<std::size_t>(1, opts.thinning);

  std::vector<std::size_t> state(g.num_variables(), 0);
  double weight = 0.0;
  for (int attempt = 0; attempt < 4096; ++attempt) {
    for (VariableId v : vars) state[v] = rng.below(g.alphabet_size(v));
    weight = target_weight(evaluate_configuration(g, state), scheme, rho);
    if (weight > 0.0) break;
  }
  if (weight <= 0.0) {
    throw DegenerateTargetError(
        "could not find a configuration with nonzero |f|");
  }

  std::size_t needed = opts.burn_in + (k - 1) * out.thinning + 1;
  std::size_t produced = 0;
  for (std::size_t step = 0; step < needed; ++step) {
    VariableId v = vars[rng.below(vars.size())];
    std::size_t old = state[v];
    state[v] = rng.below(g.alphabet_size(v));
    double proposal = target_weight(evaluate_configuration(g, state), scheme, rho);
    double accept = weight > 0.0 ? proposal / weight : 1.0;
    if (proposal >= weight || rng.uniform() < accept) {
      weight = proposal;
    } else {
      state[v] = old;
    }
    if (step >= opts.burn_in && (step - opts.burn_in) % out.thinning == 0) {
      out.configs.push_back(state);
      out.values.push_back(evaluate_configuration(g, state));
      ++produced;
    }
  }
  if (produced != k) throw InternalError("sampler produced a short chain");
  return out;
}

SampleSet augment_conjugate(
    const SampleSet& samples, const FactorGraph& g,
    const std::vector<std::pair<VariableId, VariableId>>& mirror_pairs,
    const Tolerance& tol) {
  if (samples.conjugate_augmented) {
    throw ArgumentError("sample set is already augmented");
  }
  if (mirror_pairs.empty()) {
    throw StructureError("graph has no conjugate mirror registry");
  }
  std::set<VariableId> seen;
  for (auto [u, l] : mirror_pairs) {
    if (u == l || u >= g.num_variables() || l >= g.num_variables()) {
      throw StructureError("invalid mirror pair");
    }
    if (g.alphabet_size(u) != g.alphabet_size(l)) {
      throw StructureError("mirror pair alphabets differ");
    }
    if (!seen.insert(u).second || !seen.insert(l).second) {
      throw StructureError("variable appears in two mirror pairs");
    }
  }

  SampleSet out = samples;
  out.conjugate_augmented = true;
  out.configs.clear();
  out.values.clear();
  out.configs.reserve(2 * samples.configs.size());
  out.values.reserve(2 * samples.values.size());

  for (std::size_t i = 0; i < samples.configs.size(); ++i) {
    const std::vector<std::size_t>& config = samples.configs[i];
    std::vector<std::size_t> mirrored = config;
    for (auto [u, l] : mirror_pairs) std::swap(mirrored[u], mirrored[l]);

    Complex value = samples.values[i];
    Complex mirror_value = evaluate_configuration(g, mirrored);
    double scale = std::max(1.0, std::abs(value));
    if (std::abs(mirror_value - std::conj(value)) > tol.abs_eps * scale) {
      throw StructureError(
          "mirror-swapped configuration is not the complex conjugate; the "
          "graph is not a conjugate-pair graph under this registry");
    }
    out.configs.push_back(config);
    out.values.push_back(value);
    out.configs.push_back(std::move(mirrored));
    // Stored as the exact conjugate so paired sums are real bit-for-bit.
    out.values.push_back(std::conj(value));
  }
  return out;
}

EstimatorReport estimate_Z(const SampleSet& samples, const FactorGraph& g,
                           const SamplerOptions& opts) {
  if (samples.values.empty()) throw ArgumentError("empty sample set");
  if (samples.scheme == Scheme::AbsFAnnealed) {
    throw ArgumentError(
        "annealed samples estimate ratios, not Z; use anneal_ladder");
  }
  std::vector<VariableId> vars = attached_variables(g);
  double n_configs = static_cast<double>(space_size(g, vars));

  EstimatorReport report;
  report.scheme = scheme_name(samples.scheme);
  report.seed = samples.seed;
  report.conjugate_augmented = samples.conjugate_augmented;

  if (samples.scheme == Scheme::Uniform) {
    std::vector<Complex> summands = paired_summands(samples, samples.values);
    Stats s = summand_stats(summands);
    report.estimate = n_configs * s.mean;
    report.std_error =
        n_configs * s.sd / std::sqrt(static_cast<double>(summands.size()));
    report.sample_count = summands.size();
    return report;
  }

  // abs_f: Z = Z_|f| * E[f / |f|] under p_|f|.
  double z_abs = abs_partition_sum(g, opts.enumeration_guard);
  std::vector<Complex> phases;
  phases.reserve(samples.values.size());
  for (const Complex& v : samples.values) {
    double a = std::abs(v);
    if (a == 0.0) {
      throw InternalError("abs_f sample landed on a zero of |f|");
    }
    phases.push_back(v / a);
  }
  std::vector<Complex> summands = paired_summands(samples, phases);
  Stats s = summand_stats(summands);
  report.estimate = z_abs * s.mean;
  report.std_error =
      z_abs * s.sd / std::sqrt(static_cast<double>(summands.size()));
  report.sample_count = summands.size();
  return report;
}

EstimatorReport anneal_ladder(const FactorGraph& g,
                              const std::vector<double>& rho_list,
                              std::size_t k, std::uint64_t seed,
                              const SamplerOptions& opts) {
  std::vector<double> exponents;
  exponents.push_back(0.0);
  for (double rho : rho_list) {
    if (rho <= exponents.back() || rho >= 1.0) {
      throw ArgumentError("ladder exponents must satisfy 0 < rho_1 < ... < 1");
    }
    exponents.push_back(rho);
  }
  exponents.push_back(1.0);

  std::vector<VariableId> vars = attached_variables(g);
  double n_configs = static_cast<double>(space_size(g, vars));

  SplitMix64 root(seed);
  Complex estimate(n_configs, 0.0);
  double rel_var = 0.0;
  std::size_t total_samples = 0;

  // Ratio estimators between adjacent exponent levels.
  for (std::size_t i = 0; i + 1 < exponents.size(); ++i) {
    double lo = exponents[i];
    double hi = exponents[i + 1];
    Scheme scheme = lo == 0.0 ? Scheme::Uniform : Scheme::AbsFAnnealed;
    SampleSet s = sample(g, scheme, k, root.next(), opts, lo);
    std::vector<Complex> summands;
    summands.reserve(k);
    for (const Complex& v : s.values) {
      summands.push_back(Complex(std::pow(std::abs(v), hi - lo), 0.0));
    }
    Stats st = summand_stats(summands);
    if (st.mean.real() <= 0.0) {
      throw DegenerateTargetError("ratio estimator collapsed to zero");
    }
    estimate *= st.mean.real();
    double rel = st.sd / (st.mean.real() * std::sqrt(static_cast<double>(k)));
    rel_var += rel * rel;
    total_samples += k;
  }

  // Phase factor at the top level.
  SampleSet top = sample(g, Scheme::AbsF, k, root.next(), opts);
  std::vector<Complex> phases;
  phases.reserve(k);
  for (const Complex& v : top.values) {
    double a = std::abs(v);
    if (a == 0.0) throw InternalError("abs_f sample landed on a zero of |f|");
    phases.push_back(v / a);
  }
  Stats ph = summand_stats(phases);
  estimate *= ph.mean;
  total_samples += k;
  double phase_mag = std::abs(ph.mean);
  if (phase_mag > 0.0) {
    double rel = ph.sd / (phase_mag * std::sqrt(static_cast<double>(k)));
    rel_var += rel * rel;
  }

  EstimatorReport report;
  report.estimate = estimate;
  report.std_error = std::abs(estimate) * std::sqrt(rel_var);
  report.sample_count = total_samples;
  report.seed = seed;
  report.conjugate_augmented = false;
  report.scheme = "ladder(";
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (i) report.scheme += ",";
    report.scheme += std::to_string(exponents[i]);
  }
  report.scheme += ")";
  return report;
}

}  // namespace qfg::mc
