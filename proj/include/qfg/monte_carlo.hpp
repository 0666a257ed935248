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

#ifndef QFG_MONTE_CARLO_HPP
#define QFG_MONTE_CARLO_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qfg/graph.hpp"

namespace qfg::mc {

/// SplitMix64: a named, splittable generator; every report records its seed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  std::size_t below(std::size_t n) {
    return static_cast<std::size_t>(next() % n);
  }

  /// Derives an independent stream.
  SplitMix64 split() { return SplitMix64(next() ^ 0x5851F42D4C957F2DULL); }

 private:
  std::uint64_t state_;
};

enum class Scheme { Uniform, AbsF, AbsFAnnealed };

std::string scheme_name(Scheme scheme);

/// Full configurations with their f values and the sampling metadata needed
/// to interpret them.
struct SampleSet {
  Scheme scheme = Scheme::Uniform;
  double anneal_rho = 1.0;  // exponent for AbsFAnnealed
  std::uint64_t seed = 0;
  bool exact_sampler = true;
  std::size_t burn_in = 0;
  std::size_t thinning = 0;
  bool conjugate_augmented = false;

  std::vector<std::vector<std::size_t>> configs;
  std::vector<Complex> values;  // f(x) per configuration
};

struct SamplerOptions {
  /// Exact inverse-CDF sampling enumerates the configuration space up to this
  /// many entries; larger spaces fall back to single-site Metropolis.
  std::size_t enumeration_guard = std::size_t(1) << 22;
  std::size_t burn_in = 1000;
  std::size_t thinning = 10;
};

/// Draws k configurations targeting the scheme's density (uniform, |f|, or
/// |f|^rho). Throws DegenerateTargetError when |f| vanishes everywhere.
SampleSet sample(const FactorGraph& g, Scheme scheme, std::size_t k,
                 std::uint64_t seed, const SamplerOptions& opts = {},
                 double rho = 1.0);

/// Doubles the sample list with mirror-swapped configurations: each upper
/// variable's value is exchanged with its registered lower mirror. The f
/// values of a pair are complex conjugates (checked within tol). Pairs are
/// stored adjacently.
SampleSet augment_conjugate(
    const SampleSet& samples, const FactorGraph& g,
    const std::vector<std::pair<VariableId, VariableId>>& mirror_pairs,
    const Tolerance& tol = {});

struct EstimatorReport {
  Complex estimate;
  double std_error = 0.0;
  /// Independent summands: a mirror pair counts once, ladder stages add up.
  std::size_t sample_count = 0;
  std::string scheme;
  std::uint64_t seed = 0;
  bool conjugate_augmented = false;
};

/// Estimates the partition sum from a sample set:
///   uniform  -> |X| * mean(f)
///   abs_f    -> Z_|f| * mean(f / |f|), Z_|f| by exact enumeration
/// Conjugate-augmented sets contribute exactly-real paired summands.
/// Annealed sets must go through anneal_ladder instead.
EstimatorReport estimate_Z(const SampleSet& samples, const FactorGraph& g,
                           const SamplerOptions& opts = {});

/// Multi-level estimator of Z_|f| through the exponent ladder
/// 0 < rho_1 < ... < 1 (uniform at exponent 0, |f| at exponent 1), each step
/// a ratio estimator, combined with the phase estimator at the top level.
/// An empty ladder degenerates to the single uniform-to-|f| step.
EstimatorReport anneal_ladder(const FactorGraph& g,
                              const std::vector<double>& rho_list,
                              std::size_t k, std::uint64_t seed,
                              const SamplerOptions& opts = {});

/// Exact Z_|f| by enumeration (guarded).
double abs_partition_sum(const FactorGraph& g,
                         std::size_t guard = std::size_t(1) << 22);

}  // namespace qfg::mc

#endif  // QFG_MONTE_CARLO_HPP
