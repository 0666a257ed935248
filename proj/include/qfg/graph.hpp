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

#ifndef QFG_GRAPH_HPP
#define QFG_GRAPH_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "qfg/tensor.hpp"

namespace qfg {

using VariableId = std::uint32_t;
using FactorId = std::uint32_t;

/// Forney factor graph: edges are variables, boxes are factors, and every
/// variable attaches to at most two factor ports. Fan-out beyond degree two
/// must go through explicit equality-constraint factors; add_factor refuses a
/// third attachment.
///
/// Construction is the mutable phase (add_variable / add_factor); all queries
/// are const and graphs may be copied and shared freely afterwards.
class FactorGraph {
 public:
  struct Factor {
    ComplexTensor tensor;
    std::vector<VariableId> vars;  // one per tensor axis
  };

  VariableId add_variable(std::size_t alphabet_size);

  /// Attaches a factor; tensor axis k binds to vars[k]. Throws DimensionError
  /// on size mismatch, NormalityError on a third attachment.
  FactorId add_factor(ComplexTensor tensor, std::vector<VariableId> vars);

  std::size_t num_variables() const { return alphabet_.size(); }
  std::size_t num_factors() const { return factors_.size(); }
  std::size_t alphabet_size(VariableId v) const;
  int attachment_count(VariableId v) const;
  const Factor& factor(FactorId f) const;

 private:
  std::vector<std::size_t> alphabet_;
  std::vector<int> attachments_;
  std::vector<Factor> factors_;
};

/// A dashed box: a subset of the graph's factors.
struct BoxRegion {
  std::vector<FactorId> factors;
};

/// The box containing every factor.
BoxRegion whole_graph(const FactorGraph& g);

struct ContractionOptions {
  /// Optional full elimination order over the box's internal variables; the
  /// greedy heuristic is used when absent.
  std::optional<std::vector<VariableId>> elimination_order;
  /// Abort if an intermediate tensor would exceed this many entries.
  std::size_t entry_budget = std::size_t(1) << 26;
};

/// The box's boundary variables in canonical order (ascending VariableId):
/// variables attached both inside and outside, plus half edges inside.
std::vector<VariableId> boundary_variables(const FactorGraph& g,
                                           const BoxRegion& box);

/// Internal variables of the box (attached twice inside).
std::vector<VariableId> internal_variables(const FactorGraph& g,
                                           const BoxRegion& box);

/// Greedy min-weight elimination order over the internal variables of the
/// box spanned by all factors, given the boundary to keep. Any valid order
/// produces the same exterior function (closing-the-box invariance).
std::vector<VariableId> elimination_order(
    const FactorGraph& g, const std::vector<VariableId>& boundary);

/// Product of the box's factors summed over its internal variables, computed
/// by pairwise contraction along an elimination order. Result axes follow
/// boundary_variables(g, box). Throws ResourceError when the entry budget
/// would be exceeded.
ComplexTensor exterior_function(const FactorGraph& g, const BoxRegion& box,
                                const ContractionOptions& opts = {});

/// Exact enumeration over every internal configuration; the oracle against
/// which exterior_function is checked. Guard: at most config_guard internal
/// configurations.
ComplexTensor brute_force_exterior(const FactorGraph& g, const BoxRegion& box,
                                   std::size_t config_guard = 10'000'000);

/// Exterior function of the box containing all factors and all half edges:
/// a single complex number.
Complex partition_sum(const FactorGraph& g, const ContractionOptions& opts = {});

/// New graph with variable v fixed to the given value by attaching a one-hot
/// factor. When v has no spare attachment capacity the edge is split through
/// a degree-3 equality node first.
FactorGraph clamp(const FactorGraph& g, VariableId v, std::size_t value);

/// f(x) for a full configuration (one value per variable): the product of all
/// factor values.
Complex evaluate_configuration(const FactorGraph& g,
                               const std::vector<std::size_t>& config);

/// Product of all alphabet sizes.
std::size_t configuration_count(const FactorGraph& g);

}  // namespace qfg

#endif  // QFG_GRAPH_HPP
