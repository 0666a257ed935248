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

#include "qfg/graph.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <string>

namespace qfg {

VariableId FactorGraph::add_variable(std::size_t alphabet_size) {
  if (alphabet_size == 0) throw ArgumentError("alphabet size must be >= 1");
  alphabet_.push_back(alphabet_size);
  attachments_.push_back(0);
  return static_cast<VariableId>(alphabet_.size() - 1);
}

FactorId FactorGraph::add_factor(ComplexTensor tensor,
                                 std::vector<VariableId> vars) {
  if (tensor.rank() != vars.size()) {
    throw DimensionError("factor variable list does not match tensor rank");
  }
  for (std::size_t k = 0; k < vars.size(); ++k) {
    if (vars[k] >= alphabet_.size()) {
      throw ArgumentError("factor references unknown variable");
    }
    if (tensor.shape()[k] != alphabet_[vars[k]]) {
      throw DimensionError("tensor axis size does not match variable alphabet");
    }
  }
  // A factor may reference the same variable on two of its own ports, which
  // also counts toward the degree-2 limit.
  std::map<VariableId, int> uses;
  for (VariableId v : vars) uses[v] += 1;
  for (const auto& [v, n] : uses) {
    if (attachments_[v] + n > 2) {
      throw NormalityError("variable " + std::to_string(v) +
                           " would attach to more than two factor ports");
    }
  }
  for (const auto& [v, n] : uses) attachments_[v] += n;
  factors_.push_back(Factor{std::move(tensor), std::move(vars)});
  return static_cast<FactorId>(factors_.size() - 1);
}

std::size_t FactorGraph::alphabet_size(VariableId v) const {
  if (v >= alphabet_.size()) throw ArgumentError("unknown variable");
  return alphabet_[v];
}

int FactorGraph::attachment_count(VariableId v) const {
  if (v >= alphabet_.size()) throw ArgumentError("unknown variable");
  return attachments_[v];
}

const FactorGraph::Factor& FactorGraph::factor(FactorId f) const {
  if (f >= factors_.size()) throw ArgumentError("unknown factor");
  return factors_[f];
}

BoxRegion whole_graph(const FactorGraph& g) {
  BoxRegion box;
  box.factors.resize(g.num_factors());
  for (std::size_t i = 0; i < g.num_factors(); ++i) {
    box.factors[i] = static_cast<FactorId>(i);
  }
  return box;
}

namespace {

struct BoxProfile {
  std::vector<VariableId> boundary;  // ascending
  std::vector<VariableId> internal;  // ascending
  std::vector<char> in_box;          // per factor
};

BoxProfile profile_box(const FactorGraph& g, const BoxRegion& box) {
  BoxProfile p;
  p.in_box.assign(g.num_factors(), 0);
  for (FactorId f : box.factors) {
    if (f >= g.num_factors()) throw ArgumentError("box references unknown factor");
    if (p.in_box[f]) throw ArgumentError("box lists a factor twice");
    p.in_box[f] = 1;
  }
  std::vector<int> inside(g.num_variables(), 0);
  for (FactorId f = 0; f < g.num_factors(); ++f) {
    if (!p.in_box[f]) continue;
    for (VariableId v : g.factor(f).vars) inside[v] += 1;
  }
  for (VariableId v = 0; v < g.num_variables(); ++v) {
    if (inside[v] == 0) continue;
    int total = g.attachment_count(v);
    int outside = total - inside[v];
    if (outside > 0 || total == 1) {
      p.boundary.push_back(v);
    } else {
      p.internal.push_back(v);
    }
  }
  return p;
}

// Working factor during elimination. Invariant: vars are distinct.
struct WorkFactor {
  ComplexTensor tensor;
  std::vector<VariableId> vars;
  bool alive = true;
};

// A factor may bind one variable on two of its own ports (e.g. the trace
// graph); collapse such axes to the diagonal so the invariant holds.
WorkFactor load_factor(const FactorGraph& g, const FactorGraph::Factor& f) {
  WorkFactor out;
  bool has_dup = false;
  for (std::size_t i = 0; i + 1 < f.vars.size() && !has_dup; ++i) {
    for (std::size_t j = i + 1; j < f.vars.size(); ++j) {
      if (f.vars[i] == f.vars[j]) {
        has_dup = true;
        break;
      }
    }
  }
  if (!has_dup) {
    out.tensor = f.tensor;
    out.vars = f.vars;
    return out;
  }
  std::vector<VariableId> distinct;
  for (VariableId v : f.vars) {
    if (std::find(distinct.begin(), distinct.end(), v) == distinct.end()) {
      distinct.push_back(v);
    }
  }
  std::vector<std::size_t> shape;
  for (VariableId v : distinct) shape.push_back(g.alphabet_size(v));
  std::vector<Complex> data(shape_product(shape));
  std::vector<std::size_t> full(f.vars.size());
  std::size_t off = 0;
  for (IndexIterator it(shape); !it.done(); it.advance(), ++off) {
    for (std::size_t k = 0; k < f.vars.size(); ++k) {
      std::size_t pos = static_cast<std::size_t>(
          std::find(distinct.begin(), distinct.end(), f.vars[k]) -
          distinct.begin());
      full[k] = it.index()[pos];
    }
    data[off] = f.tensor.flat(f.tensor.offset_of(full));
  }
  out.tensor = ComplexTensor::from_data(std::move(shape), std::move(data));
  out.vars = std::move(distinct);
  return out;
}

// Pointwise product of two factors over the union of their variables; shared
// variables are matched, not summed.
WorkFactor join(const FactorGraph& g, const WorkFactor& a, const WorkFactor& b,
                std::size_t entry_budget) {
  std::vector<VariableId> out_vars = a.vars;
  std::vector<std::size_t> b_pos_in_out(b.vars.size());
  for (std::size_t k = 0; k < b.vars.size(); ++k) {
    auto it = std::find(out_vars.begin(), out_vars.end(), b.vars[k]);
    if (it == out_vars.end()) {
      out_vars.push_back(b.vars[k]);
      b_pos_in_out[k] = out_vars.size() - 1;
    } else {
      b_pos_in_out[k] = static_cast<std::size_t>(it - out_vars.begin());
    }
  }
  std::vector<std::size_t> out_shape(out_vars.size());
  for (std::size_t k = 0; k < out_vars.size(); ++k) {
    out_shape[k] = g.alphabet_size(out_vars[k]);
  }
  std::size_t total = shape_product(out_shape);
  if (total > entry_budget) {
    throw ResourceError("intermediate tensor of " + std::to_string(total) +
                        " entries exceeds the contraction budget");
  }

  std::vector<Complex> out_data(total);
  std::vector<std::size_t> ai(a.vars.size()), bi(b.vars.size());
  std::size_t off = 0;
  for (IndexIterator it(out_shape); !it.done(); it.advance(), ++off) {
    const std::vector<std::size_t>& oi = it.index();
    for (std::size_t k = 0; k < a.vars.size(); ++k) ai[k] = oi[k];
    for (std::size_t k = 0; k < b.vars.size(); ++k) bi[k] = oi[b_pos_in_out[k]];
    out_data[off] =
        a.tensor.flat(a.tensor.offset_of(ai)) * b.tensor.flat(b.tensor.offset_of(bi));
  }
  WorkFactor out;
  out.tensor = ComplexTensor::from_data(std::move(out_shape), std::move(out_data));
  out.vars = std::move(out_vars);
  return out;
}

WorkFactor sum_out_var(const WorkFactor& f, VariableId v) {
  std::vector<std::size_t> axes;
  for (std::size_t k = 0; k < f.vars.size(); ++k) {
    if (f.vars[k] == v) axes.push_back(k);
  }
  WorkFactor out;
  out.tensor = sum_out(f.tensor, axes);
  for (std::size_t k = 0; k < f.vars.size(); ++k) {
    if (f.vars[k] != v) out.vars.push_back(f.vars[k]);
  }
  return out;
}

// Entry count of the tensor that eliminating v would create.
std::size_t elimination_cost(const FactorGraph& g,
                             const std::vector<WorkFactor>& work,
                             const std::vector<std::vector<std::size_t>>& by_var,
                             VariableId v) {
  std::set<VariableId> union_vars;
  for (std::size_t fi : by_var[v]) {
    if (!work[fi].alive) continue;
    for (VariableId w : work[fi].vars) union_vars.insert(w);
  }
  std::size_t cost = 1;
  for (VariableId w : union_vars) {
    std::size_t s = g.alphabet_size(w);
    if (cost > std::numeric_limits<std::size_t>::max() / s) {
      return std::numeric_limits<std::size_t>::max();
    }
    cost *= s;
  }
  return cost;
}

ComplexTensor contract_box(const FactorGraph& g, const BoxRegion& box,
                           const BoxProfile& profile,
                           const ContractionOptions& opts) {
  std::vector<WorkFactor> work;
  for (FactorId f : box.factors) {
    work.push_back(load_factor(g, g.factor(f)));
  }

  std::vector<VariableId> order;
  if (opts.elimination_order.has_value()) {
    order = *opts.elimination_order;
    std::set<VariableId> given(order.begin(), order.end());
    if (given.size() != order.size() ||
        given != std::set<VariableId>(profile.internal.begin(),
                                      profile.internal.end())) {
      throw ArgumentError(
          "user elimination order must list each internal variable once");
    }
  }

  // factor indices touching each variable; stale entries are skipped.
  std::vector<std::vector<std::size_t>> by_var(g.num_variables());
  auto index_factor = [&](std::size_t fi) {
    std::set<VariableId> seen;
    for (VariableId v : work[fi].vars) {
      if (seen.insert(v).second) by_var[v].push_back(fi);
    }
  };
  for (std::size_t fi = 0; fi < work.size(); ++fi) index_factor(fi);

  std::vector<char> eliminated(g.num_variables(), 0);
  std::size_t remaining = profile.internal.size();
  std::size_t next_in_order = 0;

  while (remaining > 0) {
    VariableId v;
    if (opts.elimination_order.has_value()) {
      v = order[next_in_order++];
    } else {
      // Greedy: cheapest variable to eliminate right now.
      std::size_t best_cost = std::numeric_limits<std::size_t>::max();
      VariableId best = 0;
      for (VariableId cand : profile.internal) {
        if (eliminated[cand]) continue;
        std::size_t c = elimination_cost(g, work, by_var, cand);
        if (c < best_cost) {
          best_cost = c;
          best = cand;
        }
      }
      v = best;
    }

    WorkFactor merged;
    merged.tensor = ComplexTensor::scalar(Complex(1.0, 0.0));
    bool first = true;
    for (std::size_t fi : by_var[v]) {
      if (!work[fi].alive) continue;
      if (first) {
        merged = work[fi];
        first = false;
      } else {
        merged = join(g, merged, work[fi], opts.entry_budget);
      }
      work[fi].alive = false;
    }
    if (first) {
      // Internal variable not touched by any live factor: it was summed away
      // with a cluster already (cannot happen with degree-2 variables), or
      // the box is inconsistent.
      throw InternalError("elimination reached a variable with no live factor");
    }
    merged = sum_out_var(merged, v);
    eliminated[v] = 1;
    --remaining;

    work.push_back(std::move(merged));
    index_factor(work.size() - 1);
  }

  // Multiply what is left into one tensor over the boundary.
  WorkFactor result;
  result.tensor = ComplexTensor::scalar(Complex(1.0, 0.0));
  for (std::size_t fi = 0; fi < work.size(); ++fi) {
    if (!work[fi].alive) continue;
    result = join(g, result, work[fi], opts.entry_budget);
    work[fi].alive = false;
  }

  // Canonical axis order: ascending VariableId.
  std::vector<std::size_t> perm(result.vars.size());
  {
    std::vector<std::size_t> pos(result.vars.size());
    for (std::size_t k = 0; k < pos.size(); ++k) pos[k] = k;
    std::sort(pos.begin(), pos.end(), [&](std::size_t x, std::size_t y) {
      return result.vars[x] < result.vars[y];
    });
    perm = pos;
  }
  return reorder_axes(result.tensor, perm);
}

}  // namespace

std::vector<VariableId> boundary_variables(const FactorGraph& g,
                                           const BoxRegion& box) {
  return profile_box(g, box).boundary;
}

std::vector<VariableId> internal_variables(const FactorGraph& g,
                                           const BoxRegion& box) {
  return profile_box(g, box).internal;
}

std::vector<VariableId> elimination_order(
    const FactorGraph& g, const std::vector<VariableId>& boundary) {
  BoxRegion box = whole_graph(g);
  BoxProfile profile = profile_box(g, box);
  std::set<VariableId> keep(boundary.begin(), boundary.end());

  std::vector<WorkFactor> work;
  for (FactorId f : box.factors) {
    work.push_back(load_factor(g, g.factor(f)));
  }
  std::vector<std::vector<std::size_t>> by_var(g.num_variables());
  for (std::size_t fi = 0; fi < work.size(); ++fi) {
    std::set<VariableId> seen;
    for (VariableId v : work[fi].vars) {
      if (seen.insert(v).second) by_var[v].push_back(fi);
    }
  }

  // Half edges are never eliminated; only variables attached twice qualify.
  std::vector<VariableId> candidates;
  for (VariableId v = 0; v < g.num_variables(); ++v) {
    if (by_var[v].empty() || keep.count(v)) continue;
    if (g.attachment_count(v) != 2) continue;
    candidates.push_back(v);
  }

  // Rank by current elimination cost; cheap chain endpoints come first.
  std::vector<VariableId> out = candidates;
  std::stable_sort(out.begin(), out.end(), [&](VariableId x, VariableId y) {
    return elimination_cost(g, work, by_var, x) <
           elimination_cost(g, work, by_var, y);
  });
  return out;
}

ComplexTensor exterior_function(const FactorGraph& g, const BoxRegion& box,
                                const ContractionOptions& opts) {
  BoxProfile profile = profile_box(g, box);
  return contract_box(g, box, profile, opts);
}

ComplexTensor brute_force_exterior(const FactorGraph& g, const BoxRegion& box,
                                   std::size_t config_guard) {
  BoxProfile profile = profile_box(g, box);

  std::size_t internal_count = 1;
  for (VariableId v : profile.internal) {
    std::size_t s = g.alphabet_size(v);
    if (internal_count > config_guard / s) {
      throw ResourceError("internal configuration count exceeds the guard");
    }
    internal_count *= s;
  }

  std::vector<std::size_t> boundary_shape;
  for (VariableId v : profile.boundary) {
    boundary_shape.push_back(g.alphabet_size(v));
  }
  std::vector<Complex> out(shape_product(boundary_shape), Complex(0.0, 0.0));

  // All variables the box touches, with a position for each.
  std::vector<VariableId> involved = profile.boundary;
  involved.insert(involved.end(), profile.internal.begin(),
                  profile.internal.end());
  std::vector<std::size_t> pos_of(g.num_variables(),
                                  std::numeric_limits<std::size_t>::max());
  std::vector<std::size_t> involved_shape;
  for (std::size_t k = 0; k < involved.size(); ++k) {
    pos_of[involved[k]] = k;
    involved_shape.push_back(g.alphabet_size(involved[k]));
  }

  std::vector<const FactorGraph::Factor*> fs;
  for (FactorId f : box.factors) fs.push_back(&g.factor(f));

  std::vector<std::size_t> fidx;
  for (IndexIterator it(involved_shape); !it.done(); it.advance()) {
    const std::vector<std::size_t>& ci = it.index();
    Complex prod(1.0, 0.0);
    for (const FactorGraph::Factor* f : fs) {
      fidx.assign(f->vars.size(), 0);
      for (std::size_t k = 0; k < f->vars.size(); ++k) {
        fidx[k] = ci[pos_of[f->vars[k]]];
      }
      prod *= f->tensor.flat(f->tensor.offset_of(fidx));
      if (prod == Complex(0.0, 0.0)) break;
    }
    std::size_t off = 0;
    for (std::size_t k = 0; k < profile.boundary.size(); ++k) {
      off = off * boundary_shape[k] + ci[k];
    }
    out[off] += prod;
  }
  return ComplexTensor::from_data(std::move(boundary_shape), std::move(out));
}

Complex partition_sum(const FactorGraph& g, const ContractionOptions& opts) {
  ComplexTensor ext = exterior_function(g, whole_graph(g), opts);
  std::vector<std::size_t> all_axes(ext.rank());
  for (std::size_t k = 0; k < ext.rank(); ++k) all_axes[k] = k;
  return sum_out(ext, all_axes).scalar_value();
}

FactorGraph clamp(const FactorGraph& g, VariableId v, std::size_t value) {
  if (v >= g.num_variables()) throw ArgumentError("unknown variable");
  if (value >= g.alphabet_size(v)) {
    throw ArgumentError("clamp value out of range");
  }
  FactorGraph out = g;
  std::size_t m = g.alphabet_size(v);
  if (g.attachment_count(v) < 2) {
    out.add_factor(ComplexTensor::one_hot(m, value), {v});
    return out;
  }
  // Split the edge: rewire one port of one factor through a fresh variable,
  // tie them back with a degree-3 equality node, and clamp its free port.
  FactorGraph rebuilt;
  for (VariableId w = 0; w < g.num_variables(); ++w) {
    rebuilt.add_variable(g.alphabet_size(w));
  }
  VariableId split = rebuilt.add_variable(m);
  VariableId pin = rebuilt.add_variable(m);
  bool rewired = false;
  for (FactorId f = 0; f < g.num_factors(); ++f) {
    std::vector<VariableId> vars = g.factor(f).vars;
    if (!rewired) {
      for (VariableId& w : vars) {
        if (w == v) {
          w = split;
          rewired = true;
          break;
        }
      }
    }
    rebuilt.add_factor(g.factor(f).tensor, vars);
  }
  // Equality over (v, split, pin); value enters through pin.
  std::vector<Complex> eq_data(m * m * m, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < m; ++i) eq_data[(i * m + i) * m + i] = 1.0;
  rebuilt.add_factor(ComplexTensor::from_data({m, m, m}, std::move(eq_data)),
                     {v, split, pin});
  rebuilt.add_factor(ComplexTensor::one_hot(m, value), {pin});
  return rebuilt;
}

Complex evaluate_configuration(const FactorGraph& g,
                               const std::vector<std::size_t>& config) {
  if (config.size() != g.num_variables()) {
    throw ArgumentError("configuration length does not match variable count");
  }
  for (VariableId v = 0; v < g.num_variables(); ++v) {
    if (config[v] >= g.alphabet_size(v)) {
      throw ArgumentError("configuration value out of range");
    }
  }
  Complex prod(1.0, 0.0);
  std::vector<std::size_t> idx;
  for (FactorId f = 0; f < g.num_factors(); ++f) {
    const FactorGraph::Factor& fac = g.factor(f);
    idx.assign(fac.vars.size(), 0);
    for (std::size_t k = 0; k < fac.vars.size(); ++k) {
      idx[k] = config[fac.vars[k]];
    }
    prod *= fac.tensor.flat(fac.tensor.offset_of(idx));
  }
  return prod;
}

std::size_t configuration_count(const FactorGraph& g) {
  std::size_t n = 1;
  for (VariableId v = 0; v < g.num_variables(); ++v) {
    std::size_t s = g.alphabet_size(v);
    if (n > std::numeric_limits<std::size_t>::max() / s) {
      throw ResourceError("configuration count overflows");
    }
    n *= s;
  }
  return n;
}

}  // namespace qfg
