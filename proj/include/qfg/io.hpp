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

#ifndef QFG_IO_HPP
#define QFG_IO_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qfg/graph.hpp"
#include "qfg/quantum.hpp"

namespace qfg::io {

using Json = nlohmann::json;

/// Graph file, version 1: variables with ids 0..N-1 and sizes, factors with
/// either inline data (complex numbers as [re, im] pairs, row-major) or a
/// gate name resolved against the variables' sizes, optional named boxes
/// (factor-index subsets), and an optional conjugate mirror registry.
struct GraphFile {
  FactorGraph graph;
  std::map<std::string, std::vector<FactorId>> boxes;
  std::vector<std::pair<VariableId, VariableId>> mirror_pairs;
};

GraphFile parse_graph(const Json& j);
GraphFile load_graph(const std::string& path);
Json graph_to_json(const GraphFile& file);

/// Timeline file, version 1: dimension, initial state (prior | known |
/// density), and steps (unitary | measure with type projection, partial, or
/// general and an optional observed outcome).
quantum::QuantumTimeline parse_timeline(const Json& j);
quantum::QuantumTimeline load_timeline(const std::string& path);
Json timeline_to_json(const quantum::QuantumTimeline& t);

Json tensor_to_json(const ComplexTensor& t);
ComplexTensor tensor_from_json(const Json& j);

/// 12 significant digits by default; raw mode prints binary64 hexfloats for
/// bit-exact comparison.
std::string format_double(double v, bool raw = false, int digits = 12);
std::string format_complex(Complex v, bool raw = false, int digits = 12);

/// Accepts "1", "-2.5", "i", "-i", "2i", "1+2i", "0.6-0.8i".
Complex parse_complex_token(const std::string& token);

/// Comma-separated complex tokens.
std::vector<Complex> parse_complex_list(const std::string& text);

/// Renders a 2x2 matrix as a Pauli-basis combination; coefficients smaller
/// than eps are dropped for display (the matrix itself stays unrounded).
std::string pauli_string(const ComplexTensor& m, double eps = 1e-9);

}  // namespace qfg::io

#endif  // QFG_IO_HPP
