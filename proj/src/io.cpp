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

#include "qfg/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "qfg/gates.hpp"
#include "qfg/qec.hpp"

namespace qfg::io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

Complex complex_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    fail(where, "complex numbers are two-element arrays [re, im]");
  }
  return Complex(j[0].get<double>(), j[1].get<double>());
}

Json complex_to_json(Complex v) { return Json::array({v.real(), v.imag()}); }

std::vector<Complex> data_from_json(const Json& j, std::size_t expected,
                                    const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of [re, im] pairs");
  if (j.size() != expected) {
    fail(where, "expected " + std::to_string(expected) + " entries, got " +
                    std::to_string(j.size()));
  }
  std::vector<Complex> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(complex_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

ComplexTensor matrix_from_json(const Json& j, std::size_t n,
                               const std::string& where) {
  return ComplexTensor::from_data({n, n}, data_from_json(j, n * n, where));
}

Json matrix_to_json(const ComplexTensor& m) {
  Json out = Json::array();
  for (const Complex& v : m.data()) out.push_back(complex_to_json(v));
  return out;
}

void check_version(const Json& j, const std::string& where) {
  if (!j.contains("version") || !j["version"].is_number_integer() ||
      j["version"].get<int>() != 1) {
    fail(where, "missing or unsupported version (expected 1)");
  }
}

}  // namespace

GraphFile parse_graph(const Json& j) {
  check_version(j, "graph");
  if (!j.contains("variables") || !j["variables"].is_array()) {
    fail("graph.variables", "missing variable list");
  }
  const Json& vars = j["variables"];
  std::vector<std::size_t> sizes(vars.size(), 0);
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const Json& v = vars[i];
    std::string where = "graph.variables[" + std::to_string(i) + "]";
    if (!v.contains("id") || !v.contains("size")) fail(where, "needs id and size");
    std::size_t id = v["id"].get<std::size_t>();
    std::size_t size = v["size"].get<std::size_t>();
    if (id >= vars.size()) fail(where, "ids must cover 0..N-1");
    if (sizes[id] != 0) fail(where, "duplicate variable id");
    if (size == 0) fail(where, "size must be >= 1");
    sizes[id] = size;
  }

  GraphFile file;
  for (std::size_t id = 0; id < sizes.size(); ++id) {
    file.graph.add_variable(sizes[id]);
  }

  if (!j.contains("factors") || !j["factors"].is_array()) {
    fail("graph.factors", "missing factor list");
  }
  const Json& factors = j["factors"];
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const Json& f = factors[i];
    std::string where = "graph.factors[" + std::to_string(i) + "]";
    if (!f.contains("vars") || !f["vars"].is_array()) {
      fail(where, "missing vars");
    }
    std::vector<VariableId> fvars;
    std::vector<std::size_t> fshape;
    for (const Json& v : f["vars"]) {
      std::size_t id = v.get<std::size_t>();
      if (id >= sizes.size()) fail(where, "unknown variable id");
      fvars.push_back(static_cast<VariableId>(id));
      fshape.push_back(sizes[id]);
    }
    ComplexTensor tensor;
    if (f.contains("gate")) {
      tensor = gates::resolve_gate(f["gate"].get<std::string>(), fshape).tensor;
    } else {
      std::vector<std::size_t> shape = fshape;
      if (f.contains("shape")) {
        shape.clear();
        for (const Json& s : f["shape"]) shape.push_back(s.get<std::size_t>());
        if (shape != fshape) {
          fail(where + ".shape", "does not match the variables' sizes");
        }
      }
      if (!f.contains("data")) fail(where, "needs data or gate");
      tensor = ComplexTensor::from_data(
          shape, data_from_json(f["data"], shape_product(shape), where + ".data"));
    }
    file.graph.add_factor(std::move(tensor), std::move(fvars));
  }

  if (j.contains("boxes")) {
    for (const auto& [name, list] : j["boxes"].items()) {
      std::vector<FactorId> ids;
      for (const Json& v : list) {
        std::size_t id = v.get<std::size_t>();
        if (id >= factors.size()) fail("graph.boxes." + name, "unknown factor index");
        ids.push_back(static_cast<FactorId>(id));
      }
      file.boxes[name] = std::move(ids);
    }
  }
  if (j.contains("mirror_pairs")) {
    for (const Json& p : j["mirror_pairs"]) {
      if (!p.is_array() || p.size() != 2) {
        fail("graph.mirror_pairs", "pairs are two-element arrays");
      }
      std::size_t u = p[0].get<std::size_t>(), l = p[1].get<std::size_t>();
      if (u >= sizes.size() || l >= sizes.size()) {
        fail("graph.mirror_pairs", "unknown variable id");
      }
      file.mirror_pairs.emplace_back(static_cast<VariableId>(u),
                                     static_cast<VariableId>(l));
    }
  }
  return file;
}

GraphFile load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return parse_graph(j);
}

Json graph_to_json(const GraphFile& file) {
  Json j;
  j["version"] = 1;
  Json vars = Json::array();
  for (VariableId v = 0; v < file.graph.num_variables(); ++v) {
    vars.push_back(Json{{"id", v}, {"size", file.graph.alphabet_size(v)}});
  }
  j["variables"] = std::move(vars);
  Json factors = Json::array();
  for (FactorId f = 0; f < file.graph.num_factors(); ++f) {
    const FactorGraph::Factor& fac = file.graph.factor(f);
    Json entry;
    entry["vars"] = fac.vars;
    entry["shape"] = fac.tensor.shape();
    Json data = Json::array();
    for (const Complex& v : fac.tensor.data()) data.push_back(complex_to_json(v));
    entry["data"] = std::move(data);
    factors.push_back(std::move(entry));
  }
  j["factors"] = std::move(factors);
  if (!file.boxes.empty()) {
    Json boxes;
    for (const auto& [name, list] : file.boxes) boxes[name] = list;
    j["boxes"] = std::move(boxes);
  }
  if (!file.mirror_pairs.empty()) {
    Json pairs = Json::array();
    for (auto [u, l] : file.mirror_pairs) pairs.push_back(Json::array({u, l}));
    j["mirror_pairs"] = std::move(pairs);
  }
  return j;
}

quantum::QuantumTimeline parse_timeline(const Json& j) {
  check_version(j, "timeline");
  quantum::QuantumTimeline t;
  if (!j.contains("dimension")) fail("timeline", "missing dimension");
  t.dimension = j["dimension"].get<std::size_t>();
  if (t.dimension == 0) fail("timeline.dimension", "must be >= 1");

  if (!j.contains("initial") || !j["initial"].contains("type")) {
    fail("timeline.initial", "missing initial state");
  }
  const Json& init = j["initial"];
  std::string type = init["type"].get<std::string>();
  if (type == "prior") {
    std::vector<double> p = init["p"].get<std::vector<double>>();
    if (p.size() != t.dimension) {
      fail("timeline.initial.p", "length must equal dimension");
    }
    t.initial = quantum::ClassicalPrior{std::move(p)};
  } else if (type == "known") {
    t.initial = quantum::KnownValue{init["value"].get<std::size_t>()};
  } else if (type == "density") {
    t.initial = quantum::GivenDensity{
        matrix_from_json(init["data"], t.dimension, "timeline.initial.data")};
  } else {
    fail("timeline.initial.type", "must be prior, known, or density");
  }

  if (!j.contains("steps") || !j["steps"].is_array()) {
    fail("timeline.steps", "missing step list");
  }
  std::size_t index = 0;
  for (const Json& s : j["steps"]) {
    std::string where = "timeline.steps[" + std::to_string(index++) + "]";
    if (s.contains("unitary")) {
      t.steps.push_back(quantum::UnitaryStep{matrix_from_json(
          s["unitary"]["data"], t.dimension, where + ".unitary.data")});
    } else if (s.contains("measure")) {
      const Json& m = s["measure"];
      std::string mtype = m.value("type", "");
      quantum::MeasurementFamily fam;
      if (mtype == "projection") {
        fam = quantum::projection_family(
            matrix_from_json(m["basis"], t.dimension, where + ".basis"));
      } else if (mtype == "partial") {
        std::size_t idle = m["idle_dim"].get<std::size_t>();
        if (idle == 0 || t.dimension % idle != 0) {
          fail(where + ".idle_dim", "must divide the dimension");
        }
        fam = quantum::partial_family(
            matrix_from_json(m["basis"], t.dimension / idle, where + ".basis"),
            idle);
      } else if (mtype == "general") {
        if (!m.contains("matrices") || !m["matrices"].is_array()) {
          fail(where + ".matrices", "missing matrix list");
        }
        for (const Json& mat : m["matrices"]) {
          fam.matrices.push_back(
              matrix_from_json(mat, t.dimension, where + ".matrices"));
        }
      } else {
        fail(where + ".measure.type", "must be projection, partial, or general");
      }
      quantum::MeasureStep step{std::move(fam), std::nullopt};
      if (m.contains("observed")) {
        step.observed = m["observed"].get<std::size_t>();
      }
      t.steps.push_back(std::move(step));
    } else {
      fail(where, "steps carry either unitary or measure");
    }
  }
  return t;
}

quantum::QuantumTimeline load_timeline(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return parse_timeline(j);
}

Json timeline_to_json(const quantum::QuantumTimeline& t) {
  Json j;
  j["version"] = 1;
  j["dimension"] = t.dimension;
  if (const auto* prior = std::get_if<quantum::ClassicalPrior>(&t.initial)) {
    j["initial"] = Json{{"type", "prior"}, {"p", prior->probabilities}};
  } else if (const auto* known = std::get_if<quantum::KnownValue>(&t.initial)) {
    j["initial"] = Json{{"type", "known"}, {"value", known->value}};
  } else {
    j["initial"] = Json{{"type", "density"},
                        {"data", matrix_to_json(std::get<quantum::GivenDensity>(
                                     t.initial).rho)}};
  }
  Json steps = Json::array();
  for (const quantum::Step& s : t.steps) {
    if (const auto* u = std::get_if<quantum::UnitaryStep>(&s)) {
      steps.push_back(Json{{"unitary", Json{{"data", matrix_to_json(u->matrix)}}}});
    } else {
      const auto& ms = std::get<quantum::MeasureStep>(s);
      Json m;
      m["type"] = "general";
      Json mats = Json::array();
      for (const ComplexTensor& a : ms.family.matrices) {
        mats.push_back(matrix_to_json(a));
      }
      m["matrices"] = std::move(mats);
      if (ms.observed) m["observed"] = *ms.observed;
      steps.push_back(Json{{"measure", std::move(m)}});
    }
  }
  j["steps"] = std::move(steps);
  return j;
}

Json tensor_to_json(const ComplexTensor& t) {
  Json j;
  j["shape"] = t.shape();
  Json data = Json::array();
  for (const Complex& v : t.data()) data.push_back(complex_to_json(v));
  j["data"] = std::move(data);
  return j;
}

ComplexTensor tensor_from_json(const Json& j) {
  if (!j.contains("shape") || !j.contains("data")) {
    fail("tensor", "needs shape and data");
  }
  std::vector<std::size_t> shape = j["shape"].get<std::vector<std::size_t>>();
  return ComplexTensor::from_data(
      shape, data_from_json(j["data"], shape_product(shape), "tensor.data"));
}

std::string format_double(double v, bool raw, int digits) {
  char buf[64];
  if (raw) {
    std::snprintf(buf, sizeof(buf), "%a", v);
  } else {
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  }
  return buf;
}

std::string format_complex(Complex v, bool raw, int digits) {
  return format_double(v.real(), raw, digits) + " " +
         format_double(v.imag(), raw, digits);
}

Complex parse_complex_token(const std::string& token) {
  std::string s;
  for (char c : token) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) throw ParseError("empty complex token");

  // Pure imaginary or real, or re{+,-}im i.
  auto parse_part = [](const std::string& part, bool imaginary) {
    if (!imaginary) return std::stod(part);
    std::string core = part.substr(0, part.size() - 1);  // strip 'i'
    if (core.empty() || core == "+") return 1.0;
    if (core == "-") return -1.0;
    return std::stod(core);
  };

  try {
    bool ends_i = s.back() == 'i' || s.back() == 'I';
    // Find a +/- separating the two parts (not at position 0, not after e/E).
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;) {
      if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
        split = k;
        break;
      }
    }
    if (ends_i && split != std::string::npos) {
      return Complex(std::stod(s.substr(0, split)),
                     parse_part(s.substr(split), true));
    }
    if (ends_i) return Complex(0.0, parse_part(s, true));
    return Complex(std::stod(s), 0.0);
  } catch (const std::exception&) {
    throw ParseError("cannot parse complex token '" + token + "'");
  }
}

std::vector<Complex> parse_complex_list(const std::string& text) {
  std::vector<Complex> out;
  std::string token;
  for (char c : text) {
    if (c == ',') {
      out.push_back(parse_complex_token(token));
      token.clear();
    } else {
      token.push_back(c);
    }
  }
  out.push_back(parse_complex_token(token));
  return out;
}

std::string pauli_string(const ComplexTensor& m, double eps) {
  std::array<Complex, 4> w = qec::pauli_coeffs(m);
  static const char* names[4] = {"s0", "s1", "s2", "s3"};
  std::string out;
  for (int k = 0; k < 4; ++k) {
    if (std::abs(w[k]) <= eps) continue;
    if (!out.empty()) out += " + ";
    out += "(" + format_double(w[k].real(), false, 9) + " " +
           format_double(w[k].imag(), false, 9) + "i)*" + names[k];
  }
  if (out.empty()) out = "0";
  return out;
}

}  // namespace qfg::io
