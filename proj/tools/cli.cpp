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

#include "cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "qfg/gates.hpp"
#include "qfg/io.hpp"
#include "qfg/monte_carlo.hpp"
#include "qfg/qec.hpp"
#include "qfg/quantum.hpp"

namespace qfg::cli {

namespace {

Tolerance env_tolerance() {
  Tolerance tol;
  if (const char* env = std::getenv("QFG_TOL")) {
    char* end = nullptr;
    double v = std::strtod(env, &end);
    if (end != env && v > 0.0) tol.abs_eps = v;
  }
  return tol;
}

void print_tensor(std::ostream& out, const ComplexTensor& t,
                  const std::vector<VariableId>& axes, bool raw) {
  out << "# axes:";
  for (VariableId v : axes) out << " " << v;
  out << "\n";
  if (t.rank() == 0) {
    out << io::format_complex(t.scalar_value(), raw) << "\n";
    return;
  }
  for (IndexIterator it(t.shape()); !it.done(); it.advance()) {
    for (std::size_t v : it.index()) out << v << " ";
    out << io::format_complex(t.flat(t.offset_of(it.index())), raw) << "\n";
  }
}

std::vector<std::size_t> parse_index_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) throw ParseError("empty index in list '" + text + "'");
    out.push_back(std::stoul(token));
  }
  return out;
}

ComplexTensor parse_error_matrix(const std::string& coeffs,
                                 const std::string& matrix) {
  if (!coeffs.empty() && !matrix.empty()) {
    throw ArgumentError("give either --error coefficients or --matrix, not both");
  }
  if (!matrix.empty()) {
    std::vector<Complex> entries = io::parse_complex_list(matrix);
    if (entries.size() != 4) {
      throw ParseError("--matrix needs four complex entries (row-major 2x2)");
    }
    return ComplexTensor::from_data({2, 2}, entries);
  }
  if (coeffs.empty()) {
    throw ArgumentError("an error spec (--error or --matrix) is required");
  }
  std::vector<Complex> w = io::parse_complex_list(coeffs);
  if (w.size() != 4) {
    throw ParseError("--error needs four complex coefficients w0,w1,w2,w3");
  }
  return qec::from_pauli_coeffs({w[0], w[1], w[2], w[3]});
}

qec::ShorSyndrome parse_syndrome(const std::string& bits) {
  if (bits.size() != 8) {
    throw ParseError("--syndrome needs eight bits, e.g. 01000000");
  }
  qec::ShorSyndrome s{};
  for (std::size_t i = 0; i < 8; ++i) {
    if (bits[i] != '0' && bits[i] != '1') {
      throw ParseError("--syndrome bits must be 0 or 1");
    }
    s[i] = bits[i] - '0';
  }
  return s;
}

int cmd_contract(const std::string& path, const std::string& box_name,
                 bool partition, const std::string& order_vars, bool oracle,
                 bool raw, std::size_t budget, std::ostream& out,
                 std::ostream& err) {
  Tolerance tol = env_tolerance();
  io::GraphFile file = io::load_graph(path);

  ContractionOptions opts;
  opts.entry_budget = budget;
  if (!order_vars.empty()) {
    std::vector<VariableId> order;
    for (std::size_t v : parse_index_list(order_vars)) {
      order.push_back(static_cast<VariableId>(v));
    }
    opts.elimination_order = std::move(order);
  }

  BoxRegion box = whole_graph(file.graph);
  if (!box_name.empty()) {
    auto it = file.boxes.find(box_name);
    if (it == file.boxes.end()) {
      throw ArgumentError("no box named '" + box_name + "' in " + path);
    }
    box.factors = it->second;
  }

  if (partition) {
    Complex z = partition_sum(file.graph, opts);
    if (oracle) {
      ComplexTensor ext = brute_force_exterior(file.graph, whole_graph(file.graph));
      std::vector<std::size_t> all(ext.rank());
      for (std::size_t k = 0; k < ext.rank(); ++k) all[k] = k;
      Complex zb = sum_out(ext, all).scalar_value();
      if (std::abs(z - zb) > tol.abs_eps * std::max(1.0, std::abs(zb))) {
        err << "oracle mismatch: contraction " << io::format_complex(z)
            << " vs enumeration " << io::format_complex(zb) << "\n";
        return 4;
      }
    }
    out << io::format_complex(z, raw) << "\n";
    return 0;
  }

  ComplexTensor ext = exterior_function(file.graph, box, opts);
  if (oracle) {
    ComplexTensor ref = brute_force_exterior(file.graph, box);
    double diff = max_abs_diff(ext, ref);
    if (diff > tol.abs_eps * std::max(1.0, max_norm(ref))) {
      err << "oracle mismatch: max deviation " << diff << "\n";
      return 4;
    }
  }
  print_tensor(out, ext, boundary_variables(file.graph, box), raw);
  return 0;
}

int cmd_joint(const std::string& path, const std::string& condition,
              bool as_json, bool raw, std::ostream& out) {
  Tolerance tol = env_tolerance();
  quantum::QuantumTimeline t = io::load_timeline(path);

  if (!condition.empty()) {
    std::vector<std::size_t> prefix = parse_index_list(condition);
    std::vector<double> p = quantum::conditional_next(t, prefix, tol);
    if (as_json) {
      io::Json j;
      j["condition"] = prefix;
      j["values"] = p;
      out << j.dump() << "\n";
      return 0;
    }
    double total = 0.0;
    for (std::size_t y = 0; y < p.size(); ++y) {
      out << y << " " << io::format_double(p[y], raw) << "\n";
      total += p[y];
    }
    out << "total " << io::format_double(total, raw) << "\n";
    return 0;
  }

  quantum::ProbabilityTable table = quantum::joint_distribution(t, tol);
  if (as_json) {
    io::Json j;
    j["shape"] = table.shape;
    j["values"] = table.values;
    j["total"] = table.total;
    out << j.dump() << "\n";
    return 0;
  }
  if (table.shape.empty()) {
    out << io::format_double(table.total, raw) << "\n";
    return 0;
  }
  std::size_t i = 0;
  for (IndexIterator it(table.shape); !it.done(); it.advance(), ++i) {
    for (std::size_t y : it.index()) out << y << " ";
    out << io::format_double(table.values[i], raw) << "\n";
  }
  out << "total " << io::format_double(table.total, raw) << "\n";
  return 0;
}

int cmd_qec_rep3(const ComplexTensor& error_matrix, std::size_t location,
                 bool as_json, std::ostream& out) {
  qec::ErrorSpec err_spec = qec::ErrorSpec::from_matrix(location, error_matrix);
  qec::SyndromeTable table = qec::rep3_syndrome_table(err_spec);
  if (as_json) {
    io::Json j = io::Json::array();
    for (int y2 = 0; y2 < 2; ++y2) {
      for (int y1 = 0; y1 < 2; ++y1) {
        io::Json cell;
        cell["y2"] = y2;
        cell["y1"] = y1;
        cell["channel"] = io::tensor_to_json(table.channel(y2, y1));
        cell["pauli"] = io::pauli_string(table.channel(y2, y1));
        j.push_back(std::move(cell));
      }
    }
    out << j.dump() << "\n";
    return 0;
  }
  for (int y2 = 0; y2 < 2; ++y2) {
    for (int y1 = 0; y1 < 2; ++y1) {
      const ComplexTensor& c = table.channel(y2, y1);
      out << "y2=" << y2 << " y1=" << y1 << ": ";
      if (frobenius_norm(c) <= 1e-12 * frobenius_norm(error_matrix)) {
        out << "impossible\n";
      } else {
        out << io::pauli_string(c) << "\n";
      }
    }
  }
  return 0;
}

int cmd_qec_shor(const ComplexTensor& error_matrix, std::size_t location,
                 const std::string& syndrome_bits, bool recover, bool as_json,
                 std::ostream& out) {
  qec::ErrorSpec err_spec = qec::ErrorSpec::from_matrix(location, error_matrix);

  if (!syndrome_bits.empty()) {
    qec::ShorSyndrome s = parse_syndrome(syndrome_bits);
    ComplexTensor channel = qec::shor_effective_channel(err_spec, s);
    if (recover) {
      qec::RecoveryReport report = qec::shor_recover(err_spec, s);
      if (as_json) {
        io::Json j;
        j["correction"] = report.correction;
        j["fidelity"] = report.fidelity;
        j["channel"] = io::tensor_to_json(report.channel);
        out << j.dump() << "\n";
      } else {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.9f", report.fidelity);
        out << "correction s" << report.correction << "\n"
            << "fidelity " << buf << "\n";
      }
      return 0;
    }
    if (as_json) {
      io::Json j;
      j["syndrome"] = syndrome_bits;
      j["channel"] = io::tensor_to_json(channel);
      j["pauli"] = io::pauli_string(channel);
      out << j.dump() << "\n";
    } else {
      out << syndrome_bits << ": " << io::pauli_string(channel) << "\n";
    }
    return 0;
  }

  // No syndrome given: sweep and print the achievable ones.
  io::Json rows = io::Json::array();
  double scale = frobenius_norm(error_matrix);
  for (std::size_t code = 0; code < 256; ++code) {
    qec::ShorSyndrome s{};
    std::string bits;
    for (std::size_t b = 0; b < 8; ++b) {
      s[b] = static_cast<int>((code >> (7 - b)) & 1);
      bits.push_back(static_cast<char>('0' + s[b]));
    }
    ComplexTensor channel = qec::shor_effective_channel(err_spec, s);
    if (frobenius_norm(channel) <= 1e-12 * scale) continue;
    if (as_json) {
      io::Json cell;
      cell["syndrome"] = bits;
      cell["channel"] = io::tensor_to_json(channel);
      cell["pauli"] = io::pauli_string(channel);
      rows.push_back(std::move(cell));
    } else {
      out << bits << ": " << io::pauli_string(channel) << "\n";
    }
  }
  if (as_json) out << rows.dump() << "\n";
  return 0;
}

int cmd_mc(const std::string& path, const std::string& scheme_name,
           std::size_t k, std::uint64_t seed, const std::string& ladder,
           bool augment, std::size_t burn_in, std::size_t thinning,
           std::ostream& out) {
  io::GraphFile file = io::load_graph(path);
  mc::SamplerOptions opts;
  opts.burn_in = burn_in;
  opts.thinning = thinning;

  mc::EstimatorReport report;
  if (!ladder.empty()) {
    std::vector<double> rho_list;
    std::stringstream ss(ladder);
    std::string token;
    while (std::getline(ss, token, ',')) rho_list.push_back(std::stod(token));
    report = mc::anneal_ladder(file.graph, rho_list, k, seed, opts);
  } else {
    mc::Scheme scheme;
    if (scheme_name == "uniform") {
      scheme = mc::Scheme::Uniform;
    } else if (scheme_name == "abs_f") {
      scheme = mc::Scheme::AbsF;
    } else {
      throw ArgumentError("--scheme must be uniform or abs_f");
    }
    mc::SampleSet samples = mc::sample(file.graph, scheme, k, seed, opts);
    if (augment) {
      samples = mc::augment_conjugate(samples, file.graph, file.mirror_pairs);
    }
    report = mc::estimate_Z(samples, file.graph, opts);
  }

  io::Json j;
  j["scheme"] = report.scheme;
  j["K"] = report.sample_count;
  j["seed"] = report.seed;
  j["estimate"] = io::Json::array({report.estimate.real(), report.estimate.imag()});
  j["std_error"] = report.std_error;
  j["conjugate_augmented"] = report.conjugate_augmented;
  out << j.dump() << "\n";
  return 0;
}

int cmd_validate(const std::string& path, std::ostream& out) {
  Tolerance tol = env_tolerance();
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  io::Json j;
  try {
    in >> j;
  } catch (const io::Json::exception& e) {
    throw ParseError(path + std::string(": ") + e.what());
  }

  if (j.contains("steps")) {
    quantum::QuantumTimeline t = io::parse_timeline(j);
    quantum::validate_timeline(t, tol);
    out << "timeline ok: dimension " << t.dimension << ", steps "
        << t.steps.size() << ", measurements " << quantum::count_measurements(t)
        << "\n";
    std::size_t index = 0;
    for (const quantum::Step& s : t.steps) {
      if (const auto* ms = std::get_if<quantum::MeasureStep>(&s)) {
        quantum::MeasurementValidation v =
            quantum::validate_measurement(ms->family, tol);
        out << "measurement " << ++index << ": completeness deviation "
            << io::format_double(v.max_deviation) << "\n";
      }
    }
    return 0;
  }

  io::GraphFile file = io::parse_graph(j);
  out << "graph ok: " << file.graph.num_variables() << " variables, "
      << file.graph.num_factors() << " factors";
  if (!file.boxes.empty()) {
    out << ", boxes:";
    for (const auto& [name, list] : file.boxes) {
      out << " " << name << "(" << list.size() << ")";
    }
  }
  if (!file.mirror_pairs.empty()) {
    out << ", mirror pairs: " << file.mirror_pairs.size();
  }
  out << "\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Complex-valued normal factor graphs with quantum semantics"};
  app.require_subcommand(1);

  // contract
  std::string c_file, c_box, c_order_vars;
  bool c_partition = false, c_oracle = false, c_raw = false;
  std::size_t c_budget = std::size_t(1) << 26;
  CLI::App* contract = app.add_subcommand(
      "contract", "Exterior function or partition sum of a graph file");
  contract->add_option("file", c_file)->required();
  contract->add_option("--box", c_box, "Named box from the file");
  contract->add_flag("--partition-sum", c_partition);
  contract->add_option("--order-vars", c_order_vars,
                       "User elimination order (comma-separated variable ids)");
  contract->add_flag("--oracle", c_oracle,
                     "Cross-check against brute-force enumeration");
  contract->add_flag("--raw", c_raw, "Print binary64 hexfloats");
  contract->add_option("--budget", c_budget, "Intermediate entry budget");

  // joint
  std::string j_file, j_condition;
  bool j_json = false, j_raw = false;
  CLI::App* joint = app.add_subcommand(
      "joint", "Outcome distribution of a timeline file");
  joint->add_option("file", j_file)->required();
  joint->add_option("--condition", j_condition,
                    "Observed prefix outcomes (comma-separated); prints the "
                    "distribution of the next measurement");
  joint->add_flag("--json", j_json);
  joint->add_flag("--raw", j_raw);

  // qec
  std::string q_error, q_matrix, q_syndrome;
  std::size_t q_location = 1;
  bool q_recover = false, q_json = false;
  CLI::App* qec_cmd = app.add_subcommand("qec", "Coding worked examples");
  CLI::App* rep3 = qec_cmd->add_subcommand(
      "rep3", "Length-3 repetition code syndrome table");
  rep3->add_option("--error", q_error, "Pauli coefficients w0,w1,w2,w3");
  rep3->add_option("--matrix", q_matrix, "Row-major 2x2 entries");
  rep3->add_option("--location", q_location, "Qubit location (1..3)")
      ->required();
  rep3->add_flag("--json", q_json);
  CLI::App* shor = qec_cmd->add_subcommand("shor", "Shor code channels");
  shor->add_option("--error", q_error, "Pauli coefficients w0,w1,w2,w3");
  shor->add_option("--matrix", q_matrix, "Row-major 2x2 entries");
  shor->add_option("--location", q_location, "Qubit location (1..9)")
      ->required();
  shor->add_option("--syndrome", q_syndrome, "Eight syndrome bits");
  shor->add_flag("--recover", q_recover, "Find and verify the correction");
  shor->add_flag("--json", q_json);
  qec_cmd->require_subcommand(1);

  // mc
  std::string m_file, m_scheme = "uniform", m_ladder;
  std::size_t m_k = 10000, m_burn_in = 1000, m_thinning = 10;
  std::uint64_t m_seed = 1;
  bool m_augment = false;
  CLI::App* mc_cmd = app.add_subcommand(
      "mc", "Monte Carlo partition-sum estimate of a graph file");
  mc_cmd->add_option("file", m_file)->required();
  mc_cmd->add_option("--scheme", m_scheme, "uniform or abs_f");
  mc_cmd->add_option("-K,--samples", m_k, "Samples per estimator stage");
  mc_cmd->add_option("--seed", m_seed);
  mc_cmd->add_option("--ladder", m_ladder,
                     "Annealing exponents, e.g. 0.25,0.5,0.75");
  mc_cmd->add_flag("--augment", m_augment,
                   "Conjugate-pair antithetic augmentation");
  mc_cmd->add_option("--burn-in", m_burn_in);
  mc_cmd->add_option("--thinning", m_thinning);

  // validate
  std::string v_file;
  CLI::App* validate = app.add_subcommand(
      "validate", "Schema and invariant check of a graph or timeline file");
  validate->add_option("file", v_file)->required();

  std::vector<const char*> argv;
  argv.push_back("qfg");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    std::stringstream message;
    int code = app.exit(e, message, message);
    (code == 0 ? out : err) << message.str();
    return code;
  }

  try {
    if (contract->parsed()) {
      return cmd_contract(c_file, c_box, c_partition, c_order_vars, c_oracle,
                          c_raw, c_budget, out, err);
    }
    if (joint->parsed()) return cmd_joint(j_file, j_condition, j_json, j_raw, out);
    if (qec_cmd->parsed()) {
      ComplexTensor error_matrix = parse_error_matrix(q_error, q_matrix);
      if (rep3->parsed()) {
        return cmd_qec_rep3(error_matrix, q_location, q_json, out);
      }
      return cmd_qec_shor(error_matrix, q_location, q_syndrome, q_recover,
                          q_json, out);
    }
    if (mc_cmd->parsed()) {
      return cmd_mc(m_file, m_scheme, m_k, m_seed, m_ladder, m_augment,
                    m_burn_in, m_thinning, out);
    }
    if (validate->parsed()) return cmd_validate(v_file, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const ResourceError& e) {
    err << "resource guard: " << e.what() << "\n";
    return 5;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace qfg::cli
