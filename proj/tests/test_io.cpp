#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "../tools/cli.hpp"
#include "qfg/gates.hpp"
#include "qfg/io.hpp"
#include "qfg/quantum.hpp"
#include "test_util.hpp"

using namespace qfg;
using testutil::Rng;

namespace {

std::filesystem::path write_temp(const std::string& name,
                                 const std::string& body) {
  std::filesystem::path path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << body;
  return path;
}

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = qfg::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

const char* kChainGraph = R"({
  "version": 1,
  "variables": [{"id":0,"size":2},{"id":1,"size":2},{"id":2,"size":2}],
  "factors": [
    {"vars":[0,1],"shape":[2,2],"data":[[1,0],[0,0],[0,0],[2,0]]},
    {"vars":[1,2],"gate":"hadamard"}
  ],
  "boxes": {"left":[0]}
})";

}  // namespace

TEST_CASE("graph files round-trip") {
  Rng rng(121);
  io::GraphFile file;
  VariableId a = file.graph.add_variable(2);
  VariableId b = file.graph.add_variable(3);
  VariableId c = file.graph.add_variable(2);
  file.graph.add_factor(testutil::random_tensor(rng, {2, 3}), {a, b});
  file.graph.add_factor(testutil::random_tensor(rng, {3, 2}), {b, c});
  file.boxes["pair"] = {0, 1};
  file.mirror_pairs = {{a, c}};

  io::Json j = io::graph_to_json(file);
  io::GraphFile back = io::parse_graph(j);
  REQUIRE(back.graph.num_variables() == 3);
  REQUIRE(back.graph.num_factors() == 2);
  for (FactorId f = 0; f < 2; ++f) {
    CHECK(max_abs_diff(back.graph.factor(f).tensor,
                       file.graph.factor(f).tensor) == 0.0);
    CHECK(back.graph.factor(f).vars == file.graph.factor(f).vars);
  }
  CHECK(back.boxes == file.boxes);
  CHECK(back.mirror_pairs == file.mirror_pairs);
  // Serializing again yields the identical document.
  CHECK(io::graph_to_json(back) == j);
}

TEST_CASE("timeline files round-trip through the general form") {
  Rng rng(122);
  quantum::QuantumTimeline t;
  t.dimension = 3;
  t.initial = quantum::ClassicalPrior{{0.2, 0.3, 0.5}};
  t.steps.push_back(quantum::UnitaryStep{testutil::random_unitary(rng, 3)});
  t.steps.push_back(quantum::MeasureStep{
      quantum::projection_family(testutil::random_unitary(rng, 3)), 1});

  io::Json j = io::timeline_to_json(t);
  quantum::QuantumTimeline back = io::parse_timeline(j);
  CHECK(back.dimension == 3);
  quantum::ProbabilityTable p1 = quantum::joint_distribution(t);
  quantum::ProbabilityTable p2 = quantum::joint_distribution(back);
  REQUIRE(p1.values.size() == p2.values.size());
  for (std::size_t i = 0; i < p1.values.size(); ++i) {
    CHECK(p1.values[i] == doctest::Approx(p2.values[i]).epsilon(1e-12));
  }
  CHECK(io::timeline_to_json(back) == j);
}

TEST_CASE("gate factors resolve by name") {
  io::GraphFile file = io::parse_graph(io::Json::parse(kChainGraph));
  CHECK(max_abs_diff(file.graph.factor(1).tensor, gates::hadamard()) == 0.0);
}

TEST_CASE("parse errors carry locations") {
  io::Json j = io::Json::parse(kChainGraph);
  j["factors"][0]["data"] = io::Json::array({io::Json::array({1.0, 0.0})});
  CHECK_THROWS_WITH_AS(io::parse_graph(j),
                       doctest::Contains("graph.factors[0].data"), ParseError);

  io::Json bad_version = io::Json::parse(kChainGraph);
  bad_version["version"] = 2;
  CHECK_THROWS_AS(io::parse_graph(bad_version), ParseError);
}

TEST_CASE("complex token parsing") {
  CHECK(io::parse_complex_token("1") == Complex(1, 0));
  CHECK(io::parse_complex_token("-2.5") == Complex(-2.5, 0));
  CHECK(io::parse_complex_token("i") == Complex(0, 1));
  CHECK(io::parse_complex_token("-i") == Complex(0, -1));
  CHECK(io::parse_complex_token("0.8i") == Complex(0, 0.8));
  CHECK(io::parse_complex_token("1+2i") == Complex(1, 2));
  CHECK(io::parse_complex_token("0.6-0.8i") == Complex(0.6, -0.8));
  CHECK(io::parse_complex_token("1e-3") == Complex(1e-3, 0));
  CHECK_THROWS_AS(io::parse_complex_token("abc"), ParseError);

  std::vector<Complex> list = io::parse_complex_list("0,1,0,0.5i");
  REQUIRE(list.size() == 4);
  CHECK(list[3] == Complex(0, 0.5));
}

TEST_CASE("pauli_string rendering") {
  CHECK(io::pauli_string(gates::pauli(1)) == "(1 0i)*s1");
  CHECK(io::pauli_string(ComplexTensor::zeros({2, 2})) == "0");
}

TEST_CASE("cli: contract with box and oracle") {
  std::filesystem::path path = write_temp("qfg_chain.json", kChainGraph);
  CliResult r = run_cli({"contract", path.string(), "--box", "left", "--oracle"});
  CHECK(r.code == 0);
  CHECK(r.out.find("# axes: 0 1") == 0);

  CliResult ps = run_cli({"contract", path.string(), "--partition-sum"});
  CHECK(ps.code == 0);
  // Sum over the hadamard chain: sum_xy f(x,y) sum_z H(y,z).
  // f diag (1,2); H row sums are (sqrt2, 0).
  std::istringstream in(ps.out);
  double re = 0, im = 0;
  in >> re >> im;
  // Printed with 12 significant digits.
  CHECK(re == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  CHECK(im == 0.0);
}

TEST_CASE("cli: corrupted files exit 2 with diagnostics") {
  std::filesystem::path path = write_temp("qfg_bad.json", R"({
    "version": 1,
    "variables": [{"id":0,"size":2}],
    "factors": [{"vars":[0],"shape":[2],"data":[[1,0]]}]
  })");
  CliResult r = run_cli({"contract", path.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("factors[0].data") != std::string::npos);

  std::filesystem::path garbage = write_temp("qfg_garbage.json", "{nope");
  CHECK(run_cli({"validate", garbage.string()}).code == 2);
}

TEST_CASE("cli: semantic errors exit 3") {
  // A variable attached three times violates normality.
  std::filesystem::path path = write_temp("qfg_norm.json", R"({
    "version": 1,
    "variables": [{"id":0,"size":2}],
    "factors": [
      {"vars":[0],"shape":[2],"data":[[1,0],[1,0]]},
      {"vars":[0],"shape":[2],"data":[[1,0],[1,0]]},
      {"vars":[0],"shape":[2],"data":[[1,0],[1,0]]}
    ]
  })");
  CliResult r = run_cli({"contract", path.string()});
  CHECK(r.code == 3);
}

TEST_CASE("cli: resource guard exits 5") {
  std::filesystem::path path = write_temp("qfg_chain2.json", kChainGraph);
  CliResult r = run_cli({"contract", path.string(), "--budget", "1"});
  CHECK(r.code == 5);
}

TEST_CASE("cli: joint outputs a table with totals") {
  quantum::QuantumTimeline t;
  t.dimension = 2;
  t.initial = quantum::ClassicalPrior{{0.5, 0.5}};
  t.steps.push_back(quantum::MeasureStep{
      quantum::projection_family(ComplexTensor::identity(2)), std::nullopt});
  t.steps.push_back(quantum::MeasureStep{
      quantum::projection_family(ComplexTensor::identity(2)), std::nullopt});
  std::filesystem::path path =
      write_temp("qfg_two_ideal.json", io::timeline_to_json(t).dump());

  CliResult r = run_cli({"joint", path.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("0 0 0.5") != std::string::npos);
  CHECK(r.out.find("total 1") != std::string::npos);

  CliResult cond = run_cli({"joint", path.string(), "--condition", "1"});
  CHECK(cond.code == 0);
  CHECK(cond.out.find("1 1") != std::string::npos);  // repeats outcome 1

  CliResult js = run_cli({"joint", path.string(), "--json"});
  CHECK(js.code == 0);
  io::Json parsed = io::Json::parse(js.out);
  CHECK(parsed["total"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("cli: mc reports are byte-identical across reruns") {
  std::filesystem::path path = write_temp("qfg_toy31.json", R"({
    "version": 1,
    "variables": [{"id":0,"size":2}],
    "factors": [{"vars":[0],"shape":[2],"data":[[3,0],[1,0]]}]
  })");
  CliResult a = run_cli({"mc", path.string(), "--scheme", "uniform", "-K",
                         "5000", "--seed", "11"});
  CliResult b = run_cli({"mc", path.string(), "--scheme", "uniform", "-K",
                         "5000", "--seed", "11"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  io::Json j = io::Json::parse(a.out);
  double est = j["estimate"][0].get<double>();
  double se = j["std_error"].get<double>();
  CHECK(std::abs(est - 4.0) < 3.0 * se);

  CliResult ladder = run_cli({"mc", path.string(), "--ladder", "0.5", "-K",
                              "5000", "--seed", "12"});
  CHECK(ladder.code == 0);
  io::Json lj = io::Json::parse(ladder.out);
  CHECK(std::abs(lj["estimate"][0].get<double>() - 4.0) <
        3.0 * lj["std_error"].get<double>() + 1e-9);
}

TEST_CASE("cli: qec rep3 prints the sigma_1 cell") {
  CliResult r = run_cli(
      {"qec", "rep3", "--error", "0,1,0,0", "--location", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("y2=1 y1=1: (1 0i)*s1") != std::string::npos);
  CHECK(r.out.find("y2=0 y1=0: impossible") != std::string::npos);

  // Matrix-form input is accepted too.
  CliResult m = run_cli(
      {"qec", "rep3", "--matrix", "0,1,1,0", "--location", "1"});
  CHECK(m.out == r.out);
}

TEST_CASE("cli: qec shor recovery prints unit fidelity") {
  CliResult sweep = run_cli(
      {"qec", "shor", "--error", "0,1,0,0", "--location", "1"});
  CHECK(sweep.code == 0);
  CHECK(sweep.out.find("11000000") != std::string::npos);

  CliResult rec = run_cli({"qec", "shor", "--error", "0,1,0,0", "--location",
                           "1", "--syndrome", "11000000", "--recover"});
  CHECK(rec.code == 0);
  CHECK(rec.out.find("fidelity 1.000000000") != std::string::npos);
}

TEST_CASE("cli: validate reports timeline measurement deviations") {
  quantum::QuantumTimeline t;
  t.dimension = 2;
  t.initial = quantum::KnownValue{0};
  t.steps.push_back(quantum::MeasureStep{
      quantum::projection_family(gates::hadamard()), std::nullopt});
  std::filesystem::path path =
      write_temp("qfg_validate.json", io::timeline_to_json(t).dump());
  CliResult r = run_cli({"validate", path.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("timeline ok") != std::string::npos);
  CHECK(r.out.find("measurement 1: completeness deviation") != std::string::npos);
}

TEST_CASE("cli: QFG_TOL drives the oracle comparison") {
  // A graph with enough arithmetic that the elimination path and plain
  // enumeration disagree in the last bits; an absurdly small tolerance must
  // turn that into an oracle mismatch (exit 4), the default must not.
  Rng rng(123);
  io::GraphFile file;
  std::vector<VariableId> vs;
  for (int i = 0; i < 6; ++i) vs.push_back(file.graph.add_variable(3));
  for (int i = 0; i + 1 < 6; ++i) {
    file.graph.add_factor(testutil::random_tensor(rng, {3, 3}),
                          {vs[i], vs[i + 1]});
  }
  double dev = max_abs_diff(
      exterior_function(file.graph, whole_graph(file.graph)),
      brute_force_exterior(file.graph, whole_graph(file.graph)));
  REQUIRE(dev > 0.0);  // reassociation noise exists
  REQUIRE(dev < 1e-10);

  std::filesystem::path path =
      write_temp("qfg_oracle.json", io::graph_to_json(file).dump());
  CHECK(run_cli({"contract", path.string(), "--oracle"}).code == 0);

  setenv("QFG_TOL", "1e-300", 1);
  CliResult strict = run_cli({"contract", path.string(), "--oracle"});
  unsetenv("QFG_TOL");
  CHECK(strict.code == 4);
  CHECK(strict.err.find("oracle mismatch") != std::string::npos);
}

TEST_CASE("cli: raw mode emits hexfloats") {
  std::filesystem::path path = write_temp("qfg_toy31b.json", R"({
    "version": 1,
    "variables": [{"id":0,"size":2}],
    "factors": [{"vars":[0],"shape":[2],"data":[[3,0],[1,0]]}]
  })");
  CliResult r = run_cli({"contract", path.string(), "--partition-sum", "--raw"});
  CHECK(r.code == 0);
  CHECK(r.out.find("0x1") != std::string::npos);
}
