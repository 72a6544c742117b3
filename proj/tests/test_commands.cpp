#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cavitygate/commands.hpp"

using namespace cavitygate;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "cavitygate");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("cavitygate_test_" + name);
  std::ofstream(path) << text;
  return path.string();
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

const std::string kDevice = CAVITYGATE_DATA_DIR "/squid_cavity_device.yaml";

}  // namespace

TEST_SUITE("commands") {

TEST_CASE("state description") {
  const HilbertLayout layout(2, 1);
  CVectorXd v = CVectorXd::Zero(layout.dimension());
  v[layout.index_of(std::vector<int>{0, 1}, 1)] = Complex<double>(0, -1);
  CHECK(describe_state(StateVector<double>(layout, v)) == "-i|01>|1>_c");
  v[layout.index_of(std::vector<int>{2, 0}, 0)] = -1;
  CHECK(describe_state(StateVector<double>(layout, v)) == "-i|01>|1>_c - |20>|0>_c");
  CHECK(describe_state(StateVector<double>(layout, CVectorXd::Zero(layout.dimension()))) == "0");
}

TEST_CASE("verify controlled-NOT") {
  const auto r = cli({"verify", "--n", "2", "--alpha", "0.5", "--beta", "0", "--gamma", "1", "--delta", "1"});
  CHECK(r.code == kExitPass);
  CHECK(r.out.find("  steps: 15\n") != std::string::npos);
  CHECK(r.out.find("  status: pass\n") != std::string::npos);
  CHECK(r.out.find("    |11>|0>_c: ") != std::string::npos);
}

TEST_CASE("verify is deterministic and echoes the seed") {
  const auto path = temp_file("seeded.yaml", "n: 3\ngate: {alpha: 0.25, beta: 1, gamma: 3, delta: -1}\nseed: run-7\n");
  const auto a = cli({"verify", "--config", path});
  const auto b = cli({"verify", "--config", path});
  CHECK(a.code == kExitPass);
  CHECK(a.out == b.out);
  CHECK(a.out.find("  seed: run-7\n") != std::string::npos);
}

TEST_CASE("verify with the oracle propagator") {
  const auto path = temp_file("oracle.yaml", "n: 2\ngate: {alpha: -0.7, beta: 1.5, gamma: 2.5, delta: 0.3}\n"
                                             "propagator: oracle\n");
  const auto r = cli({"verify", "--config", path});
  CHECK(r.code == kExitPass);
  CHECK(r.out.find("propagator: oracle") != std::string::npos);
}

TEST_CASE("verification failure and usage errors have distinct codes") {
  CHECK(cli({"verify", "--gamma", "1", "--tolerance", "1e-30"}).code == kExitFail);
  const auto bad = temp_file("bad.yaml", "n: 2\ngate:\n  alpha: 0.5\n  gama: 1\n");
  const auto r = cli({"verify", "--config", bad});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find(":4: gate.gama: unknown field") != std::string::npos);
  CHECK(cli({"verify", "--alpha", "3"}).code == kExitUsage);
  CHECK(cli({"verify", "--mode", "qutrit"}).code == kExitUsage);
  CHECK(cli({"verify", "--n", "two"}).code == kExitUsage);
  CHECK(cli({"frobnicate"}).code == kExitUsage);
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"--help"}).code == kExitPass);
}

TEST_CASE("trace table for three qubits") {
  const auto r = cli({"verify", "--n", "3", "--gamma", "1", "--trace"});
  CHECK(r.code == kExitPass);
  CHECK(r.out.find("  groups: U_1 U_1c U_2c U_3c U_2c+ U_1c+ U_1+\n") != std::string::npos);
  CHECK(r.out.find("  state |100>|0>_c:\n    initial: |100>|0>_c\n    U_1: |200>|0>_c\n"
                   "    U_1c: -i|000>|1>_c\n    U_2c: -|020>|0>_c\n") != std::string::npos);
  CHECK(r.out.find("  state |110>|0>_c:\n    initial: |110>|0>_c\n    U_1: |210>|0>_c\n"
                   "    U_1c: -i|010>|1>_c\n    U_2c: -i|010>|1>_c\n") != std::string::npos);
  const auto t = cli({"trace", "--n", "3", "--gamma", "1"});
  CHECK(t.code == kExitPass);
  // Ry(pi) sends |1> to -|0>.
  CHECK(t.out.find("    U_3c: i|010>|1>_c\n") != std::string::npos);
}

TEST_CASE("timing") {
  const auto zero = temp_file("zero.yaml", "n: 2\n");
  auto r = cli({"timing", "--config", zero, "--device", kDevice});
  REQUIRE(r.code == kExitPass);
  auto value = [&](const std::string& key) {
    const auto pos = r.out.find("  " + key + ": ");
    REQUIRE(pos != std::string::npos);
    return std::stod(r.out.substr(pos + key.size() + 4));
  };
  CHECK(value("total") == doctest::Approx(4 * value("tau_c1")).epsilon(1e-4));
  CHECK(value("gamma2_inv_us") == doctest::Approx(3.2));
  CHECK(value("kappa_inv_us") == doctest::Approx(0.8377).epsilon(1e-3));
  CHECK(r.out.find("  status: negligible\n") != std::string::npos);

  r = cli({"timing", "--n", "2"});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("device") != std::string::npos);

  const auto partial = temp_file("partial_device.yaml", "squid:\n  C: 135 fF\ncavity:\n  Q: 6e4\n");
  r = cli({"timing", "--device", partial});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("squid.L") != std::string::npos);
  CHECK(r.err.find("cavity.nu_c") != std::string::npos);

  r = cli({"timing", "--device", kDevice, "--csv"});
  CHECK(r.out.rfind("term,seconds\n", 0) == 0);
}

TEST_CASE("counts") {
  auto r = cli({"counts", "--n-min", "3", "--n-max", "6"});
  CHECK(r.code == kExitPass);
  const auto rows = csv_rows(r.out);
  CHECK(rows.size() == 5);
  CHECK(r.out.find("# crossover n=5\n") != std::string::npos);
  r = cli({"counts", "--n-min", "5", "--n-max", "5"});
  CHECK(r.out == "n,this_work,barenco,bergholm\n5,21,29,32\n# crossover n=5\n");
  r = cli({"counts", "--n-min", "2", "--n-max", "6"});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("n >= 3") != std::string::npos);
}

TEST_CASE("sweeps") {
  auto r = cli({"sweep", "--param", "gamma", "--from", "0", "--to", "4", "--points", "8"});
  REQUIRE(r.code == kExitPass);
  auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 9);
  CHECK(rows[0] == std::vector<std::string>{"index", "gamma", "fidelity", "max_error", "leakage", "tau_ns"});
  for (std::size_t k = 1; k < rows.size(); ++k) {
    CHECK(std::stoi(rows[k][0]) == static_cast<int>(k - 1));
    CHECK(std::abs(std::stod(rows[k][2]) - 1) < 1e-9);
  }

  r = cli({"sweep", "--param", "fock_cutoff", "--from", "1", "--to", "3", "--points", "3", "--gamma", "2.2",
           "--alpha", "0.3"});
  rows = csv_rows(r.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[1][2] == rows[2][2]);
  CHECK(rows[2][2] == rows[3][2]);

  r = cli({"sweep", "--param", "coupling_error", "--from", "0", "--to", "0.1", "--points", "3", "--gamma", "1"});
  rows = csv_rows(r.out);
  REQUIRE(rows.size() == 4);
  CHECK(std::stod(rows[1][2]) > std::stod(rows[3][2]));

  r = cli({"sweep", "--param", "n", "--from", "2", "--to", "4", "--points", "3", "--gamma", "1"});
  rows = csv_rows(r.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[3][1] == "4");

  r = cli({"sweep", "--param", "g", "--from", "4e9", "--to", "6e9", "--points", "2"});
  CHECK(csv_rows(r.out).size() == 3);

  r = cli({"sweep", "--param", "gamma", "--points", "0"});
  CHECK(r.code == kExitPass);
  CHECK(r.out == "index,gamma,fidelity,max_error,leakage,tau_ns\n");

  r = cli({"sweep", "--param", "temperature", "--points", "2"});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("temperature") != std::string::npos);

  const auto a = sweep_csv(RunConfig{}, {"beta", -1, 1, 5});
  CHECK(a == sweep_csv(RunConfig{}, {"beta", -1, 1, 5}));
}

TEST_CASE("report to file") {
  const auto path = (std::filesystem::temp_directory_path() / "cavitygate_test_counts.csv").string();
  std::filesystem::remove(path);
  CHECK(cli({"counts", "--out", path}).out.empty());
  std::ifstream in(path);
  std::string first;
  std::getline(in, first);
  CHECK(first == "n,this_work,barenco,bergholm");
}

}
