#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "filab/cli.hpp"

using namespace filab;

namespace {

int run_cli(const std::vector<std::string>& args, std::string* out = nullptr) {
  std::vector<const char*> argv;
  argv.push_back("filab");
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream captured;
  std::streambuf* old = std::cout.rdbuf(captured.rdbuf());
  const int code = cli_dispatch(static_cast<int>(argv.size()), argv.data());
  std::cout.rdbuf(old);
  if (out) *out = captured.str();
  return code;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("solve and audit round trip") {
  CHECK(run_cli({"solve-instance", "--d", "1", "--eps", "1e-3", "--out", "cli_inst.json"}) == 0);
  CHECK(std::filesystem::exists("cli_inst.json"));
  CHECK(run_cli({"audit-instance", "--in", "cli_inst.json", "--pairs", "2000"}) == 0);
  std::filesystem::remove("cli_inst.json");
}

TEST_CASE("bounds subcommand prints values") {
  std::string out;
  CHECK(run_cli({"bounds", "--fano", "--M", "4", "--N", "0"}, &out) == 0);
  CHECK(out == "0.5\n");
  CHECK(run_cli({"bounds", "--embed-dim", "--eps", "1e-9"}, &out) == 0);
  CHECK(run_cli({"bounds", "--holley-stroock", "--cpi", "2", "--log-ratio", "0"}, &out) == 0);
  CHECK(out == "2\n");
}

TEST_CASE("usage and validation failures map to the right exit codes") {
  CHECK(run_cli({"definitely-not-a-subcommand"}) == 64);
  CHECK(run_cli({"bounds", "--fano", "--M", "3", "--N", "0"}) == 1);
  CHECK(run_cli({"solve-instance", "--d", "1", "--eps", "0.5", "--out", "unused.json"}) == 1);
}

TEST_CASE("game runs from a config file and is byte-deterministic") {
  {
    nlohmann::json cfg;
    cfg["schema_version"] = 1;
    cfg["d"] = 1;
    cfg["r"] = 1.0;
    cfg["R"] = 12.0;
    cfg["M"] = 10;
    cfg["strategy"] = "scan";
    cfg["budget"] = 4;
    cfg["trials"] = 200;
    cfg["seed"] = 11;
    std::ofstream out("cli_game_cfg.json");
    out << cfg.dump();
  }
  CHECK(run_cli({"game", "--config", "cli_game_cfg.json", "--out", "cli_game1.csv"}) == 0);
  CHECK(run_cli({"game", "--config", "cli_game_cfg.json", "--out", "cli_game2.csv"}) == 0);
  const std::string a = slurp("cli_game1.csv");
  CHECK(!a.empty());
  CHECK(a == slurp("cli_game2.csv"));
  CHECK(a.substr(0, a.find('\n')) == "trial,omega_index,queries,success,wall_ms");
  CHECK(std::filesystem::exists("cli_game1.csv.sidecar.json"));
  for (const char* f : {"cli_game_cfg.json", "cli_game1.csv", "cli_game2.csv",
                        "cli_game1.csv.sidecar.json", "cli_game2.csv.sidecar.json"}) {
    std::filesystem::remove(f);
  }
}

TEST_CASE("config schema versioning is enforced") {
  {
    std::ofstream out("cli_bad_cfg.json");
    out << "{\"d\": 1}";
  }
  CHECK(run_cli({"game", "--config", "cli_bad_cfg.json", "--out", "cli_bad.csv"}) == 1);
  std::filesystem::remove("cli_bad_cfg.json");
}

TEST_CASE("numeric failures exit with code 2") {
  {
    nlohmann::json cfg;
    cfg["schema_version"] = 1;
    cfg["kind"] = "rejection_accuracy";
    cfg["m0_values"] = {0.5};
    cfg["eps_values"] = {0.3};
    cfg["t_factor"] = 5.0;  // heat-flow floor exceeds the target
    std::ofstream out("cli_numfail_cfg.json");
    out << cfg.dump();
  }
  CHECK(run_cli({"scaling", "--config", "cli_numfail_cfg.json", "--out", "cli_numfail"}) == 2);
  std::filesystem::remove("cli_numfail_cfg.json");
}

TEST_CASE("diagnose writes densities and a report") {
  REQUIRE(run_cli({"solve-instance", "--d", "1", "--R", "8", "--out", "cli_diag_inst.json"}) == 0);
  CHECK(run_cli({"diagnose", "--in", "cli_diag_inst.json", "--grid-n", "4097", "--out",
                 "cli_diag"}) == 0);
  std::ifstream in("cli_diag_report.json");
  REQUIRE(in.good());
  nlohmann::json report;
  in >> report;
  CHECK(std::abs(report["bump_mass"].get<double>() - 0.5) <= 1e-3);
  CHECK(report["Z_omega"].get<double>() <= 2.0 * report["Z_init"].get<double>());
  for (const char* f : {"cli_diag_inst.json", "cli_diag_target.csv", "cli_diag_init.csv",
                        "cli_diag_report.json"}) {
    std::filesystem::remove(f);
  }
}

TEST_CASE("sample subcommand emits one row per draw") {
  REQUIRE(run_cli({"solve-instance", "--d", "1", "--R", "6", "--out", "cli_s_inst.json"}) == 0);
  CHECK(run_cli({"sample", "--in", "cli_s_inst.json", "--strategy", "exact", "--n", "50",
                 "--seed", "9", "--out", "cli_samples.csv"}) == 0);
  const std::string csv = slurp("cli_samples.csv");
  CHECK(static_cast<int>(std::count(csv.begin(), csv.end(), '\n')) == 51);
  CHECK(csv.substr(0, csv.find('\n')) == "trial,queries,accepted,x0");
  std::filesystem::remove("cli_s_inst.json");
  std::filesystem::remove("cli_samples.csv");
}
