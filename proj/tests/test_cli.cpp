#include <catch2/catch_amalgamated.hpp>

#include <centralab/matrix_io.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

using namespace centralab;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  static int counter = 0;
  const auto dir = std::filesystem::temp_directory_path();
  const auto out_path = dir / ("centralab_cli_out_" + std::to_string(counter) + ".txt");
  const auto err_path = dir / ("centralab_cli_err_" + std::to_string(counter) + ".txt");
  ++counter;

  const std::string cmd = env_prefix + std::string(CENTRALAB_CLI_PATH) + " " + args + " > " +
                          out_path.string() + " 2> " + err_path.string();
  const int raw = std::system(cmd.c_str());

  RunResult result;
  result.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  result.out = slurp(out_path);
  result.err = slurp(err_path);
  std::error_code ec;
  std::filesystem::remove(out_path, ec);
  std::filesystem::remove(err_path, ec);
  return result;
}

std::string data_file(const std::string& name) {
  return (std::filesystem::path(CENTRALAB_DATA_DIR) / name).string();
}

}  // namespace

TEST_CASE("certify subcommand: bicommutant case exits zero") {
  const RunResult r = run_cli("certify --input " + data_file("diag12.json") + " --k 1 --l 1");
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["verdicts"]["is_smiley"].get<bool>());
  CHECK(doc["command"] == "certify");
}

TEST_CASE("certify with an unreachable tolerance exits 2") {
  const RunResult r =
      run_cli("--tol-contain 1e-30 certify --input " + data_file("diag12.json") + " --k 1 --l 1");
  CHECK(r.exit_code == 2);
  const json doc = json::parse(r.out);
  CHECK_FALSE(doc["verdicts"]["is_smiley"].get<bool>());
}

TEST_CASE("double subcommand validates k") {
  const RunResult r = run_cli("double --input " + data_file("diag12.json") + " --k 0 --l 1");
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("k must be >= 1") != std::string::npos);
}

TEST_CASE("double subcommand computes C_k(C_l)") {
  const RunResult r = run_cli("double --input " + data_file("diag12.json") + " --k 1 --l 1");
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["dim"].get<int>() == 2);
  CHECK(doc["dim_cl"].get<int>() == 2);
}

TEST_CASE("centralizer subcommand reports the kernel dimension") {
  const RunResult r = run_cli("centralizer --input " + data_file("jordan2.json") + " --s 2 --emit-basis");
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["dim"].get<int>() == 3);
  CHECK(doc["basis"].size() == 3);

  const RunResult bad = run_cli("centralizer --input " + data_file("jordan2.json") + " --s 0");
  CHECK(bad.exit_code == 1);
  CHECK(bad.err.find("s must be >= 1") != std::string::npos);
}

TEST_CASE("decompose subcommand recovers the shear structure") {
  const RunResult r = run_cli("decompose --input " + data_file("jordan3_shifted.json"));
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["type_m"].get<int>() == 2);
  CHECK(doc["invariants_ok"].get<bool>());
  CHECK(doc["reconstruction_residual"].get<double>() <= 1e-12);
}

TEST_CASE("hulls subcommand reports both hull dimensions") {
  const RunResult r = run_cli("hulls --input " + data_file("jordan2.json"));
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["pol"]["dim"].get<int>() == 2);
  CHECK(doc["vn"]["dim"].get<int>() == 4);
}

TEST_CASE("shift subcommand emits a structure report at n = 3") {
  const RunResult r = run_cli("shift --n 3");
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["n"].get<int>() == 3);
  CHECK(doc["nilpotency_order"].get<int>() == 3);
  CHECK(doc["dim_c1"].get<int>() == 3);
  CHECK(doc["dim_c2"].get<int>() == 5);
  CHECK(doc["matrix"]["re"][1][0].get<double>() == 1.0);
  CHECK_FALSE(doc.contains("structure"));
}

TEST_CASE("shift subcommand with a certificate at n = 6") {
  const RunResult r = run_cli("shift --n 6 --k 2 --l 2");
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["structure"]["interior_ok"].get<bool>());
  CHECK(doc["structure"]["dim_c2"].get<int>() == 11);
  CHECK(doc["diag_progression_ok"].get<bool>());
  CHECK(doc["certificate"]["verdicts"]["is_proper"].get<bool>());
}

TEST_CASE("usage errors exit 1 with help on stderr") {
  CHECK(run_cli("frobnicate --now").exit_code == 1);
  CHECK(run_cli("certify --input missing.json --k 1 --l 1 --bogus-flag").exit_code == 1);
  const RunResult missing = run_cli("certify --input /no/such/file.json --k 1 --l 1");
  CHECK(missing.exit_code == 1);
  CHECK(missing.err.find("not found") != std::string::npos);
}

TEST_CASE("output flag writes the result file") {
  const auto out_path = std::filesystem::temp_directory_path() / "centralab_certify_out.json";
  const RunResult r = run_cli("--output " + out_path.string() + " certify --input " +
                              data_file("jordan2.json") + " --k 2 --l 2");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.empty());
  const json doc = json::parse(slurp(out_path));
  CHECK(doc["verdicts"]["is_proper"].get<bool>());
  std::error_code ec;
  std::filesystem::remove(out_path, ec);
}

TEST_CASE("batch runs are byte-identical across thread counts") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto config_path = dir / "centralab_batch_cfg.json";
  {
    std::ofstream cfg(config_path);
    cfg << R"({"family": "random-generic", "sizes": [2, 3], "kl_grid": [[1,1],[2,2]], "seeds": [3, 4]})";
  }
  const auto report_a = dir / "centralab_report_t1.json";
  const auto report_b = dir / "centralab_report_t8.json";

  const RunResult r1 =
      run_cli("--threads 1 --output " + report_a.string() + " batch --config " + config_path.string());
  REQUIRE(r1.exit_code == 0);
  const RunResult r8 =
      run_cli("--threads 8 --output " + report_b.string() + " batch --config " + config_path.string());
  REQUIRE(r8.exit_code == 0);

  const std::string bytes_a = slurp(report_a);
  const std::string bytes_b = slurp(report_b);
  CHECK(!bytes_a.empty());
  CHECK(bytes_a == bytes_b);

  // Env fallback drives the worker count the same way.
  const RunResult renv = run_cli("--output " + report_b.string() + " batch --config " + config_path.string(),
                                 "CENTRALAB_THREADS=4 ");
  REQUIRE(renv.exit_code == 0);
  CHECK(slurp(report_b) == bytes_a);

  std::error_code ec;
  std::filesystem::remove(config_path, ec);
  std::filesystem::remove(report_a, ec);
  std::filesystem::remove(report_b, ec);
}
