#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "support/helpers.hpp"
#include "tpp/problem_io.hpp"
#include "tpp/smt.hpp"

using namespace tpp;
using nlohmann::json;
using tpp_tests::solver_available;

namespace {

namespace fs = std::filesystem;

std::string cli_path() {
  const char* p = std::getenv("TPP_CLI");
  REQUIRE(p != nullptr);
  return p;
}

ProcessResult run_cli(std::vector<std::string> args, long timeout_ms = 120000) {
  args.insert(args.begin(), cli_path());
  return run_process(args, timeout_ms);
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("tpp_cli_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string str(const std::string& rel = "") const { return (path / rel).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("gen is deterministic and its output grounds cleanly", "[cli]") {
  TempDir dir;
  for (const char* family : {"pour", "shake", "pack", "bottles", "matchcellar"}) {
    auto r1 = run_cli({"gen", family, "--p", "2", "--q", "4", "--out",
                       dir.str(std::string(family) + "_a")});
    auto r2 = run_cli({"gen", family, "--p", "2", "--q", "4", "--out",
                       dir.str(std::string(family) + "_b")});
    REQUIRE(r1.exit_code == 0);
    REQUIRE(r2.exit_code == 0);
    std::string da = slurp(dir.str(std::string(family) + "_a/domain.pddl"));
    std::string db = slurp(dir.str(std::string(family) + "_b/domain.pddl"));
    CHECK(da == db);
    std::string pa = slurp(dir.str(std::string(family) + "_a/problem.pddl"));
    CHECK(pa == slurp(dir.str(std::string(family) + "_b/problem.pddl")));
    CHECK_NOTHROW(load_problem(da, pa));
  }
}

TEST_CASE("solve emits a run summary with matching plan and bound", "[cli][solver]") {
  if (!solver_available()) FAIL("no SMT solver available (set TPP_SMT_SOLVER)");
  TempDir dir;
  REQUIRE(run_cli({"gen", "pour", "--p", "1", "--q", "2", "--litres", "3", "--out",
                   dir.str("inst")})
              .exit_code == 0);
  auto r = run_cli({"solve", dir.str("inst/domain.pddl"), dir.str("inst/problem.pddl"),
                    "--solver", default_solver_command(), "--plan", dir.str("plan.txt"),
                    "--report", dir.str("report.json")});
  REQUIRE(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j["status"] == "solved");
  CHECK(j["bound"] == 1);
  CHECK(j["solver_calls"] == j["bound"]);
  CHECK(j["variables"].get<long>() > 0);
  CHECK(j["assertions"].get<long>() > 0);
  CHECK(fs::exists(dir.str("plan.txt")));
  json file_report = json::parse(slurp(dir.str("report.json")));
  CHECK(file_report["bound"] == 1);
  // the emitted plan file validates through the validate subcommand
  auto v = run_cli({"validate", dir.str("inst/domain.pddl"), dir.str("inst/problem.pddl"),
                    dir.str("plan.txt")});
  CHECK(v.exit_code == 0);
  CHECK(v.out.find("plan valid") != std::string::npos);
}

TEST_CASE("validate exits 1 on violations and 2 on parse errors", "[cli]") {
  TempDir dir;
  REQUIRE(run_cli({"gen", "pour", "--p", "1", "--q", "2", "--litres", "2", "--out",
                   dir.str("inst")})
              .exit_code == 0);
  {
    std::ofstream bad(dir.str("bad_plan.txt"));
    bad << "0.001: (pour b1 b2) [1]\n";  // pouring from a capped bottle
  }
  auto r = run_cli({"validate", dir.str("inst/domain.pddl"), dir.str("inst/problem.pddl"),
                    dir.str("bad_plan.txt"), "--report-json", "-"});
  CHECK(r.exit_code == 1);
  json j = json::parse(r.out);
  CHECK(j["valid"] == false);
  CHECK(!j["violations"].empty());
  {
    std::ofstream garbled(dir.str("garbled.txt"));
    garbled << "this is not a plan\n";
  }
  auto r2 = run_cli({"validate", dir.str("inst/domain.pddl"),
                     dir.str("inst/problem.pddl"), dir.str("garbled.txt")});
  CHECK(r2.exit_code == 2);
}

TEST_CASE("analyze dumps mutexes, rolling eligibility and the pattern", "[cli]") {
  TempDir dir;
  REQUIRE(run_cli({"gen", "pour", "--p", "1", "--q", "2", "--out", dir.str("inst")})
              .exit_code == 0);
  auto r = run_cli({"analyze", dir.str("inst/domain.pddl"), dir.str("inst/problem.pddl"),
                    "--show-pattern", "--pattern", "starts-ends"});
  REQUIRE(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j["rolling_eligible"]["pour b1 b2"] == true);
  CHECK(j["rolling_eligible"]["open b1"] == false);
  CHECK(j["epsilon_b"]["open b1"] == "0.001");
  CHECK(j["epsilon_b"]["pour b1 b2"] == "0");
  CHECK(j["mutex_matrix"].size() == j["snap_actions"].size());
  CHECK(j["pattern"].size() == 6);
  // canonical problem dump round-trips through the library reader
  auto d = run_cli({"analyze", dir.str("inst/domain.pddl"), dir.str("inst/problem.pddl"),
                    "--dump-problem"});
  REQUIRE(d.exit_code == 0);
  CHECK_NOTHROW(read_problem_dump(d.out));
}

TEST_CASE("usage errors exit 64, missing solver exits 69", "[cli]") {
  auto r = run_cli({"solve"});
  CHECK(r.exit_code == 64);
  auto r2 = run_cli({"frobnicate"});
  CHECK(r2.exit_code == 64);
  TempDir dir;
  REQUIRE(run_cli({"gen", "pour", "--out", dir.str("inst")}).exit_code == 0);
  auto r3 = run_cli({"solve", dir.str("inst/domain.pddl"), dir.str("inst/problem.pddl"),
                     "--solver", "definitely-not-an-smt-solver-xyz"});
  CHECK(r3.exit_code == 69);
  // input errors exit 2
  auto r4 = run_cli({"solve", "/nonexistent.pddl", "/nonexistent2.pddl"});
  CHECK(r4.exit_code == 2);
}

TEST_CASE("config files mirror command-line flags", "[cli]") {
  TempDir dir;
  REQUIRE(run_cli({"gen", "pour", "--out", dir.str("inst")}).exit_code == 0);
  {
    std::ofstream cfg(dir.str("tpp.cfg"));
    cfg << "[analyze]\npattern=starts-ends\nshow-pattern=true\n";
  }
  auto r = run_cli({"--config", dir.str("tpp.cfg"), "analyze", dir.str("inst/domain.pddl"),
                    dir.str("inst/problem.pddl")});
  REQUIRE(r.exit_code == 0);
  json j = json::parse(r.out);
  REQUIRE(j.contains("pattern"));
  CHECK(j["pattern"][0]["action"] == "open b1");
}

TEST_CASE("batch solves a directory and aggregates", "[cli][solver]") {
  if (!solver_available()) FAIL("no SMT solver available (set TPP_SMT_SOLVER)");
  TempDir dir;
  fs::create_directories(dir.str("corpus"));
  REQUIRE(run_cli({"gen", "pour", "--p", "1", "--q", "2", "--litres", "2", "--out",
                   dir.str("corpus/a")})
              .exit_code == 0);
  REQUIRE(run_cli({"gen", "shake", "--q", "1", "--litres", "1", "--out",
                   dir.str("corpus/b")})
              .exit_code == 0);
  auto r = run_cli({"batch", dir.str("corpus"), "--solver", default_solver_command()});
  REQUIRE(r.exit_code == 0);
  std::istringstream lines(r.out);
  std::string line;
  int instance_lines = 0;
  bool aggregate_seen = false;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    if (j.contains("aggregate")) {
      aggregate_seen = true;
      CHECK(j["aggregate"]["coverage"] == 100.0);
      CHECK(j["aggregate"]["instances"] == 2);
    } else {
      ++instance_lines;
      CHECK(j["status"] == "solved");
      CHECK(j["solver_calls"] == j["bound"]);
    }
  }
  CHECK(instance_lines == 2);
  CHECK(aggregate_seen);
}
