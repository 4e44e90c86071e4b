// tpp: temporal numeric planning with pattern SMT encodings.
//
// Subcommands: solve (full pipeline), validate (check a plan file), analyze
// (mutex / rolling / pattern dump), gen (benchmark fixtures), batch (solve a
// directory of instances).

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "tpp/generators.hpp"
#include "tpp/pddl.hpp"
#include "tpp/problem_io.hpp"
#include "tpp/solve.hpp"
#include "tpp/validator.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitNoPlan = 1;
constexpr int kExitInputError = 2;
constexpr int kExitUsage = 64;
constexpr int kExitSolverMissing = 69;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

tpp::Rat parse_rat_arg(const std::string& s, const char* what) {
  auto r = tpp::parse_rat(s);
  if (!r) throw CLI::ValidationError(std::string(what) + ": not a rational: " + s);
  return *r;
}

struct CommonSolveFlags {
  std::string pattern = "arpg";
  uint64_t seed = 0;
  std::string epsilon = "1/1000";
  int max_bound = 10;
  long timeout_ms = 0;
  bool no_rolling = false;
  int parallel_bounds = 1;
  std::string solver = tpp::default_solver_command();
  std::string dump_smt;
  long max_ground = 100000;

  void attach(CLI::App* cmd) {
    cmd->add_option("--pattern", pattern, "pattern ordering heuristic")
        ->check(CLI::IsMember({"arpg", "starts-ends"}))
        ->capture_default_str();
    cmd->add_option("--seed", seed, "tie-breaking seed (0 = stable id order)")
        ->capture_default_str();
    cmd->add_option("--epsilon", epsilon, "mutex separation as a rational")
        ->capture_default_str();
    cmd->add_option("--max-bound", max_bound, "largest pattern repetition to try")
        ->capture_default_str();
    cmd->add_option("--timeout-per-call", timeout_ms, "per solver call, milliseconds")
        ->capture_default_str();
    cmd->add_flag("--no-rolling", no_rolling, "force every occurrence count <= 1");
    cmd->add_option("--parallel-bounds", parallel_bounds,
                    "speculative bounds solved concurrently")
        ->capture_default_str();
    cmd->add_option("--solver", solver, "SMT solver command (script path is appended)")
        ->capture_default_str();
    cmd->add_option("--dump-smt", dump_smt, "write <prefix>.n<k>.smt2 before each call");
    cmd->add_option("--max-ground", max_ground, "grounded action cap")->capture_default_str();
  }

  tpp::SolveOptions to_options() const {
    tpp::SolveOptions o;
    o.pattern.heuristic = pattern == "arpg" ? tpp::PatternHeuristic::Arpg
                                            : tpp::PatternHeuristic::StartsThenEnds;
    o.pattern.seed = seed;
    o.encoding.eps = parse_rat_arg(epsilon, "--epsilon");
    o.encoding.disable_rolling = no_rolling;
    o.max_bound = max_bound;
    o.timeout_ms = timeout_ms;
    o.parallel_bounds = parallel_bounds;
    o.solver_command = solver;
    o.dump_smt_prefix = dump_smt;
    return o;
  }
};

json report_to_json(const std::string& instance, const tpp::RunReport& r) {
  json j;
  j["instance"] = instance;
  j["status"] = r.status;
  j["bound"] = r.bound;
  j["wall_seconds"] = r.wall_seconds;
  j["variables"] = r.variables;
  j["assertions"] = r.assertions;
  j["solver_calls"] = r.solver_calls;
  j["incidents"] = r.incidents;
  return j;
}

int run_solve_one(const std::string& domain_path, const std::string& problem_path,
                  const CommonSolveFlags& flags, const std::string& plan_out,
                  const std::string& report_out) {
  tpp::pddl::GroundOptions gopts;
  gopts.max_actions = flags.max_ground;
  tpp::TemporalNumericProblem problem =
      tpp::load_problem(read_file(domain_path), read_file(problem_path), gopts);
  tpp::SolveResult res = tpp::solve(problem, flags.to_options());
  json j = report_to_json(problem.name, res.report);
  if (res.status == tpp::SolveResult::Solved) {
    std::string text = tpp::plan_to_text(res.plan, problem);
    if (!plan_out.empty()) write_file(plan_out, text);
    j["plan"] = json::array();
    for (const auto& s : res.plan.steps)
      j["plan"].push_back({{"t", tpp::rat_to_string(s.t)},
                           {"action", problem.actions[s.action].id},
                           {"d", tpp::rat_to_string(s.d)}});
  }
  std::cout << j.dump(2) << "\n";
  if (!report_out.empty()) write_file(report_out, j.dump(2) + "\n");
  return res.status == tpp::SolveResult::Solved ? 0 : kExitNoPlan;
}

int run_validate(const std::string& domain_path, const std::string& problem_path,
                 const std::string& plan_path, const std::string& epsilon,
                 const std::string& report_json) {
  tpp::TemporalNumericProblem problem =
      tpp::load_problem(read_file(domain_path), read_file(problem_path));
  tpp::TimedPlan plan = tpp::parse_plan_text(read_file(plan_path), problem);
  tpp::ValidationReport rep =
      tpp::validate(plan, problem, parse_rat_arg(epsilon, "--epsilon"));
  json j;
  j["valid"] = rep.valid;
  j["violations"] = json::array();
  for (const auto& v : rep.violations)
    j["violations"].push_back({{"code", v.code}, {"message", v.message}});
  if (report_json == "-")
    std::cout << j.dump(2) << "\n";
  else if (!report_json.empty())
    write_file(report_json, j.dump(2) + "\n");
  if (report_json != "-") {
    if (rep.valid) {
      std::cout << "plan valid\n";
    } else {
      std::cout << "plan INVALID:\n";
      for (const auto& v : rep.violations)
        std::cout << "  [" << v.code << "] " << v.message << "\n";
    }
  }
  return rep.valid ? 0 : 1;
}

int run_analyze(const std::string& domain_path, const std::string& problem_path,
                const std::string& pattern, uint64_t seed, const std::string& epsilon,
                bool show_pattern, bool dump_problem) {
  tpp::TemporalNumericProblem problem =
      tpp::load_problem(read_file(domain_path), read_file(problem_path));
  if (dump_problem) {
    std::cout << tpp::dump_problem(problem);
    return 0;
  }
  tpp::MutexMatrix mm(problem);
  tpp::Rat eps = parse_rat_arg(epsilon, "--epsilon");
  json j;
  auto snaps = problem.snap_actions();
  json names = json::array();
  for (const auto* s : snaps) names.push_back(s->id);
  j["snap_actions"] = names;
  json matrix = json::array();
  for (const auto* a : snaps) {
    json row = json::array();
    for (const auto* b : snaps) row.push_back(mm(*a, *b));
    matrix.push_back(row);
  }
  j["mutex_matrix"] = matrix;
  json rolling = json::object();
  json epsb = json::object();
  for (const auto& b : problem.actions) {
    rolling[b.id] = tpp::eligible_for_rolling(b);
    epsb[b.id] = tpp::rat_to_string(tpp::epsilon_b(b, mm, eps));
  }
  j["rolling_eligible"] = rolling;
  j["epsilon_b"] = epsb;
  if (show_pattern) {
    tpp::PatternOptions popts;
    popts.heuristic = pattern == "arpg" ? tpp::PatternHeuristic::Arpg
                                        : tpp::PatternHeuristic::StartsThenEnds;
    popts.seed = seed;
    tpp::Pattern pat = tpp::build_base_pattern(problem, popts);
    j["pattern"] = json::parse(pat.dump());
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

int run_gen(tpp::GenSpec spec, const std::string& litres_csv, const std::string& out_dir) {
  if (!litres_csv.empty()) {
    std::istringstream is(litres_csv);
    std::string tok;
    while (std::getline(is, tok, ','))
      spec.litres.push_back(parse_rat_arg(tok, "--litres"));
  }
  tpp::Generated g = tpp::generate_instance(spec);
  fs::path dir = out_dir.empty() ? fs::path(g.name) : fs::path(out_dir);
  write_file((dir / "domain.pddl").string(), g.domain);
  write_file((dir / "problem.pddl").string(), g.problem);
  std::cout << (dir / "domain.pddl").string() << "\n"
            << (dir / "problem.pddl").string() << "\n";
  return 0;
}

int run_batch(const std::string& dir, const CommonSolveFlags& flags, int workers,
              const std::string& report_out) {
  std::vector<fs::path> instances;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_directory()) continue;
    if (fs::exists(entry.path() / "domain.pddl") && fs::exists(entry.path() / "problem.pddl"))
      instances.push_back(entry.path());
  }
  std::sort(instances.begin(), instances.end());
  std::vector<json> lines(instances.size());
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= instances.size()) return;
      json j;
      try {
        tpp::pddl::GroundOptions gopts;
        gopts.max_actions = flags.max_ground;
        tpp::TemporalNumericProblem problem =
            tpp::load_problem(read_file((instances[i] / "domain.pddl").string()),
                              read_file((instances[i] / "problem.pddl").string()), gopts);
        tpp::SolveResult res = tpp::solve(problem, flags.to_options());
        j = report_to_json(instances[i].filename().string(), res.report);
      } catch (const std::exception& e) {
        j["instance"] = instances[i].filename().string();
        j["status"] = "error";
        j["error"] = e.what();
      }
      lines[i] = std::move(j);
    }
  };
  int n_workers = std::max(1, workers);
  std::vector<std::thread> pool;
  for (int w = 0; w < n_workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();

  std::ostringstream out;
  int solved = 0;
  double time_sum = 0, bound_sum = 0;
  for (const auto& j : lines) {
    out << j.dump() << "\n";
    if (j.value("status", "") == "solved") {
      ++solved;
      time_sum += j.value("wall_seconds", 0.0);
      bound_sum += j.value("bound", 0);
    }
  }
  json agg;
  agg["aggregate"] = {
      {"instances", instances.size()},
      {"coverage", instances.empty() ? 0.0 : 100.0 * solved / (double)instances.size()},
      {"avg_time_solved", solved ? time_sum / solved : 0.0},
      {"avg_bound_solved", solved ? bound_sum / solved : 0.0}};
  out << agg.dump() << "\n";
  std::cout << out.str();
  if (!report_out.empty()) write_file(report_out, out.str());
  return solved == (int)instances.size() ? 0 : kExitNoPlan;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"temporal numeric planner via pattern SMT encodings"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value file mirroring all flags");
  app.fallthrough();

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "parse, ground, encode and solve");
  std::string domain_path, problem_path, plan_out, report_out;
  solve_cmd->add_option("domain", domain_path, "domain PDDL file")->required();
  solve_cmd->add_option("problem", problem_path, "problem PDDL file")->required();
  CommonSolveFlags solve_flags;
  solve_flags.attach(solve_cmd);
  solve_cmd->add_option("--plan", plan_out, "write the plan to this file");
  solve_cmd->add_option("--report", report_out, "write the JSON run summary to this file");

  // validate
  auto* val_cmd = app.add_subcommand("validate", "check a plan file against a problem");
  std::string val_domain, val_problem, val_plan, val_eps = "1/1000", val_json;
  val_cmd->add_option("domain", val_domain)->required();
  val_cmd->add_option("problem", val_problem)->required();
  val_cmd->add_option("plan", val_plan)->required();
  val_cmd->add_option("--epsilon", val_eps)->capture_default_str();
  val_cmd->add_option("--report-json", val_json,
                      "write a JSON report here ('-' for stdout)");

  // analyze
  auto* ana_cmd = app.add_subcommand("analyze", "dump mutex matrix and rolling eligibility");
  std::string ana_domain, ana_problem, ana_pattern = "arpg", ana_eps = "1/1000";
  uint64_t ana_seed = 0;
  bool ana_show_pattern = false, ana_dump_problem = false;
  ana_cmd->add_option("domain", ana_domain)->required();
  ana_cmd->add_option("problem", ana_problem)->required();
  ana_cmd->add_option("--pattern", ana_pattern)
      ->check(CLI::IsMember({"arpg", "starts-ends"}))
      ->capture_default_str();
  ana_cmd->add_option("--seed", ana_seed)->capture_default_str();
  ana_cmd->add_option("--epsilon", ana_eps)->capture_default_str();
  ana_cmd->add_flag("--show-pattern", ana_show_pattern, "include the base pattern");
  ana_cmd->add_flag("--dump-problem", ana_dump_problem,
                    "print the canonical grounded problem dump instead");

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "generate a benchmark instance");
  tpp::GenSpec spec;
  std::string litres_csv, gen_out;
  std::string fill = "3", open_dur = "5", pour_dur = "1", shake_dur = "2";
  std::string hold_lo = "1", hold_hi = "10", pack_dur = "2", light_dur = "8", mend_dur = "5";
  gen_cmd->add_option("family", spec.family, "pour | shake | pack | bottles | matchcellar")
      ->required();
  gen_cmd->add_option("--p", spec.p, "source bottles")->capture_default_str();
  gen_cmd->add_option("--q", spec.q, "total bottles")->capture_default_str();
  gen_cmd->add_option("--litres", litres_csv, "per-source litres, comma separated");
  gen_cmd->add_option("--fill", fill, "default litres per source")->capture_default_str();
  gen_cmd->add_option("--open-duration", open_dur)->capture_default_str();
  gen_cmd->add_option("--pour-duration", pour_dur)->capture_default_str();
  gen_cmd->add_option("--shake-duration", shake_dur)->capture_default_str();
  gen_cmd->add_option("--hold-lo", hold_lo)->capture_default_str();
  gen_cmd->add_option("--hold-hi", hold_hi)->capture_default_str();
  gen_cmd->add_option("--pack-duration", pack_dur)->capture_default_str();
  gen_cmd->add_option("--fuses", spec.fuses)->capture_default_str();
  gen_cmd->add_option("--matches", spec.matches)->capture_default_str();
  gen_cmd->add_option("--light-duration", light_dur)->capture_default_str();
  gen_cmd->add_option("--mend-duration", mend_dur)->capture_default_str();
  gen_cmd->add_option("--out", gen_out, "output directory (default: ./<instance-name>)");

  // batch
  auto* batch_cmd = app.add_subcommand("batch", "solve every instance directory under DIR");
  std::string batch_dir, batch_report;
  int batch_workers = 1;
  batch_cmd->add_option("dir", batch_dir, "directory of <name>/{domain,problem}.pddl")
      ->required();
  CommonSolveFlags batch_flags;
  batch_flags.attach(batch_cmd);
  batch_cmd->add_option("--workers", batch_workers, "concurrent instances")
      ->capture_default_str();
  batch_cmd->add_option("--report", batch_report, "write JSON lines here too");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (solve_cmd->parsed())
      return run_solve_one(domain_path, problem_path, solve_flags, plan_out, report_out);
    if (val_cmd->parsed())
      return run_validate(val_domain, val_problem, val_plan, val_eps, val_json);
    if (ana_cmd->parsed())
      return run_analyze(ana_domain, ana_problem, ana_pattern, ana_seed, ana_eps,
                         ana_show_pattern, ana_dump_problem);
    if (gen_cmd->parsed()) {
      spec.fill = parse_rat_arg(fill, "--fill");
      spec.open_dur = parse_rat_arg(open_dur, "--open-duration");
      spec.pour_dur = parse_rat_arg(pour_dur, "--pour-duration");
      spec.shake_dur = parse_rat_arg(shake_dur, "--shake-duration");
      spec.hold_lo = parse_rat_arg(hold_lo, "--hold-lo");
      spec.hold_hi = parse_rat_arg(hold_hi, "--hold-hi");
      spec.pack_dur = parse_rat_arg(pack_dur, "--pack-duration");
      spec.light_dur = parse_rat_arg(light_dur, "--light-duration");
      spec.mend_dur = parse_rat_arg(mend_dur, "--mend-duration");
      return run_gen(spec, litres_csv, gen_out);
    }
    if (batch_cmd->parsed())
      return run_batch(batch_dir, batch_flags, batch_workers, batch_report);
  } catch (const tpp::SolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::string msg = e.what();
    return msg.find("not found") != std::string::npos ? kExitSolverMissing : kExitInputError;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitUsage;
}
