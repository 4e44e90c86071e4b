#include <catch2/catch_amalgamated.hpp>

#include "support/helpers.hpp"
#include "tpp/solve.hpp"

using namespace tpp;
using tpp_tests::action_index;
using tpp_tests::pour_problem;
using tpp_tests::solver_available;

namespace {

SolveOptions test_options() {
  SolveOptions o;
  o.solver_command = default_solver_command();
  o.max_bound = 4;
  return o;
}

// Model with every count zeroed except explicit overrides.
Model zero_model(const EncodingContext& ctx) {
  Model m;
  for (int i = 1; i <= ctx.pattern->size(); ++i) {
    m.values[detail::padded("a", i)] = Rat(0);
    m.values[detail::padded("t", i)] = Rat(0);
    if (ctx.pattern->entry(i).role == SnapRole::Start)
      m.values[detail::padded("d", i)] = Rat(0);
  }
  return m;
}

}  // namespace

TEST_CASE("extraction splits rolled counts into consecutive executions",
          "[solver_loop]") {
  TemporalNumericProblem p = pour_problem(1, 2, {Rat(3)});
  MutexMatrix mm(p);
  Pattern pat = build_base_pattern(p, {PatternHeuristic::StartsThenEnds, 0});
  EncodingContext ctx = make_context(p, pat, mm);
  // pattern: open b1+, open b2+, pour+, open b1-, open b2-, pour-
  Model model = zero_model(ctx);
  model.values["a0001"] = Rat(1);  // one uncap of b1 at eps for 5s
  model.values["t0001"] = Rat(1, 1000);
  model.values["d0001"] = Rat(5);
  model.values["a0003"] = Rat(3);  // pour rolled three times, total 3s
  model.values["t0003"] = Rat(2, 1000);
  model.values["d0003"] = Rat(3);
  TimedPlan plan = extract_plan(model, ctx);
  REQUIRE(plan.steps.size() == 4);
  // single execution keeps its duration
  CHECK(plan.steps[0].t == Rat(1, 1000));
  CHECK(plan.steps[0].d == Rat(5));
  // eps_b(pour) = 0, so d = 3/3 = 1 and starts at t, t+1, t+2
  int pour = action_index(p, "pour b1 b2");
  for (int k = 0; k < 3; ++k) {
    CHECK(plan.steps[k + 1].action == pour);
    CHECK(plan.steps[k + 1].t == Rat(2, 1000) + Rat(k));
    CHECK(plan.steps[k + 1].d == Rat(1));
  }
}

TEST_CASE("extraction rejects non-integral counts and out-of-range durations",
          "[solver_loop]") {
  TemporalNumericProblem p = pour_problem(1, 2, {Rat(3)});
  MutexMatrix mm(p);
  Pattern pat = build_base_pattern(p, {PatternHeuristic::StartsThenEnds, 0});
  EncodingContext ctx = make_context(p, pat, mm);
  Model bad_count = zero_model(ctx);
  bad_count.values["a0001"] = Rat(1, 2);
  CHECK_THROWS_AS(extract_plan(bad_count, ctx), InternalError);
  Model bad_duration = zero_model(ctx);
  bad_duration.values["a0001"] = Rat(1);
  bad_duration.values["t0001"] = Rat(1, 1000);
  bad_duration.values["d0001"] = Rat(9);  // uncap takes exactly 5
  CHECK_THROWS_AS(extract_plan(bad_duration, ctx), InternalError);
}

TEST_CASE("bound loop finds the least bound and reports calls", "[solver_loop][solver]") {
  if (!solver_available()) FAIL("no SMT solver available (set TPP_SMT_SOLVER)");
  TemporalNumericProblem p3 = pour_problem(1, 2, {Rat(3)});
  SolveResult r3 = solve(p3, test_options());
  REQUIRE(r3.status == SolveResult::Solved);
  CHECK(r3.report.bound == 1);
  CHECK(r3.report.solver_calls == 1);
  CHECK(validate(r3.plan, p3, Rat(1, 1000)).valid);
  TemporalNumericProblem p5 = pour_problem(1, 2, {Rat(5)});
  SolveResult r5 = solve(p5, test_options());
  REQUIRE(r5.status == SolveResult::Solved);
  CHECK(r5.report.bound == 2);
  CHECK(r5.report.solver_calls == 2);
}

TEST_CASE("unreachable goals exhaust the bound schedule", "[solver_loop][solver]") {
  if (!solver_available()) FAIL("no SMT solver available (set TPP_SMT_SOLVER)");
  GenSpec spec;
  spec.family = "pour";
  spec.litres = {Rat(3)};
  Generated g = generate_instance(spec);
  // demand a negative level: pouring only moves litres, guarded at > 0
  std::string prob = g.problem;
  auto at = prob.find("(= (litres b1) 0)");
  REQUIRE(at != std::string::npos);
  prob.replace(at, std::string("(= (litres b1) 0)").size(), "(= (litres b1) -1)");
  TemporalNumericProblem p = load_problem(g.domain, prob);
  SolveOptions o = test_options();
  o.max_bound = 3;
  SolveResult r = solve(p, o);
  CHECK(r.status == SolveResult::Exhausted);
  CHECK(r.report.status == "exhausted");
  CHECK(r.report.bound == 3);
  CHECK(r.report.solver_calls == 3);
}

TEST_CASE("goals true initially produce the empty plan at bound zero", "[solver_loop]") {
  GenSpec spec;
  spec.family = "pour";
  spec.litres = {Rat(0)};  // already empty
  Generated g = generate_instance(spec);
  TemporalNumericProblem p = load_problem(g.domain, g.problem);
  SolveResult r = solve(p, test_options());  // no solver needed
  REQUIRE(r.status == SolveResult::Solved);
  CHECK(r.plan.steps.empty());
  CHECK(r.report.bound == 0);
  CHECK(r.report.solver_calls == 0);
}

TEST_CASE("statically unreachable goals report infeasible", "[solver_loop]") {
  // goal over a variable no effect assigns, false initially
  auto dom = pddl::parse_domain(
      "(define (domain d) (:requirements :strips) (:predicates (flag) (other))"
      " (:action a :precondition (other) :effect (other)))");
  auto ins = pddl::parse_instance(
      "(define (problem p) (:domain d) (:init) (:goal (flag)))", dom);
  TemporalNumericProblem p = pddl::ground(dom, ins);
  SolveResult r = solve(p, test_options());
  CHECK(r.status == SolveResult::Infeasible);
  CHECK(r.report.status == "infeasible");
}

TEST_CASE("disabling rolling keeps repetition-free problems solvable",
          "[solver_loop][solver]") {
  if (!solver_available()) FAIL("no SMT solver available (set TPP_SMT_SOLVER)");
  TemporalNumericProblem p = pour_problem(1, 2, {Rat(1)});
  SolveOptions o = test_options();
  o.encoding.disable_rolling = true;
  SolveResult r = solve(p, o);
  REQUIRE(r.status == SolveResult::Solved);
  CHECK(r.report.bound == 1);
}

TEST_CASE("speculative parallel bounds prefer the least sat bound",
          "[solver_loop][solver]") {
  if (!solver_available()) FAIL("no SMT solver available (set TPP_SMT_SOLVER)");
  TemporalNumericProblem p = pour_problem(1, 2, {Rat(5)});
  SolveOptions o = test_options();
  o.parallel_bounds = 2;
  SolveResult r = solve(p, o);
  REQUIRE(r.status == SolveResult::Solved);
  CHECK(r.report.bound == 2);
  CHECK(r.report.solver_calls == 2);  // both bounds in the window ran
  CHECK(validate(r.plan, p, Rat(1, 1000)).valid);
}

TEST_CASE("solving is deterministic given a fixed solver", "[solver_loop][solver]") {
  if (!solver_available()) FAIL("no SMT solver available (set TPP_SMT_SOLVER)");
  TemporalNumericProblem p = pour_problem(2, 3, {Rat(2), Rat(1)});
  SolveResult a = solve(p, test_options());
  SolveResult b = solve(p, test_options());
  REQUIRE(a.status == SolveResult::Solved);
  REQUIRE(b.status == SolveResult::Solved);
  CHECK(plan_to_text(a.plan, p) == plan_to_text(b.plan, p));
}
