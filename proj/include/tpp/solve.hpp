#ifndef TPP_SOLVE_HPP
#define TPP_SOLVE_HPP

#include <chrono>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "tpp/encoding.hpp"
#include "tpp/pattern.hpp"
#include "tpp/plan.hpp"
#include "tpp/smt.hpp"
#include "tpp/validator.hpp"

// Bound-deepening driver: encode the pattern concatenated n times, check,
// extract and validate. bound n equals the number of solver calls.

namespace tpp {

// A planner-side soundness breach (model that does not translate to a valid
// plan). Never retried or silently swallowed.
struct InternalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolveOptions {
  PatternOptions pattern;
  EncodingOptions encoding;
  std::string solver_command = default_solver_command();
  long timeout_ms = 0;  // per solver call, 0 = unlimited
  int max_bound = 10;
  std::string dump_smt_prefix;  // writes <prefix>.n<k>.smt2 per bound when set
  int parallel_bounds = 1;      // speculative bounds solved concurrently
};

struct RunReport {
  std::string status;  // solved | exhausted | infeasible
  int bound = 0;
  double wall_seconds = 0;
  long variables = 0;
  long assertions = 0;
  int solver_calls = 0;
  std::vector<std::string> incidents;  // skipped bounds (unknown), drops, ...
};

struct SolveResult {
  enum Status { Solved, Exhausted, Infeasible } status = Exhausted;
  TimedPlan plan;
  RunReport report;
};

// Model-to-plan extraction: a start occurrence with count m contributes m
// consecutive executions, each of duration d with (d + eps_b) * m = d_i +
// eps_b, starting at t_i + p * (d + eps_b).
inline TimedPlan extract_plan(const Model& model, const EncodingContext& ctx) {
  TimedPlan plan;
  const Pattern& pat = *ctx.pattern;
  for (int i = 1; i <= pat.size(); ++i) {
    const PatternEntry& e = pat.entry(i);
    if (e.role != SnapRole::Start) continue;
    const std::string aname = detail::padded("a", i);
    const Rat& count = model.get_rat(aname);
    if (!is_integral(count) || count < 0)
      throw InternalError("non-integral action count " + aname + " = " +
                          rat_to_string(count));
    long m = (long)numerator(count);
    if (m == 0) continue;
    const DurativeAction& b = ctx.problem->actions[e.action];
    const Rat& eb = ctx.eps_b[e.action];
    Rat ti = model.get_rat(detail::padded("t", i));
    Rat di = model.get_rat(detail::padded("d", i));
    Rat d = (di + eb) / count - eb;
    if (b.instantaneous ? d != 0 : (d < b.dur_lo || d > b.dur_hi))
      throw InternalError("extracted duration " + rat_to_string(d) + " of (" + b.id +
                          ") outside bounds");
    for (long p = 0; p < m; ++p) plan.steps.push_back({ti + Rat(p) * (d + eb), e.action, d});
  }
  plan.sort(*ctx.problem);
  return plan;
}

namespace detail {

// Static infeasibility: a goal over variables no effect ever assigns, false
// in the initial state, can never become true.
inline bool statically_infeasible(const TemporalNumericProblem& p) {
  std::set<VarId> writable;
  for (const auto& b : p.actions)
    for (const SnapAction* s : {&b.start, &b.end})
      for (const auto& e : s->eff) writable.insert(e.var);
  for (const auto& g : p.goals) {
    bool touches_writable = false;
    if (g.kind == Condition::BoolEq) {
      touches_writable = writable.count(g.var) != 0;
    } else {
      for (const auto& [v, c] : g.expr.terms) touches_writable |= writable.count(v) != 0;
    }
    if (!touches_writable && !p.init.satisfies(g)) return true;
  }
  return false;
}

struct BoundAttempt {
  int n;
  SmtResult result;
  std::optional<TimedPlan> plan;
  long variables = 0, assertions = 0;
  std::string error;  // exception text from the worker, if any
};

inline BoundAttempt attempt_bound(const TemporalNumericProblem& p, const Pattern& base,
                                  const MutexMatrix& mm, const SolveOptions& opts, int n) {
  BoundAttempt out;
  out.n = n;
  Pattern pat = concatenate(base, n);
  EncodingContext ctx = make_context(p, pat, mm, opts.encoding);
  Encoding enc = assemble(ctx);
  EmittedScript script = emit_smtlib(*ctx.mgr, enc);
  out.variables = (long)script.decls.size();
  out.assertions = (long)enc.num_assertions();
  SmtOptions sopts;
  sopts.command = opts.solver_command;
  sopts.timeout_ms = opts.timeout_ms;
  if (!opts.dump_smt_prefix.empty())
    sopts.dump_path = opts.dump_smt_prefix + ".n" + std::to_string(n) + ".smt2";
  out.result = check(script, sopts);
  if (out.result.status == SmtResult::Sat) {
    verify_model(*ctx.mgr, enc, out.result.model);
    out.plan = extract_plan(out.result.model, ctx);
  }
  return out;
}

}  // namespace detail

inline SolveResult solve(const TemporalNumericProblem& problem, const SolveOptions& opts = {}) {
  auto t_start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  };
  SolveResult res;
  std::string pattern_desc =
      (opts.pattern.heuristic == PatternHeuristic::Arpg ? "arpg" : "starts-ends");
  if (opts.pattern.seed) pattern_desc += ",seed=" + std::to_string(opts.pattern.seed);

  // Trivial-plan shortcut: the empty plan at bound 0.
  if (problem.goal_holds_initially()) {
    res.status = SolveResult::Solved;
    res.plan.pattern_desc = pattern_desc;
    res.report.status = "solved";
    res.report.wall_seconds = elapsed();
    return res;
  }
  if (detail::statically_infeasible(problem)) {
    res.status = SolveResult::Infeasible;
    res.report.status = "infeasible";
    res.report.wall_seconds = elapsed();
    return res;
  }

  MutexMatrix mm(problem);
  SimplifyResult base = simplify(build_base_pattern(problem, opts.pattern));
  for (int dropped : base.dropped_actions)
    res.report.incidents.push_back("pattern drops action (" +
                                   problem.actions[dropped].id + ")");

  int window = std::max(1, opts.parallel_bounds);
  for (int n = 1; n <= opts.max_bound; n += window) {
    int hi = std::min(opts.max_bound, n + window - 1);
    std::vector<detail::BoundAttempt> attempts((size_t)(hi - n + 1));
    if (window == 1) {
      attempts[0] = detail::attempt_bound(problem, base.pattern, mm, opts, n);
    } else {
      std::vector<std::thread> workers;
      for (int k = n; k <= hi; ++k)
        workers.emplace_back([&, k] {
          try {
            attempts[k - n] = detail::attempt_bound(problem, base.pattern, mm, opts, k);
          } catch (const std::exception& e) {
            attempts[k - n].n = k;
            attempts[k - n].error = e.what();
          }
        });
      for (auto& w : workers) w.join();
    }
    for (auto& at : attempts) {
      ++res.report.solver_calls;
      if (!at.error.empty()) throw SolverError(at.error);
      if (at.result.status == SmtResult::Unknown)
        res.report.incidents.push_back("bound " + std::to_string(at.n) +
                                       " returned unknown (" + at.result.reason + ")");
    }
    for (auto& at : attempts) {
      if (at.result.status != SmtResult::Sat) continue;
      // First sat in ascending bound order wins.
      TimedPlan plan = std::move(*at.plan);
      plan.bound = at.n;
      plan.pattern_desc = pattern_desc;
      ValidationReport vr = validate(plan, problem, opts.encoding.eps);
      if (!vr.valid) {
        std::string msg = "extracted plan rejected by the validator:";
        for (const auto& v : vr.violations) msg += "\n  [" + v.code + "] " + v.message;
        throw InternalError(msg);
      }
      plan.wall_seconds = elapsed();
      res.status = SolveResult::Solved;
      res.plan = std::move(plan);
      res.report.status = "solved";
      res.report.bound = at.n;
      res.report.variables = at.variables;
      res.report.assertions = at.assertions;
      res.report.wall_seconds = elapsed();
      return res;
    }
  }
  res.status = SolveResult::Exhausted;
  res.report.status = "exhausted";
  res.report.bound = opts.max_bound;
  res.report.wall_seconds = elapsed();
  return res;
}

}  // namespace tpp

#endif  // TPP_SOLVE_HPP
