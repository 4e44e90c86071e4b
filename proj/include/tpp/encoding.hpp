#ifndef TPP_ENCODING_HPP
#define TPP_ENCODING_HPP

#include <memory>
#include <string>
#include <vector>

#include "tpp/analysis.hpp"
#include "tpp/formula.hpp"
#include "tpp/pattern.hpp"
#include "tpp/symbolic.hpp"

// The pattern state encoding T_s (preconditions with rolling guards,
// at-most-one, frame) and the pattern time encoding T_t (durations,
// start/end matching, epsilon separation, no-overlap, lasting conditions),
// assembled with I(X) and G(X') into the bounded formula.

namespace tpp {

struct EncodingOptions {
  Rat eps{1, 1000};
  // Forces a_i <= 1 on every occurrence; rolling is an optimization and the
  // procedure stays complete without it.
  bool disable_rolling = false;
};

struct EncodingContext {
  const TemporalNumericProblem* problem = nullptr;
  const Pattern* pattern = nullptr;
  const MutexMatrix* mm = nullptr;
  EncodingOptions opts;

  std::unique_ptr<FormulaManager> mgr_owner = std::make_unique<FormulaManager>();
  FormulaManager* mgr = nullptr;

  std::vector<Formula> a, t, d;  // per entry; d only valid for start entries
  Formula t0;
  std::vector<Formula> x, xp;  // per state variable
  std::vector<SymbolicState> sigma;  // sigma_0..sigma_k
  std::vector<bool> eligible;  // per durative action
  std::vector<Rat> eps_b;      // per durative action

  const PatternEntry& entry(int i) const { return pattern->entry(i); }
  Formula av(int i) const { return a.at(i - 1); }
  Formula tv(int i) const { return t.at(i - 1); }
  Formula dv(int i) const {
    if (!d.at(i - 1).valid()) throw ModelError("duration variable on non-start entry");
    return d.at(i - 1);
  }
  const SymbolicState& sigma_at(int i) const { return sigma.at(i); }
};

namespace detail {

inline std::string padded(const char* prefix, int i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%s%04d", prefix, i);
  return buf;
}

}  // namespace detail

inline EncodingContext make_context(const TemporalNumericProblem& p, const Pattern& pat,
                                    const MutexMatrix& mm, const EncodingOptions& opts = {}) {
  EncodingContext ctx;
  ctx.problem = &p;
  ctx.pattern = &pat;
  ctx.mm = &mm;
  ctx.opts = opts;
  ctx.mgr = ctx.mgr_owner.get();
  FormulaManager& m = *ctx.mgr;
  ctx.t0 = m.var(detail::padded("t", 0), Sort::Real);
  for (int i = 1; i <= pat.size(); ++i) {
    ctx.a.push_back(m.var(detail::padded("a", i), Sort::Int));
    ctx.t.push_back(m.var(detail::padded("t", i), Sort::Real));
    ctx.d.push_back(pat.entry(i).role == SnapRole::Start
                        ? m.var(detail::padded("d", i), Sort::Real)
                        : Formula{});
  }
  for (VarId v = 0; v < p.vars.size(); ++v) {
    Sort s = p.vars.is_bool(v) ? Sort::Bool : Sort::Real;
    ctx.x.push_back(m.var(state_var_name(p.vars, v), s));
    ctx.xp.push_back(m.var(next_state_var_name(p.vars, v), s));
  }
  ctx.sigma = sigma_table(m, p, pat, ctx.a);
  for (const auto& b : p.actions) {
    ctx.eligible.push_back(eligible_for_rolling(b));
    ctx.eps_b.push_back(epsilon_b(b, mm, opts.eps));
  }
  return ctx;
}

// pre: boolean conditions guarded by a_i > 0; numeric conditions get the
// two-guard rolling form (the second guard is the Theorem-1 bound on the
// last repetition).
inline std::vector<Formula> encode_pre(EncodingContext& ctx) {
  FormulaManager& m = *ctx.mgr;
  std::vector<Formula> out;
  for (int i = 1; i <= ctx.pattern->size(); ++i) {
    const PatternEntry& e = ctx.entry(i);
    const SnapAction& snap = ctx.pattern->snap(e);
    const DurativeAction& b = ctx.problem->actions[e.action];
    const SymbolicState& before = ctx.sigma_at(i - 1);
    Formula executed = m.gt(ctx.av(i), m.intnum(0));
    Formula rolled = m.gt(ctx.av(i), m.intnum(1));
    std::vector<Formula> bools;
    for (const auto& c : snap.pre)
      if (c.kind == Condition::BoolEq) bools.push_back(apply_sigma(m, before, c));
    if (!bools.empty()) out.push_back(m.implies(executed, m.band_all(bools)));
    Formula zero = m.intnum(0), one = m.intnum(1);
    for (const auto& c : snap.pre) {
      if (c.kind != Condition::Numeric) continue;
      Formula base, last;
      if (e.role == SnapRole::Start) {
        base = substitute_reps(m, c.expr, zero, zero, b, before.value);
        Formula am1 = m.sub(ctx.av(i), one);
        last = substitute_reps(m, c.expr, am1, am1, b, before.value);
      } else {
        base = substitute_reps(m, c.expr, m.sub(one, ctx.av(i)), zero, b, before.value);
        last = substitute_reps(m, c.expr, zero, m.sub(ctx.av(i), one), b, before.value);
      }
      out.push_back(m.implies(executed, m.cmp(c.op, base, m.realnum(Rat(0)))));
      out.push_back(m.implies(rolled, m.cmp(c.op, last, m.realnum(Rat(0)))));
    }
  }
  return out;
}

// amo: occurrences of actions not eligible for rolling stay 0/1. Emitted for
// end occurrences too; start-end matching makes that redundant but it prunes.
inline std::vector<Formula> encode_amo(EncodingContext& ctx) {
  FormulaManager& m = *ctx.mgr;
  std::vector<Formula> out;
  for (int i = 1; i <= ctx.pattern->size(); ++i)
    if (ctx.opts.disable_rolling || !ctx.eligible[ctx.entry(i).action])
      out.push_back(m.le(ctx.av(i), m.intnum(1)));
  return out;
}

// frame: next-state variables pinned to sigma_k.
inline std::vector<Formula> encode_frame(EncodingContext& ctx) {
  FormulaManager& m = *ctx.mgr;
  const SymbolicState& last = ctx.sigma.back();
  std::vector<Formula> out;
  for (VarId v = 0; v < ctx.problem->vars.size(); ++v)
    out.push_back(ctx.problem->vars.is_bool(v) ? m.iff(ctx.xp[v], last.value[v])
                                               : m.eq(ctx.xp[v], last.value[v]));
  return out;
}

// dur: unexecuted occurrences stick to t_0; executed starts sit at least
// eps after t_0 and take a_i * (L + eps_b) - eps_b .. a_i * (U + eps_b) -
// eps_b, which also eps-separates consecutive rolled executions.
inline std::vector<Formula> encode_dur(EncodingContext& ctx) {
  FormulaManager& m = *ctx.mgr;
  std::vector<Formula> out;
  for (int i = 1; i <= ctx.pattern->size(); ++i) {
    const PatternEntry& e = ctx.entry(i);
    const DurativeAction& b = ctx.problem->actions[e.action];
    Formula ai = ctx.av(i), ti = ctx.tv(i);
    Formula executed = m.gt(ai, m.intnum(0));
    Formula idle = m.eq(ai, m.intnum(0));
    if (e.role == SnapRole::End) {
      out.push_back(m.implies(idle, m.eq(ti, ctx.t0)));
      continue;
    }
    const Rat& eb = ctx.eps_b[e.action];
    Formula di = ctx.dv(i);
    out.push_back(m.implies(executed, m.ge(ti, m.add(ctx.t0, m.realnum(ctx.opts.eps)))));
    out.push_back(m.implies(idle, m.band(m.eq(ti, ctx.t0), m.eq(di, m.realnum(Rat(0))))));
    Formula span = m.add(di, m.realnum(eb));
    out.push_back(m.implies(
        executed, m.band(m.le(m.mul(m.realnum(b.dur_lo + eb), ai), span),
                         m.le(span, m.mul(m.realnum(b.dur_hi + eb), ai)))));
  }
  return out;
}

// start-end: every executed start needs a matching end at t_i + d_i with the
// same count, and vice versa.
inline std::vector<Formula> encode_start_end(EncodingContext& ctx) {
  FormulaManager& m = *ctx.mgr;
  std::vector<Formula> out;
  for (int i = 1; i <= ctx.pattern->size(); ++i) {
    const PatternEntry& e = ctx.entry(i);
    std::vector<Formula> options;
    if (e.role == SnapRole::Start) {
      for (int j : ctx.pattern->ends_after(i))
        options.push_back(m.band(m.eq(ctx.av(i), ctx.av(j)),
                                 m.eq(ctx.tv(j), m.add(ctx.tv(i), ctx.dv(i)))));
    } else {
      for (int j : ctx.pattern->starts_before(i))
        options.push_back(m.band(m.eq(ctx.av(j), ctx.av(i)),
                                 m.eq(ctx.tv(i), m.add(ctx.tv(j), ctx.dv(j)))));
    }
    out.push_back(m.implies(m.gt(ctx.av(i), m.intnum(0)), m.bor_all(options)));
  }
  return out;
}

// epsilon: mutex pairs (and copies of the same occurrence) follow the
// pattern order at eps distance; rolled starts may not interleave with the
// start/end of a cross-mutex action unless nested in a single execution.
inline std::vector<Formula> encode_epsilon(EncodingContext& ctx) {
  FormulaManager& m = *ctx.mgr;
  const Pattern& pat = *ctx.pattern;
  std::vector<Formula> out;
  for (int i = 2; i <= pat.size(); ++i) {
    for (int j = 1; j < i; ++j) {
      const PatternEntry &ei = pat.entry(i), &ej = pat.entry(j);
      if (!ei.same_snap(ej) && !(*ctx.mm)(pat.snap(ei), pat.snap(ej))) continue;
      out.push_back(m.implies(m.gt(ctx.av(i), m.intnum(0)),
                              m.ge(ctx.tv(i), m.add(ctx.tv(j), m.realnum(ctx.opts.eps)))));
    }
  }
  auto cross_mutex = [&](const DurativeAction& b, const DurativeAction& b2) {
    return (*ctx.mm)(b.start, b2.start) || (*ctx.mm)(b.start, b2.end) ||
           (*ctx.mm)(b.end, b2.start) || (*ctx.mm)(b.end, b2.end);
  };
  for (int i = 1; i <= pat.size(); ++i) {
    if (pat.entry(i).role != SnapRole::Start) continue;
    for (int j = 1; j <= pat.size(); ++j) {
      if (i == j || pat.entry(j).role != SnapRole::Start) continue;
      if (pat.entry(i).action == pat.entry(j).action) continue;
      const DurativeAction& b = ctx.problem->actions[pat.entry(i).action];
      const DurativeAction& b2 = ctx.problem->actions[pat.entry(j).action];
      if (!cross_mutex(b, b2)) continue;
      Formula disjoint1 = m.ge(ctx.tv(i), m.add(ctx.tv(j), ctx.dv(j)));
      Formula disjoint2 = m.ge(ctx.tv(j), m.add(ctx.tv(i), ctx.dv(i)));
      Formula nested = m.band(
          m.band(m.eq(ctx.av(j), m.intnum(1)), m.ge(ctx.tv(i), ctx.tv(j))),
          m.le(m.add(ctx.tv(i), ctx.dv(i)), m.add(ctx.tv(j), ctx.dv(j))));
      out.push_back(m.implies(m.gt(ctx.av(i), m.intnum(1)),
                              m.bor(m.bor(disjoint1, disjoint2), nested)));
    }
  }
  return out;
}

// noOverlap: a start waits for the previous occurrences of the same action.
inline std::vector<Formula> encode_no_overlap(EncodingContext& ctx) {
  FormulaManager& m = *ctx.mgr;
  std::vector<Formula> out;
  for (int i = 1; i <= ctx.pattern->size(); ++i) {
    if (ctx.entry(i).role != SnapRole::Start) continue;
    std::vector<int> prev = ctx.pattern->prev_starts(i);
    if (prev.empty()) continue;
    std::vector<Formula> waits;
    for (int j : prev) waits.push_back(m.ge(ctx.tv(i), m.add(ctx.tv(j), ctx.dv(j))));
    out.push_back(m.implies(m.gt(ctx.av(i), m.intnum(0)), m.band_all(waits)));
  }
  return out;
}

// lasting: invariant conditions hold across every (consecutive) execution,
// and actions mutex with the lasting part either precede the start or must
// not fall inside the execution window (no rolling + maintenance otherwise).
inline std::vector<Formula> encode_lasting(EncodingContext& ctx) {
  FormulaManager& m = *ctx.mgr;
  const Pattern& pat = *ctx.pattern;
  std::vector<Formula> out;
  Formula zero = m.intnum(0), one = m.intnum(1);
  for (int i = 1; i <= pat.size(); ++i) {
    const PatternEntry& e = pat.entry(i);
    if (e.role != SnapRole::Start) continue;
    const DurativeAction& b = ctx.problem->actions[e.action];
    if (b.lasting.pre.empty()) continue;
    const SymbolicState& before = ctx.sigma_at(i - 1);
    const SymbolicState& after = ctx.sigma_at(i);
    Formula executed = m.gt(ctx.av(i), zero);
    Formula rolled = m.gt(ctx.av(i), one);
    // (a) first and last repetition guards
    std::vector<Formula> first_parts, last_parts;
    for (const auto& c : b.lasting.pre) {
      if (c.kind == Condition::BoolEq) {
        first_parts.push_back(apply_sigma(m, after, c));
      } else {
        first_parts.push_back(
            m.cmp(c.op, substitute_reps(m, c.expr, one, zero, b, before.value),
                  m.realnum(Rat(0))));
        last_parts.push_back(
            m.cmp(c.op,
                  substitute_reps(m, c.expr, ctx.av(i), m.sub(ctx.av(i), one), b,
                                  before.value),
                  m.realnum(Rat(0))));
      }
    }
    out.push_back(m.implies(executed, m.band_all(first_parts)));
    if (!last_parts.empty()) out.push_back(m.implies(rolled, m.band_all(last_parts)));
    // (b) interaction with actions mutex with the lasting part
    for (int j = 1; j <= pat.size(); ++j) {
      if (j == i) continue;
      const PatternEntry& ej = pat.entry(j);
      if (!(*ctx.mm)(pat.snap(ej), b.lasting)) continue;
      if (j < i) {
        out.push_back(m.implies(executed, m.ge(ctx.tv(i), ctx.tv(j))));
        if (ej.role == SnapRole::Start)
          out.push_back(m.implies(m.band(executed, m.gt(ctx.av(j), one)),
                                  m.ge(ctx.tv(i), m.add(ctx.tv(j), ctx.dv(j)))));
      } else {
        Formula window = m.band(m.le(m.add(ctx.t0, m.realnum(ctx.opts.eps)), ctx.tv(j)),
                                m.lt(ctx.tv(j), m.add(ctx.tv(i), ctx.dv(i))));
        out.push_back(m.implies(window, m.band(m.le(ctx.av(i), one), m.le(ctx.av(j), one))));
        std::vector<Formula> maint;
        const SymbolicState& at_j = ctx.sigma_at(j);
        for (const auto& c : b.lasting.pre) maint.push_back(apply_sigma(m, at_j, c));
        out.push_back(m.implies(window, m.band_all(maint)));
      }
    }
  }
  return out;
}

struct Encoding {
  // Assertion families in emission order; the family tag is kept for the
  // dump and for tests that inspect a single family.
  std::vector<std::pair<std::string, std::vector<Formula>>> families;
  int num_action_vars = 0;
  int num_time_vars = 0;

  const std::vector<Formula>& family(const std::string& name) const {
    for (const auto& [n, fs] : families)
      if (n == name) return fs;
    throw ModelError("no such family: " + name);
  }
  size_t num_assertions() const {
    size_t n = 0;
    for (const auto& [name, fs] : families) n += fs.size();
    return n;
  }
};

// I(X) as literals/equalities, G(X') over next-state variables.
inline std::vector<Formula> encode_init(EncodingContext& ctx) {
  FormulaManager& m = *ctx.mgr;
  std::vector<Formula> out;
  for (VarId v = 0; v < ctx.problem->vars.size(); ++v) {
    if (ctx.problem->vars.is_bool(v))
      out.push_back(ctx.problem->init.get_bool(v) ? ctx.x[v] : m.bnot(ctx.x[v]));
    else
      out.push_back(m.eq(ctx.x[v], m.realnum(ctx.problem->init.get_num(v))));
  }
  return out;
}

inline std::vector<Formula> encode_goal(EncodingContext& ctx) {
  FormulaManager& m = *ctx.mgr;
  std::vector<Formula> out;
  for (const auto& g : ctx.problem->goals) {
    if (g.kind == Condition::BoolEq)
      out.push_back(g.value ? ctx.xp[g.var] : m.bnot(ctx.xp[g.var]));
    else
      out.push_back(m.cmp(g.op, linexpr_formula(m, g.expr, ctx.xp), m.realnum(Rat(0))));
  }
  return out;
}

// Variable ranges: counts in N>=0, times and durations in Q>=0.
inline std::vector<Formula> encode_domains(EncodingContext& ctx) {
  FormulaManager& m = *ctx.mgr;
  std::vector<Formula> out;
  for (int i = 1; i <= ctx.pattern->size(); ++i) {
    out.push_back(m.ge(ctx.av(i), m.intnum(0)));
    out.push_back(m.ge(ctx.tv(i), m.realnum(Rat(0))));
    if (ctx.entry(i).role == SnapRole::Start)
      out.push_back(m.ge(ctx.dv(i), m.realnum(Rat(0))));
  }
  return out;
}

inline Encoding assemble(EncodingContext& ctx) {
  FormulaManager& m = *ctx.mgr;
  Encoding enc;
  enc.families.emplace_back("domains", encode_domains(ctx));
  enc.families.emplace_back("init", encode_init(ctx));
  enc.families.emplace_back("pre", encode_pre(ctx));
  enc.families.emplace_back("amo", encode_amo(ctx));
  enc.families.emplace_back("frame", encode_frame(ctx));
  enc.families.emplace_back("t0", std::vector<Formula>{m.eq(ctx.t0, m.realnum(Rat(0)))});
  enc.families.emplace_back("dur", encode_dur(ctx));
  enc.families.emplace_back("start-end", encode_start_end(ctx));
  enc.families.emplace_back("epsilon", encode_epsilon(ctx));
  enc.families.emplace_back("no-overlap", encode_no_overlap(ctx));
  enc.families.emplace_back("lasting", encode_lasting(ctx));
  enc.families.emplace_back("goal", encode_goal(ctx));
  enc.num_action_vars = ctx.pattern->size();
  int starts = 0;
  for (const auto& e : ctx.pattern->entries())
    if (e.role == SnapRole::Start) ++starts;
  enc.num_time_vars = ctx.pattern->size() + starts + 1;
  return enc;
}

}  // namespace tpp

#endif  // TPP_ENCODING_HPP
