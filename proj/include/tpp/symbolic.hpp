#ifndef TPP_SYMBOLIC_HPP
#define TPP_SYMBOLIC_HPP

#include <string>
#include <unordered_map>
#include <vector>

#include "tpp/formula.hpp"
#include "tpp/pattern.hpp"
#include "tpp/problem.hpp"

// sigma_i: the value of every state variable after the first i pattern
// entries, as a formula over initial-state variables and the integer count
// variables a_1..a_i. Built over the hash-consed DAG so chained steps share
// subterms instead of duplicating them.

namespace tpp {

inline std::string mangle(const std::string& name) {
  std::string out;
  for (char c : name) out += (c == ' ' || c == '(' || c == ')') ? '_' : c;
  return out;
}

// Naming scheme shared by sigma and the encodings.
inline std::string state_var_name(const VariableTable& vars, VarId v) {
  return "x_" + mangle(vars.name(v));
}
inline std::string next_state_var_name(const VariableTable& vars, VarId v) {
  return "xp_" + mangle(vars.name(v));
}

struct SymbolicState {
  int index = 0;
  std::vector<Formula> value;  // per VarId
};

// sigma_0: every variable maps to itself.
inline SymbolicState make_sigma0(FormulaManager& m, const TemporalNumericProblem& p) {
  SymbolicState s;
  s.index = 0;
  s.value.reserve(p.vars.size());
  for (VarId v = 0; v < p.vars.size(); ++v)
    s.value.push_back(
        m.var(state_var_name(p.vars, v), p.vars.is_bool(v) ? Sort::Bool : Sort::Real));
  return s;
}

// Linear expression under a variable valuation (defaults to sigma images).
inline Formula linexpr_formula(FormulaManager& m, const LinearExpr& e,
                               const std::vector<Formula>& valuation) {
  Formula acc;
  for (const auto& [v, c] : e.terms) {
    Formula t = m.mul(m.realnum(c), valuation.at(v));
    acc = acc.valid() ? m.add(acc, t) : t;
  }
  Formula k = m.realnum(e.constant);
  if (!acc.valid()) return k;
  return e.constant == 0 ? acc : m.add(acc, k);
}

// One inductive step of sigma over pattern entry `e` with count variable
// `count`: untouched variables copy through; v := T becomes sigma(v) or
// count>0; v := F becomes sigma(v) and count=0; a linear increment adds
// count * sigma(psi'); any other assignment becomes ite(count>0, sigma(psi),
// sigma(v)).
inline SymbolicState sigma_step(FormulaManager& m, const SymbolicState& prev,
                                const Pattern& pat, const PatternEntry& e, Formula count) {
  SymbolicState next = prev;
  next.index = prev.index + 1;
  Formula executed = m.gt(count, m.intnum(0));
  for (const Effect& eff : pat.snap(e).eff) {
    if (eff.kind == Effect::BoolAssign) {
      next.value[eff.var] = eff.value ? m.bor(prev.value[eff.var], executed)
                                      : m.band(prev.value[eff.var], m.eq(count, m.intnum(0)));
    } else if (eff.linear_increment) {
      Formula delta = linexpr_formula(m, eff.increment_delta(), prev.value);
      next.value[eff.var] = m.add(prev.value[eff.var], m.mul(count, delta));
    } else {
      Formula rhs = linexpr_formula(m, eff.expr, prev.value);
      next.value[eff.var] = m.ite(executed, rhs, prev.value[eff.var]);
    }
  }
  return next;
}

// psi[p, b-start, q, b-end]: the value of psi after p repetitions of b's
// start action and q of its end action. Each variable x maps to
//   x + p * psi'   when x += psi' is a linear increment of b-start (q for
//                  b-end), and to
//   psi''          when x := psi'' is a non-increment effect and the owning
//                  side's count is not the literal 0 (so psi[0,.,0,.] = psi,
//                  matching the zero-repetition reading).
// The counts may be symbolic integer expressions, including negative ones
// used to rewind starts already accounted for in sigma.
inline Formula substitute_reps(FormulaManager& m, const LinearExpr& psi, Formula p, Formula q,
                               const DurativeAction& b,
                               const std::vector<Formula>& valuation) {
  for (const auto& es : b.start.eff) {
    if (es.kind != Effect::NumAssign) continue;
    if (b.end.effect_on(es.var))
      throw ModelError("effect-shape violation: " + b.id + " assigns " +
                       std::to_string(es.var) + " at start and end");
  }
  auto literal_zero = [&](Formula f) { return m.op(f) == Op::NumConst && m.node(f).num == 0; };
  Formula acc;
  for (const auto& [x, c] : psi.terms) {
    Formula image;
    const Effect* se = b.start.effect_on(x);
    const Effect* ee = b.end.effect_on(x);
    const Effect* eff = se ? se : ee;
    Formula count = se ? p : q;
    if (eff && eff->kind == Effect::NumAssign) {
      if (eff->linear_increment) {
        Formula delta = linexpr_formula(m, eff->increment_delta(), valuation);
        image = m.add(valuation.at(x), m.mul(count, delta));
      } else if (!literal_zero(count)) {
        image = linexpr_formula(m, eff->expr, valuation);
      } else {
        image = valuation.at(x);
      }
    } else {
      image = valuation.at(x);
    }
    Formula t = m.mul(m.realnum(c), image);
    acc = acc.valid() ? m.add(acc, t) : t;
  }
  Formula k = m.realnum(psi.constant);
  if (!acc.valid()) return k;
  return psi.constant == 0 ? acc : m.add(acc, k);
}

// Condition under sigma: v = T maps to sigma(v), v = F to (not sigma(v)),
// psi cmp 0 to sigma(psi) cmp 0.
inline Formula apply_sigma(FormulaManager& m, const SymbolicState& sigma, const Condition& c) {
  if (c.kind == Condition::BoolEq)
    return c.value ? sigma.value.at(c.var) : m.bnot(sigma.value.at(c.var));
  return m.cmp(c.op, linexpr_formula(m, c.expr, sigma.value), m.realnum(Rat(0)));
}

// Formula-level capture-free substitution of state variables by their sigma
// images (for terms built against sigma_0).
inline Formula apply_sigma(FormulaManager& m, const SymbolicState& sigma,
                           const TemporalNumericProblem& p, Formula f) {
  std::unordered_map<uint32_t, Formula> map;
  for (VarId v = 0; v < p.vars.size(); ++v) {
    Formula base =
        m.var(state_var_name(p.vars, v), p.vars.is_bool(v) ? Sort::Bool : Sort::Real);
    if (!(sigma.value.at(v) == base)) map.emplace(base.id, sigma.value.at(v));
  }
  return m.substitute(f, map);
}

// Full sigma table for a pattern: sigma_0..sigma_k, where entry i was stepped
// with the provided count variable for position i (1-based).
inline std::vector<SymbolicState> sigma_table(FormulaManager& m,
                                              const TemporalNumericProblem& p,
                                              const Pattern& pat,
                                              const std::vector<Formula>& counts) {
  std::vector<SymbolicState> table;
  table.reserve(pat.size() + 1);
  table.push_back(make_sigma0(m, p));
  for (int i = 1; i <= pat.size(); ++i)
    table.push_back(sigma_step(m, table.back(), pat, pat.entry(i), counts.at(i - 1)));
  return table;
}

}  // namespace tpp

#endif  // TPP_SYMBOLIC_HPP
