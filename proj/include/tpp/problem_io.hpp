#ifndef TPP_PROBLEM_IO_HPP
#define TPP_PROBLEM_IO_HPP

#include <sstream>
#include <string>

#include "tpp/problem.hpp"
#include "tpp/sexpr.hpp"

// Canonical debug dump of a grounded problem. The format is documented in the
// README; dump/read round-trips to a structurally identical problem.

namespace tpp {

namespace detail {

inline void dump_linear(std::ostream& os, const LinearExpr& e) {
  os << "(linear " << rat_to_string(e.constant);
  for (const auto& [v, c] : e.terms) os << " (" << v << " " << rat_to_string(c) << ")";
  os << ")";
}

inline void dump_condition(std::ostream& os, const Condition& c) {
  if (c.kind == Condition::BoolEq) {
    os << "(bool " << c.var << " " << (c.value ? "true" : "false") << ")";
  } else {
    os << "(cmp " << cmp_op_name(c.op) << " ";
    dump_linear(os, c.expr);
    os << ")";
  }
}

inline void dump_effect(std::ostream& os, const Effect& e) {
  if (e.kind == Effect::BoolAssign) {
    os << "(set " << e.var << " " << (e.value ? "true" : "false") << ")";
  } else {
    os << "(assign " << e.var << " ";
    dump_linear(os, e.expr);
    os << ")";
  }
}

inline void dump_snap(std::ostream& os, const SnapAction& s, const char* tag) {
  os << "    (" << tag << " \"" << s.id << "\" (pre";
  for (const auto& c : s.pre) {
    os << " ";
    dump_condition(os, c);
  }
  os << ") (eff";
  for (const auto& e : s.eff) {
    os << " ";
    dump_effect(os, e);
  }
  os << "))\n";
}

}  // namespace detail

inline std::string dump_problem(const TemporalNumericProblem& p) {
  std::ostringstream os;
  os << "(problem \"" << p.name << "\"\n";
  os << "  (vars";
  for (VarId v = 0; v < p.vars.size(); ++v)
    os << " (" << (p.vars.is_bool(v) ? "bool" : "num") << " \"" << p.vars.name(v) << "\")";
  os << ")\n";
  for (const auto& a : p.actions) {
    os << "  (action \"" << a.id << "\" (duration " << rat_to_string(a.dur_lo) << " "
       << rat_to_string(a.dur_hi) << ") " << (a.instantaneous ? "instantaneous" : "durative")
       << "\n";
    detail::dump_snap(os, a.start, "start");
    detail::dump_snap(os, a.lasting, "lasting");
    detail::dump_snap(os, a.end, "end");
    os << "  )\n";
  }
  os << "  (init";
  for (VarId v = 0; v < p.vars.size(); ++v) {
    os << " ";
    if (p.vars.is_bool(v))
      os << (p.init.get_bool(v) ? "true" : "false");
    else
      os << rat_to_string(p.init.get_num(v));
  }
  os << ")\n";
  os << "  (goal";
  for (const auto& g : p.goals) {
    os << " ";
    detail::dump_condition(os, g);
  }
  os << ")\n)\n";
  return os.str();
}

namespace detail {

inline Rat read_rat_atom(const Sexpr& s) {
  if (!s.is_atom) throw ParseError("expected number", s.line, s.col);
  return rat(s.atom);
}

inline VarId read_var_atom(const Sexpr& s) {
  if (!s.is_atom) throw ParseError("expected variable id", s.line, s.col);
  return std::stoi(s.atom);
}

inline LinearExpr read_linear(const Sexpr& s) {
  if (s.head() != "linear") throw ParseError("expected (linear ...)", s.line, s.col);
  LinearExpr e;
  e.constant = read_rat_atom(s[1]);
  for (size_t i = 2; i < s.size(); ++i)
    e.add_term(read_var_atom(s[i][0]), read_rat_atom(s[i][1]));
  return e;
}

inline CmpOp read_cmp_op(const Sexpr& s) {
  const std::string& a = s.atom;
  if (a == "<") return CmpOp::Lt;
  if (a == "<=") return CmpOp::Le;
  if (a == "=") return CmpOp::Eq;
  if (a == ">=") return CmpOp::Ge;
  if (a == ">") return CmpOp::Gt;
  throw ParseError("unknown comparison " + a, s.line, s.col);
}

inline Condition read_condition(const Sexpr& s) {
  if (s.head() == "bool") return Condition::bool_eq(read_var_atom(s[1]), s[2].atom == "true");
  if (s.head() == "cmp") return Condition::numeric(read_linear(s[2]), read_cmp_op(s[1]));
  throw ParseError("expected condition", s.line, s.col);
}

inline Effect read_effect(const Sexpr& s) {
  if (s.head() == "set") return Effect::bool_assign(read_var_atom(s[1]), s[2].atom == "true");
  if (s.head() == "assign") return Effect::num_assign(read_var_atom(s[1]), read_linear(s[2]));
  throw ParseError("expected effect", s.line, s.col);
}

inline SnapAction read_snap(const Sexpr& s) {
  SnapAction snap;
  snap.id = s[1].atom;
  for (const Sexpr& part : {s[2], s[3]}) {
    bool is_pre = part.head() == "pre";
    for (size_t i = 1; i < part.size(); ++i) {
      if (is_pre)
        snap.pre.push_back(read_condition(part[i]));
      else
        snap.eff.push_back(read_effect(part[i]));
    }
  }
  return snap;
}

}  // namespace detail

inline TemporalNumericProblem read_problem_dump(const std::string& text) {
  auto tops = parse_sexprs(text);
  if (tops.size() != 1 || tops[0].head() != "problem")
    throw ParseError("expected a single (problem ...) form", 1, 1);
  const Sexpr& root = tops[0];
  TemporalNumericProblem p;
  p.name = root[1].atom;
  size_t idx = 2;
  for (size_t i = 1; i < root[idx].size(); ++i) {
    const Sexpr& v = root[idx][i];
    p.vars.add(v[1].atom, v[0].atom == "bool" ? VarKind::Bool : VarKind::Num);
  }
  ++idx;
  while (idx < root.size() && root[idx].head() == "action") {
    const Sexpr& a = root[idx];
    DurativeAction da;
    da.id = a[1].atom;
    da.dur_lo = detail::read_rat_atom(a[2][1]);
    da.dur_hi = detail::read_rat_atom(a[2][2]);
    da.instantaneous = a[3].atom == "instantaneous";
    da.start = detail::read_snap(a[4]);
    da.lasting = detail::read_snap(a[5]);
    da.end = detail::read_snap(a[6]);
    p.actions.push_back(std::move(da));
    ++idx;
  }
  const Sexpr& init = root[idx];
  for (size_t i = 1; i < init.size(); ++i) {
    VarId v = (VarId)(i - 1);
    if (p.vars.is_bool(v))
      p.init.values.push_back(init[i].atom == "true");
    else
      p.init.values.push_back(detail::read_rat_atom(init[i]));
  }
  ++idx;
  const Sexpr& goal = root[idx];
  for (size_t i = 1; i < goal.size(); ++i) p.goals.push_back(detail::read_condition(goal[i]));
  p.finalize();
  return p;
}

}  // namespace tpp

#endif  // TPP_PROBLEM_IO_HPP
