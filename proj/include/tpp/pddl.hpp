#ifndef TPP_PDDL_HPP
#define TPP_PDDL_HPP

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tpp/problem.hpp"
#include "tpp/sexpr.hpp"

// PDDL2.1 level-3 front end: parse domain/problem files and ground them into
// a TemporalNumericProblem. Supported requirements: :strips, :typing,
// :fluents / :numeric-fluents, :durative-actions, :duration-inequalities,
// :negative-preconditions, :equality. Conditional, continuous and
// duration-dependent effects are rejected with named diagnostics.

namespace tpp {

struct UnsupportedFeature : std::runtime_error {
  explicit UnsupportedFeature(const std::string& what, int line = 0, int col = 0)
      : std::runtime_error("unsupported feature: " + what +
                           (line ? " at line " + std::to_string(line) + ", column " +
                                       std::to_string(col)
                                 : "")) {}
};

namespace pddl {

// ---------------------------------------------------------------------------
// Lifted model

struct TypedName {
  std::string name;
  std::string type;
};

// Argument of a lifted atom: parameter index or constant object name.
struct Term {
  int param = -1;       // >= 0: parameter index
  std::string object;   // param < 0: object constant
};

struct Atom {
  std::string pred;  // predicate or function name
  std::vector<Term> args;
};

// Lifted linear expression over fluent atoms.
struct LiftedLinear {
  Rat constant{0};
  std::vector<std::pair<Atom, Rat>> terms;
};

struct LiftedCondition {
  enum Kind { Pred, Cmp, ObjEq } kind = Pred;
  Atom atom;            // Pred
  bool positive = true; // Pred / ObjEq
  LiftedLinear expr;    // Cmp: expr op 0
  CmpOp op = CmpOp::Ge;
  Term eq_lhs, eq_rhs;  // ObjEq
};

struct LiftedEffect {
  enum Kind { PredSet, NumAssign } kind = PredSet;
  Atom atom;            // target predicate or fluent
  bool value = true;    // PredSet
  LiftedLinear expr;    // NumAssign right-hand side
};

struct LiftedAction {
  std::string name;
  std::vector<TypedName> params;
  bool durative = false;
  Rat dur_lo{0}, dur_hi{0};
  std::vector<LiftedCondition> cond_start, cond_over, cond_end;
  std::vector<LiftedEffect> eff_start, eff_end;
};

struct Domain {
  std::string name;
  std::map<std::string, std::string> types;  // type -> parent ("" for root)
  std::vector<TypedName> constants;
  std::map<std::string, std::vector<std::string>> predicates;  // name -> param types
  std::map<std::string, std::vector<std::string>> functions;
  std::vector<LiftedAction> actions;

  bool is_subtype(const std::string& t, const std::string& super) const {
    if (super == "object" || t == super) return true;
    auto it = types.find(t);
    while (it != types.end() && !it->second.empty()) {
      if (it->second == super) return true;
      it = types.find(it->second);
    }
    return false;
  }
};

struct Instance {
  std::string name;
  std::string domain_name;
  std::vector<TypedName> objects;
  std::vector<std::pair<Atom, bool>> init_bools;  // ground atoms (Term.object set)
  std::vector<std::pair<Atom, Rat>> init_nums;
  std::vector<LiftedCondition> goal;  // ground (no params)
};

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

inline void expect_list(const Sexpr& s, const char* what) {
  if (s.is_atom) throw ParseError(std::string("expected ") + what, s.line, s.col);
}

inline std::vector<TypedName> parse_typed_list(const Sexpr& list, size_t from = 0) {
  std::vector<TypedName> out;
  std::vector<std::string> pending;
  for (size_t i = from; i < list.size(); ++i) {
    const Sexpr& it = list[i];
    if (!it.is_atom) throw ParseError("expected name in typed list", it.line, it.col);
    if (it.atom == "-") {
      if (i + 1 >= list.size())
        throw ParseError("dangling '-' in typed list", it.line, it.col);
      const std::string& ty = list[i + 1].atom;
      for (auto& n : pending) out.push_back({n, ty});
      pending.clear();
      ++i;
    } else {
      pending.push_back(it.atom);
    }
  }
  for (auto& n : pending) out.push_back({n, "object"});
  return out;
}

struct ActionContext {
  const Domain* dom;
  const std::vector<TypedName>* params;

  int param_index(const std::string& name) const {
    for (size_t i = 0; i < params->size(); ++i)
      if ((*params)[i].name == name) return (int)i;
    return -1;
  }
  Term make_term(const Sexpr& s) const {
    if (!s.is_atom) throw ParseError("expected term", s.line, s.col);
    Term t;
    if (s.atom.size() && s.atom[0] == '?') {
      t.param = param_index(s.atom);
      if (t.param < 0) throw ParseError("unknown parameter " + s.atom, s.line, s.col);
    } else {
      t.object = s.atom;
    }
    return t;
  }
};

inline Atom parse_atom(const Sexpr& s, const ActionContext& ctx) {
  expect_list(s, "atom");
  if (s.size() == 0 || !s[0].is_atom) throw ParseError("expected atom", s.line, s.col);
  Atom a;
  a.pred = s[0].atom;
  for (size_t i = 1; i < s.size(); ++i) a.args.push_back(ctx.make_term(s[i]));
  return a;
}

inline bool is_number(const Sexpr& s) {
  return s.is_atom && parse_rat(s.atom).has_value();
}

// Numeric expression -> lifted linear form. Rejects nonlinear shapes.
inline LiftedLinear parse_expr(const Sexpr& s, const ActionContext& ctx) {
  LiftedLinear e;
  if (s.is_atom) {
    if (s.atom == "?duration")
      throw UnsupportedFeature("duration-dependent expression", s.line, s.col);
    if (s.atom == "#t") throw UnsupportedFeature("continuous effect", s.line, s.col);
    auto num = parse_rat(s.atom);
    if (!num) throw ParseError("expected number or fluent, got " + s.atom, s.line, s.col);
    e.constant = *num;
    return e;
  }
  const std::string op = s[0].is_atom ? s[0].atom : "";
  if (op == "+" || op == "-" || op == "*" || op == "/") {
    if (op == "+") {
      for (size_t i = 1; i < s.size(); ++i) {
        LiftedLinear t = parse_expr(s[i], ctx);
        e.constant += t.constant;
        for (auto& tm : t.terms) e.terms.push_back(std::move(tm));
      }
    } else if (op == "-") {
      e = parse_expr(s[1], ctx);
      if (s.size() == 2) {  // unary minus
        e.constant = -e.constant;
        for (auto& [a, c] : e.terms) c = -c;
      } else {
        for (size_t i = 2; i < s.size(); ++i) {
          LiftedLinear t = parse_expr(s[i], ctx);
          e.constant -= t.constant;
          for (auto& [a, c] : t.terms) e.terms.emplace_back(std::move(a), -c);
        }
      }
    } else if (op == "*") {
      Rat k(1);
      LiftedLinear base;
      bool have_base = false;
      for (size_t i = 1; i < s.size(); ++i) {
        LiftedLinear t = parse_expr(s[i], ctx);
        if (t.terms.empty()) {
          k *= t.constant;
        } else if (!have_base) {
          base = std::move(t);
          have_base = true;
        } else {
          throw UnsupportedFeature("nonlinear arithmetic (product of fluents)", s.line, s.col);
        }
      }
      if (!have_base) {
        e.constant = k;
      } else {
        e = std::move(base);
        e.constant *= k;
        for (auto& [a, c] : e.terms) c *= k;
      }
    } else {  // "/"
      e = parse_expr(s[1], ctx);
      for (size_t i = 2; i < s.size(); ++i) {
        LiftedLinear t = parse_expr(s[i], ctx);
        if (!t.terms.empty() || t.constant == 0)
          throw UnsupportedFeature("nonlinear arithmetic (division by fluent or zero)", s.line,
                                   s.col);
        Rat inv = Rat(1) / t.constant;
        e.constant *= inv;
        for (auto& [a, c] : e.terms) c *= inv;
      }
    }
    return e;
  }
  if (s.size() >= 1 && s[0].is_atom && s[0].atom == "#t")
    throw UnsupportedFeature("continuous effect", s.line, s.col);
  // fluent term
  Atom a = parse_atom(s, ctx);
  if (!ctx.dom->functions.count(a.pred))
    throw ParseError("unknown function " + a.pred, s.line, s.col);
  e.terms.emplace_back(std::move(a), Rat(1));
  return e;
}

inline CmpOp parse_cmp_op(const std::string& op) {
  if (op == "<") return CmpOp::Lt;
  if (op == "<=") return CmpOp::Le;
  if (op == "=") return CmpOp::Eq;
  if (op == ">=") return CmpOp::Ge;
  if (op == ">") return CmpOp::Gt;
  throw std::logic_error("not a comparison: " + op);
}

inline bool is_cmp(const std::string& op) {
  return op == "<" || op == "<=" || op == "=" || op == ">=" || op == ">";
}

inline bool looks_like_object_term(const Sexpr& s) {
  return s.is_atom && !parse_rat(s.atom).has_value();
}

inline void parse_condition_into(const Sexpr& s, const ActionContext& ctx,
                                 std::vector<LiftedCondition>& out) {
  expect_list(s, "condition");
  if (s.size() == 0) return;  // ()
  const std::string op = s.head();
  if (op == "and") {
    for (size_t i = 1; i < s.size(); ++i) parse_condition_into(s[i], ctx, out);
    return;
  }
  if (op == "or" || op == "imply" || op == "exists" || op == "forall")
    throw UnsupportedFeature("non-conjunctive condition (" + op + ")", s.line, s.col);
  if (op == "not") {
    const Sexpr& inner = s[1];
    if (inner.head() == "=") {
      LiftedCondition c;
      c.kind = LiftedCondition::ObjEq;
      c.positive = false;
      c.eq_lhs = ctx.make_term(inner[1]);
      c.eq_rhs = ctx.make_term(inner[2]);
      out.push_back(std::move(c));
      return;
    }
    if (inner.is_list() && is_cmp(inner.head()))
      throw UnsupportedFeature("negated numeric condition", s.line, s.col);
    LiftedCondition c;
    c.kind = LiftedCondition::Pred;
    c.positive = false;
    c.atom = parse_atom(inner, ctx);
    if (!ctx.dom->predicates.count(c.atom.pred))
      throw ParseError("unknown predicate " + c.atom.pred, inner.line, inner.col);
    out.push_back(std::move(c));
    return;
  }
  if (is_cmp(op)) {
    // Object equality or numeric comparison.
    if (op == "=" && looks_like_object_term(s[1]) && looks_like_object_term(s[2]) &&
        !ctx.dom->functions.count(s[1].atom)) {
      LiftedCondition c;
      c.kind = LiftedCondition::ObjEq;
      c.eq_lhs = ctx.make_term(s[1]);
      c.eq_rhs = ctx.make_term(s[2]);
      out.push_back(std::move(c));
      return;
    }
    LiftedCondition c;
    c.kind = LiftedCondition::Cmp;
    c.op = parse_cmp_op(op);
    LiftedLinear lhs = parse_expr(s[1], ctx), rhs = parse_expr(s[2], ctx);
    c.expr = std::move(lhs);
    c.expr.constant -= rhs.constant;
    for (auto& [a, k] : rhs.terms) c.expr.terms.emplace_back(std::move(a), -k);
    out.push_back(std::move(c));
    return;
  }
  if (op == "when")
    throw UnsupportedFeature("conditional effect", s.line, s.col);
  LiftedCondition c;
  c.kind = LiftedCondition::Pred;
  c.atom = parse_atom(s, ctx);
  if (!ctx.dom->predicates.count(c.atom.pred))
    throw ParseError("unknown predicate " + c.atom.pred, s.line, s.col);
  out.push_back(std::move(c));
}

inline void parse_effect_into(const Sexpr& s, const ActionContext& ctx,
                              std::vector<LiftedEffect>& out) {
  expect_list(s, "effect");
  if (s.size() == 0) return;
  const std::string op = s.head();
  if (op == "and") {
    for (size_t i = 1; i < s.size(); ++i) parse_effect_into(s[i], ctx, out);
    return;
  }
  if (op == "when") throw UnsupportedFeature("conditional effect", s.line, s.col);
  if (op == "forall") throw UnsupportedFeature("quantified effect", s.line, s.col);
  if (op == "not") {
    LiftedEffect e;
    e.kind = LiftedEffect::PredSet;
    e.value = false;
    e.atom = parse_atom(s[1], ctx);
    out.push_back(std::move(e));
    return;
  }
  if (op == "assign" || op == "increase" || op == "decrease" || op == "scale-up" ||
      op == "scale-down") {
    LiftedEffect e;
    e.kind = LiftedEffect::NumAssign;
    e.atom = parse_atom(s[1], ctx);
    if (!ctx.dom->functions.count(e.atom.pred))
      throw ParseError("unknown function " + e.atom.pred, s.line, s.col);
    LiftedLinear rhs = parse_expr(s[2], ctx);
    if (op == "assign") {
      e.expr = std::move(rhs);
    } else if (op == "increase" || op == "decrease") {
      e.expr.terms.emplace_back(e.atom, Rat(1));
      Rat sign = op == "increase" ? 1 : -1;
      e.expr.constant = sign * rhs.constant;
      for (auto& [a, c] : rhs.terms) e.expr.terms.emplace_back(std::move(a), sign * c);
    } else {  // scale-up / scale-down by a constant factor
      if (!rhs.terms.empty())
        throw UnsupportedFeature("nonlinear arithmetic (scaling by fluent)", s.line, s.col);
      if (op == "scale-down" && rhs.constant == 0)
        throw ParseError("scale-down by zero", s.line, s.col);
      Rat k = op == "scale-up" ? rhs.constant : Rat(1) / rhs.constant;
      e.expr.terms.emplace_back(e.atom, k);
    }
    out.push_back(std::move(e));
    return;
  }
  LiftedEffect e;
  e.kind = LiftedEffect::PredSet;
  e.atom = parse_atom(s, ctx);
  if (!ctx.dom->predicates.count(e.atom.pred))
    throw ParseError("unknown predicate " + e.atom.pred, s.line, s.col);
  out.push_back(std::move(e));
}

// :condition of a durative action: (at start ...) / (over all ...) / (at end ...)
inline void parse_durative_condition(const Sexpr& s, const ActionContext& ctx, LiftedAction& a) {
  expect_list(s, "durative condition");
  if (s.size() == 0) return;
  const std::string op = s.head();
  if (op == "and") {
    for (size_t i = 1; i < s.size(); ++i) parse_durative_condition(s[i], ctx, a);
    return;
  }
  if (op == "at" && s.size() == 3 && s[1].is_atom) {
    if (s[1].atom == "start") return parse_condition_into(s[2], ctx, a.cond_start);
    if (s[1].atom == "end") return parse_condition_into(s[2], ctx, a.cond_end);
  }
  if (op == "over" && s.size() == 3 && s[1].is_atom && s[1].atom == "all")
    return parse_condition_into(s[2], ctx, a.cond_over);
  throw ParseError("expected (at start ...), (over all ...) or (at end ...)", s.line, s.col);
}

inline void parse_durative_effect(const Sexpr& s, const ActionContext& ctx, LiftedAction& a) {
  expect_list(s, "durative effect");
  if (s.size() == 0) return;
  const std::string op = s.head();
  if (op == "and") {
    for (size_t i = 1; i < s.size(); ++i) parse_durative_effect(s[i], ctx, a);
    return;
  }
  if (op == "at" && s.size() == 3 && s[1].is_atom) {
    if (s[1].atom == "start") return parse_effect_into(s[2], ctx, a.eff_start);
    if (s[1].atom == "end") return parse_effect_into(s[2], ctx, a.eff_end);
  }
  throw ParseError("expected (at start ...) or (at end ...) effect", s.line, s.col);
}

inline void parse_duration(const Sexpr& s, const ActionContext& ctx, LiftedAction& a,
                           bool* has_lo, bool* has_hi) {
  expect_list(s, "duration constraint");
  if (s.size() == 0) return;
  const std::string op = s.head();
  if (op == "and") {
    for (size_t i = 1; i < s.size(); ++i) parse_duration(s[i], ctx, a, has_lo, has_hi);
    return;
  }
  if (op == "at" && s.size() == 3) return parse_duration(s[2], ctx, a, has_lo, has_hi);
  if ((op == "=" || op == "<=" || op == ">=") && s.size() == 3 && s[1].is_atom &&
      s[1].atom == "?duration") {
    LiftedLinear e = parse_expr(s[2], ctx);
    if (!e.terms.empty())
      throw UnsupportedFeature("fluent-dependent duration", s.line, s.col);
    if (op == "=" || op == ">=") {
      a.dur_lo = e.constant;
      *has_lo = true;
    }
    if (op == "=" || op == "<=") {
      a.dur_hi = e.constant;
      *has_hi = true;
    }
    return;
  }
  throw ParseError("unsupported duration constraint", s.line, s.col);
}

inline const Sexpr* find_section(const Sexpr& form, const std::string& key, size_t from,
                                 size_t* at = nullptr) {
  for (size_t i = from; i < form.size(); ++i) {
    if (form[i].is_atom && form[i].atom == key && i + 1 < form.size()) {
      if (at) *at = i;
      return &form[i + 1];
    }
  }
  return nullptr;
}

}  // namespace detail

inline Domain parse_domain(const std::string& text) {
  auto tops = parse_sexprs(text, /*lowercase=*/true);
  if (tops.size() != 1 || tops[0].head() != "define")
    throw ParseError("expected a single (define (domain ...) ...) form", 1, 1);
  const Sexpr& root = tops[0];
  if (root.size() < 2 || root[1].head() != "domain")
    throw ParseError("expected (domain <name>)", root.line, root.col);
  Domain dom;
  dom.name = root[1][1].atom;
  dom.types["object"] = "";
  for (size_t i = 2; i < root.size(); ++i) {
    const Sexpr& sec = root[i];
    const std::string key = sec.head();
    if (key == ":requirements") {
      static const std::set<std::string> supported = {
          ":strips",         ":typing",
          ":fluents",        ":numeric-fluents",
          ":durative-actions", ":duration-inequalities",
          ":negative-preconditions", ":equality"};
      for (size_t j = 1; j < sec.size(); ++j)
        if (!supported.count(sec[j].atom))
          throw UnsupportedFeature("requirement " + sec[j].atom, sec[j].line, sec[j].col);
    } else if (key == ":types") {
      for (auto& tn : detail::parse_typed_list(sec, 1)) {
        dom.types[tn.name] = tn.type == "object" ? "" : tn.type;
        if (!dom.types.count(tn.type)) dom.types[tn.type] = "";
      }
    } else if (key == ":constants") {
      dom.constants = detail::parse_typed_list(sec, 1);
    } else if (key == ":predicates") {
      for (size_t j = 1; j < sec.size(); ++j) {
        const Sexpr& p = sec[j];
        auto params = detail::parse_typed_list(p, 1);
        std::vector<std::string> tys;
        for (auto& tn : params) tys.push_back(tn.type);
        dom.predicates[p[0].atom] = tys;
      }
    } else if (key == ":functions") {
      // Typed list of fluent declarations; a trailing "- number" may follow.
      for (size_t j = 1; j < sec.size(); ++j) {
        const Sexpr& f = sec[j];
        if (f.is_atom) {
          if (f.atom == "-" && j + 1 < sec.size() && sec[j + 1].atom == "number") {
            ++j;
            continue;
          }
          throw ParseError("malformed :functions section", f.line, f.col);
        }
        auto params = detail::parse_typed_list(f, 1);
        std::vector<std::string> tys;
        for (auto& tn : params) tys.push_back(tn.type);
        dom.functions[f[0].atom] = tys;
      }
    } else if (key == ":durative-action" || key == ":action") {
      LiftedAction act;
      act.durative = key == ":durative-action";
      act.name = sec[1].atom;
      const Sexpr* params = detail::find_section(sec, ":parameters", 2);
      act.params = params ? detail::parse_typed_list(*params) : std::vector<TypedName>{};
      detail::ActionContext ctx{&dom, &act.params};
      if (act.durative) {
        const Sexpr* dur = detail::find_section(sec, ":duration", 2);
        if (!dur) throw ParseError("durative action without :duration", sec.line, sec.col);
        bool has_lo = false, has_hi = false;
        detail::parse_duration(*dur, ctx, act, &has_lo, &has_hi);
        if (!has_lo || !has_hi)
          throw ParseError("duration must pin both bounds", dur->line, dur->col);
        if (act.dur_lo <= 0 || act.dur_lo > act.dur_hi)
          throw ParseError("duration bounds must satisfy 0 < L <= U", dur->line, dur->col);
        if (const Sexpr* cond = detail::find_section(sec, ":condition", 2))
          detail::parse_durative_condition(*cond, ctx, act);
        if (const Sexpr* eff = detail::find_section(sec, ":effect", 2))
          detail::parse_durative_effect(*eff, ctx, act);
      } else {
        if (const Sexpr* pre = detail::find_section(sec, ":precondition", 2))
          detail::parse_condition_into(*pre, ctx, act.cond_start);
        if (const Sexpr* eff = detail::find_section(sec, ":effect", 2))
          detail::parse_effect_into(*eff, ctx, act.eff_start);
      }
      dom.actions.push_back(std::move(act));
    } else if (!key.empty()) {
      throw UnsupportedFeature("domain section " + key, sec.line, sec.col);
    }
  }
  return dom;
}

inline Instance parse_instance(const std::string& text, const Domain& dom) {
  auto tops = parse_sexprs(text, /*lowercase=*/true);
  if (tops.size() != 1 || tops[0].head() != "define")
    throw ParseError("expected a single (define (problem ...) ...) form", 1, 1);
  const Sexpr& root = tops[0];
  if (root.size() < 2 || root[1].head() != "problem")
    throw ParseError("expected (problem <name>)", root.line, root.col);
  Instance ins;
  ins.name = root[1][1].atom;
  std::vector<TypedName> no_params;
  detail::ActionContext ctx{&dom, &no_params};
  for (size_t i = 2; i < root.size(); ++i) {
    const Sexpr& sec = root[i];
    const std::string key = sec.head();
    if (key == ":domain") {
      ins.domain_name = sec[1].atom;
      if (ins.domain_name != dom.name)
        throw ParseError("problem references domain " + ins.domain_name + ", expected " +
                             dom.name,
                         sec.line, sec.col);
    } else if (key == ":objects") {
      ins.objects = detail::parse_typed_list(sec, 1);
    } else if (key == ":init") {
      for (size_t j = 1; j < sec.size(); ++j) {
        const Sexpr& f = sec[j];
        if (f.head() == "=") {
          Atom a = detail::parse_atom(f[1], ctx);
          if (!dom.functions.count(a.pred))
            throw ParseError("unknown function " + a.pred, f.line, f.col);
          if (!detail::is_number(f[2]))
            throw ParseError("initial fluent value must be a number", f.line, f.col);
          ins.init_nums.emplace_back(std::move(a), rat(f[2].atom));
        } else if (f.head() == "not") {
          Atom a = detail::parse_atom(f[1], ctx);
          ins.init_bools.emplace_back(std::move(a), false);
        } else {
          Atom a = detail::parse_atom(f, ctx);
          if (!dom.predicates.count(a.pred))
            throw ParseError("unknown predicate " + a.pred, f.line, f.col);
          ins.init_bools.emplace_back(std::move(a), true);
        }
      }
    } else if (key == ":goal") {
      detail::parse_condition_into(sec[1], ctx, ins.goal);
    } else if (key == ":metric") {
      throw UnsupportedFeature("metric optimization", sec.line, sec.col);
    } else if (!key.empty()) {
      throw UnsupportedFeature("problem section " + key, sec.line, sec.col);
    }
  }
  return ins;
}

// ---------------------------------------------------------------------------
// Grounding

struct GroundOptions {
  // Diagnostic cap on the number of grounded durative actions.
  long max_actions = 100000;
};

namespace detail {

inline std::string ground_name(const std::string& head, const std::vector<std::string>& args) {
  std::string s = head;
  for (const auto& a : args) s += " " + a;
  return s;
}

struct Grounder {
  const Domain& dom;
  const Instance& ins;
  TemporalNumericProblem out;
  std::map<std::string, std::string> object_type;

  explicit Grounder(const Domain& d, const Instance& i) : dom(d), ins(i) {
    for (const auto& o : dom.constants) add_object(o);
    for (const auto& o : ins.objects) add_object(o);
  }

  void add_object(const TypedName& o) {
    if (!dom.types.count(o.type))
      throw ModelError("object " + o.name + " has undeclared type " + o.type);
    object_type[o.name] = o.type;
  }

  std::string resolve(const Atom& a, const std::vector<std::string>& binding) const {
    std::vector<std::string> args;
    for (const auto& t : a.args) {
      if (t.param >= 0)
        args.push_back(binding.at(t.param));
      else {
        if (!object_type.count(t.object)) throw ModelError("undeclared object " + t.object);
        args.push_back(t.object);
      }
    }
    return ground_name(a.pred, args);
  }

  VarId ground_var(const Atom& a, const std::vector<std::string>& binding, VarKind kind) {
    return out.vars.add(resolve(a, binding), kind);
  }

  LinearExpr ground_linear(const LiftedLinear& e, const std::vector<std::string>& binding) {
    LinearExpr g;
    g.constant = e.constant;
    for (const auto& [atom, coeff] : e.terms)
      g.add_term(ground_var(atom, binding, VarKind::Num), coeff);
    return g;
  }

  // Static object equalities are decided per binding, before any grounding.
  bool equalities_hold(const std::vector<LiftedCondition>& conds,
                       const std::vector<std::string>& binding) const {
    for (const auto& c : conds) {
      if (c.kind != LiftedCondition::ObjEq) continue;
      auto val = [&](const Term& t) { return t.param >= 0 ? binding.at(t.param) : t.object; };
      if ((val(c.eq_lhs) == val(c.eq_rhs)) != c.positive) return false;
    }
    return true;
  }

  void ground_conditions(const std::vector<LiftedCondition>& conds,
                         const std::vector<std::string>& binding,
                         std::vector<Condition>& out_conds) {
    for (const auto& c : conds) {
      switch (c.kind) {
        case LiftedCondition::ObjEq:
          break;  // already decided
        case LiftedCondition::Pred:
          out_conds.push_back(
              Condition::bool_eq(ground_var(c.atom, binding, VarKind::Bool), c.positive));
          break;
        case LiftedCondition::Cmp:
          out_conds.push_back(Condition::numeric(ground_linear(c.expr, binding), c.op));
          break;
      }
    }
  }

  void ground_effects(const std::vector<LiftedEffect>& effs,
                      const std::vector<std::string>& binding, std::vector<Effect>& out_effs) {
    for (const auto& e : effs) {
      if (e.kind == LiftedEffect::PredSet)
        out_effs.push_back(
            Effect::bool_assign(ground_var(e.atom, binding, VarKind::Bool), e.value));
      else
        out_effs.push_back(Effect::num_assign(ground_var(e.atom, binding, VarKind::Num),
                                              ground_linear(e.expr, binding)));
    }
  }

  void instantiate(const LiftedAction& act, const std::vector<std::string>& binding,
                   const GroundOptions& opts) {
    if (!equalities_hold(act.cond_start, binding) || !equalities_hold(act.cond_over, binding) ||
        !equalities_hold(act.cond_end, binding))
      return;
    DurativeAction da;
    da.id = ground_name(act.name, binding);
    da.instantaneous = !act.durative;
    da.dur_lo = act.dur_lo;
    da.dur_hi = act.dur_hi;
    da.start.id = da.id + ":start";
    da.lasting.id = da.id + ":lasting";
    da.end.id = da.id + ":end";
    ground_conditions(act.cond_start, binding, da.start.pre);
    ground_conditions(act.cond_over, binding, da.lasting.pre);
    ground_conditions(act.cond_end, binding, da.end.pre);
    ground_effects(act.eff_start, binding, da.start.eff);
    ground_effects(act.eff_end, binding, da.end.eff);
    out.actions.push_back(std::move(da));
    if ((long)out.actions.size() > opts.max_actions)
      throw ModelError("grounding explosion: more than " + std::to_string(opts.max_actions) +
                       " actions");
  }

  void enumerate(const LiftedAction& act, std::vector<std::string>& binding, size_t param,
                 const GroundOptions& opts) {
    if (param == act.params.size()) {
      instantiate(act, binding, opts);
      return;
    }
    const std::string& want = act.params[param].type;
    for (const auto& [name, ty] : object_type) {
      if (!dom.is_subtype(ty, want)) continue;
      binding.push_back(name);
      enumerate(act, binding, param + 1, opts);
      binding.pop_back();
    }
  }

  TemporalNumericProblem run(const GroundOptions& opts) {
    out.name = ins.name;
    for (const auto& act : dom.actions) {
      std::vector<std::string> binding;
      enumerate(act, binding, 0, opts);
    }
    // Goals may mention additional variables.
    std::vector<std::string> empty_binding;
    if (!equalities_hold(ins.goal, empty_binding))
      throw ModelError("goal contains a false object equality");
    ground_conditions(ins.goal, empty_binding, out.goals);
    // Initial assignment: booleans default to false (closed world), numeric
    // fluents without a declared value are a hard error.
    std::map<std::string, bool> init_bool;
    std::map<std::string, Rat> init_num;
    for (const auto& [atom, val] : ins.init_bools)
      init_bool[resolve(atom, empty_binding)] = val;
    for (const auto& [atom, val] : ins.init_nums) {
      std::string name = resolve(atom, empty_binding);
      if (init_num.count(name)) throw ModelError("duplicate initial value for " + name);
      init_num[name] = val;
    }
    // Init may mention variables nobody acts on; keep them in the state.
    for (const auto& [name, val] : init_bool) out.vars.add(name, VarKind::Bool);
    for (const auto& [name, val] : init_num) out.vars.add(name, VarKind::Num);
    for (VarId v = 0; v < out.vars.size(); ++v) {
      const std::string& name = out.vars.name(v);
      if (out.vars.is_bool(v)) {
        auto it = init_bool.find(name);
        out.init.values.emplace_back(it != init_bool.end() && it->second);
      } else {
        auto it = init_num.find(name);
        if (it == init_num.end())
          throw ModelError("numeric fluent without initial value: " + name);
        out.init.values.emplace_back(it->second);
      }
    }
    out.finalize();
    return std::move(out);
  }
};

}  // namespace detail

inline TemporalNumericProblem ground(const Domain& dom, const Instance& ins,
                                     const GroundOptions& opts = {}) {
  detail::Grounder g(dom, ins);
  return g.run(opts);
}

}  // namespace pddl

// Convenience: parse both files and ground.
inline TemporalNumericProblem load_problem(const std::string& domain_text,
                                           const std::string& problem_text,
                                           const pddl::GroundOptions& opts = {}) {
  pddl::Domain dom = pddl::parse_domain(domain_text);
  pddl::Instance ins = pddl::parse_instance(problem_text, dom);
  return pddl::ground(dom, ins, opts);
}

}  // namespace tpp

#endif  // TPP_PDDL_HPP
