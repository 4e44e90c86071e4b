#ifndef TPP_PROBLEM_HPP
#define TPP_PROBLEM_HPP

#include <algorithm>
#include <cassert>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "tpp/rational.hpp"

namespace tpp {

struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using VarId = int;

enum class VarKind { Bool, Num };

// Grounded state variables. Names are unique; ids are dense indices.
class VariableTable {
 public:
  VarId add(const std::string& name, VarKind kind) {
    auto [it, inserted] = index_.emplace(name, (VarId)entries_.size());
    if (!inserted) {
      if (entries_[it->second].kind != kind)
        throw ModelError("variable declared with two kinds: " + name);
      return it->second;
    }
    entries_.push_back({name, kind});
    return it->second;
  }
  std::optional<VarId> find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  const std::string& name(VarId v) const { return entries_.at(v).name; }
  VarKind kind(VarId v) const { return entries_.at(v).kind; }
  bool is_bool(VarId v) const { return kind(v) == VarKind::Bool; }
  int size() const { return (int)entries_.size(); }

  std::vector<VarId> bool_vars() const { return of_kind(VarKind::Bool); }
  std::vector<VarId> num_vars() const { return of_kind(VarKind::Num); }

  bool operator==(const VariableTable& o) const { return entries_ == o.entries_; }

 private:
  struct Entry {
    std::string name;
    VarKind kind;
    bool operator==(const Entry&) const = default;
  };
  std::vector<VarId> of_kind(VarKind k) const {
    std::vector<VarId> out;
    for (VarId v = 0; v < (int)entries_.size(); ++v)
      if (entries_[v].kind == k) out.push_back(v);
    return out;
  }
  std::vector<Entry> entries_;
  std::map<std::string, VarId> index_;
};

// constant + sum of coeff*var, normalized: terms sorted by var id, no zero
// coefficients, no duplicate variables.
struct LinearExpr {
  Rat constant{0};
  std::vector<std::pair<VarId, Rat>> terms;

  LinearExpr() = default;
  explicit LinearExpr(Rat c) : constant(std::move(c)) {}
  static LinearExpr var(VarId v) {
    LinearExpr e;
    e.terms.emplace_back(v, Rat(1));
    return e;
  }

  Rat coeff(VarId v) const {
    for (const auto& [w, c] : terms)
      if (w == v) return c;
    return Rat(0);
  }
  bool mentions(VarId v) const { return coeff(v) != 0; }
  bool is_constant() const { return terms.empty(); }

  void add_term(VarId v, const Rat& c) {
    for (auto it = terms.begin(); it != terms.end(); ++it) {
      if (it->first == v) {
        it->second += c;
        if (it->second == 0) terms.erase(it);
        return;
      }
    }
    if (c != 0) {
      terms.emplace_back(v, c);
      std::sort(terms.begin(), terms.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
    }
  }

  LinearExpr& operator+=(const LinearExpr& o) {
    constant += o.constant;
    for (const auto& [v, c] : o.terms) add_term(v, c);
    return *this;
  }
  LinearExpr& operator*=(const Rat& k) {
    if (k == 0) return *this = LinearExpr();
    constant *= k;
    for (auto& [v, c] : terms) c *= k;
    return *this;
  }
  friend LinearExpr operator+(LinearExpr a, const LinearExpr& b) { return a += b; }
  friend LinearExpr operator*(LinearExpr a, const Rat& k) { return a *= k; }
  friend LinearExpr operator-(LinearExpr a, const LinearExpr& b) {
    LinearExpr nb = b;
    nb *= Rat(-1);
    return a += nb;
  }
  bool operator==(const LinearExpr&) const = default;
};

enum class CmpOp { Lt, Le, Eq, Ge, Gt };

inline const char* cmp_op_name(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Eq: return "=";
    case CmpOp::Ge: return ">=";
    case CmpOp::Gt: return ">";
  }
  return "?";
}

inline bool cmp_holds(const Rat& lhs, CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return lhs < 0;
    case CmpOp::Le: return lhs <= 0;
    case CmpOp::Eq: return lhs == 0;
    case CmpOp::Ge: return lhs >= 0;
    case CmpOp::Gt: return lhs > 0;
  }
  return false;
}

// Atomic condition: v = T | v = F | psi cmp 0.
struct Condition {
  enum Kind { BoolEq, Numeric } kind;
  VarId var = -1;    // BoolEq
  bool value = true; // BoolEq
  LinearExpr expr;   // Numeric, compared against 0
  CmpOp op = CmpOp::Ge;

  static Condition bool_eq(VarId v, bool val) {
    Condition c;
    c.kind = BoolEq;
    c.var = v;
    c.value = val;
    return c;
  }
  static Condition numeric(LinearExpr e, CmpOp op) {
    Condition c;
    c.kind = Numeric;
    c.expr = std::move(e);
    c.op = op;
    return c;
  }
  bool mentions(VarId v) const {
    return kind == BoolEq ? var == v : expr.mentions(v);
  }
  bool operator==(const Condition&) const = default;
};

// Effect: v := T | v := F | x := psi. `linear_increment` caches whether the
// assignment has shape x := x + psi' with x absent from psi'.
struct Effect {
  enum Kind { BoolAssign, NumAssign } kind;
  VarId var = -1;
  bool value = true;  // BoolAssign
  LinearExpr expr;    // NumAssign: full right-hand side
  bool linear_increment = false;

  static Effect bool_assign(VarId v, bool val) {
    Effect e;
    e.kind = BoolAssign;
    e.var = v;
    e.value = val;
    return e;
  }
  static Effect num_assign(VarId v, LinearExpr rhs) {
    Effect e;
    e.kind = NumAssign;
    e.var = v;
    e.expr = std::move(rhs);
    e.linear_increment = e.compute_linear_increment();
    return e;
  }
  bool compute_linear_increment() const {
    return kind == NumAssign && expr.coeff(var) == 1;
  }
  // psi' of x := x + psi'. Only meaningful for linear increments.
  LinearExpr increment_delta() const {
    assert(linear_increment);
    LinearExpr d = expr;
    d.add_term(var, Rat(-1));
    return d;
  }
  bool operator==(const Effect&) const = default;
};

enum class SnapRole { Start, Lasting, End };

inline const char* snap_role_name(SnapRole r) {
  switch (r) {
    case SnapRole::Start: return "start";
    case SnapRole::Lasting: return "lasting";
    case SnapRole::End: return "end";
  }
  return "?";
}

// Instantaneous action: the start, lasting or end part of a durative action.
struct SnapAction {
  std::string id;
  std::vector<Condition> pre;
  std::vector<Effect> eff;
  int owner = -1;  // index into TemporalNumericProblem::actions
  SnapRole role = SnapRole::Start;
  int gid = -1;  // dense id across all snap actions of the problem

  bool assigns(VarId v) const {
    for (const auto& e : eff)
      if (e.var == v) return true;
    return false;
  }
  const Effect* effect_on(VarId v) const {
    for (const auto& e : eff)
      if (e.var == v) return &e;
    return nullptr;
  }
  bool pre_mentions(VarId v) const {
    for (const auto& c : pre)
      if (c.mentions(v)) return true;
    return false;
  }
  bool operator==(const SnapAction&) const = default;
};

struct DurativeAction {
  std::string id;
  SnapAction start, lasting, end;
  Rat dur_lo{0}, dur_hi{0};
  // True for plain instantaneous actions wrapped as durative ones: no lasting
  // conditions, empty end, duration pinned to zero.
  bool instantaneous = false;

  bool operator==(const DurativeAction&) const = default;
};

using StateValue = std::variant<bool, Rat>;

// Total assignment over all declared variables.
struct State {
  std::vector<StateValue> values;

  bool get_bool(VarId v) const { return std::get<bool>(values.at(v)); }
  const Rat& get_num(VarId v) const { return std::get<Rat>(values.at(v)); }
  void set(VarId v, StateValue val) { values.at(v) = std::move(val); }

  Rat eval(const LinearExpr& e) const {
    Rat acc = e.constant;
    for (const auto& [v, c] : e.terms) acc += c * get_num(v);
    return acc;
  }
  bool satisfies(const Condition& c) const {
    if (c.kind == Condition::BoolEq) return get_bool(c.var) == c.value;
    return cmp_holds(eval(c.expr), c.op);
  }
  bool operator==(const State&) const = default;
};

struct TemporalNumericProblem {
  std::string name;
  VariableTable vars;
  std::vector<DurativeAction> actions;
  State init;
  std::vector<Condition> goals;

  const DurativeAction& action(int i) const { return actions.at(i); }

  // All snap actions in a stable order (start, lasting, end per action),
  // with gid fields assigned by finalize().
  std::vector<const SnapAction*> snap_actions() const {
    std::vector<const SnapAction*> out;
    for (const auto& a : actions) {
      out.push_back(&a.start);
      out.push_back(&a.lasting);
      out.push_back(&a.end);
    }
    return out;
  }

  void finalize() {
    check();
    for (int i = 0; i < (int)actions.size(); ++i) {
      actions[i].start.owner = actions[i].lasting.owner = actions[i].end.owner = i;
      actions[i].start.role = SnapRole::Start;
      actions[i].lasting.role = SnapRole::Lasting;
      actions[i].end.role = SnapRole::End;
      actions[i].start.gid = 3 * i;
      actions[i].lasting.gid = 3 * i + 1;
      actions[i].end.gid = 3 * i + 2;
    }
  }

  bool goal_holds_initially() const {
    for (const auto& g : goals)
      if (!init.satisfies(g)) return false;
    return true;
  }

  bool operator==(const TemporalNumericProblem& o) const {
    return name == o.name && vars == o.vars && actions == o.actions && init == o.init &&
           goals == o.goals;
  }

 private:
  void check() const {
    if ((int)init.values.size() != vars.size())
      throw ModelError("initial state is not total");
    for (VarId v = 0; v < vars.size(); ++v) {
      bool is_b = std::holds_alternative<bool>(init.values[v]);
      if (is_b != vars.is_bool(v))
        throw ModelError("initial value kind mismatch for " + vars.name(v));
    }
    for (const auto& a : actions) {
      if (!a.lasting.eff.empty())
        throw ModelError("lasting action with effects: " + a.id);
      if (a.dur_lo > a.dur_hi)
        throw ModelError("duration lower bound above upper bound: " + a.id);
      if (!a.instantaneous && a.dur_lo <= 0)
        throw ModelError("non-positive duration lower bound: " + a.id);
      for (const SnapAction* s : {&a.start, &a.lasting, &a.end}) {
        std::vector<VarId> assigned;
        for (const auto& e : s->eff) {
          if (std::count(assigned.begin(), assigned.end(), e.var))
            throw ModelError("variable assigned twice by " + s->id);
          assigned.push_back(e.var);
          if (e.kind == Effect::NumAssign && e.linear_increment != e.compute_linear_increment())
            throw ModelError("inconsistent linear-increment flag in " + s->id);
        }
      }
    }
  }
};

}  // namespace tpp

#endif  // TPP_PROBLEM_HPP
