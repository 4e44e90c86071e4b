#ifndef TPP_FORMULA_HPP
#define TPP_FORMULA_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "tpp/problem.hpp"
#include "tpp/rational.hpp"

// Sorted expression DAG (Bool / Int / Real) with hash-consing: identical
// subterms share one node, so structural equality is id equality and sigma
// chains stay linear in size. One manager per encoding; not thread-safe.

namespace tpp {

enum class Sort : uint8_t { Bool, Int, Real };

enum class Op : uint8_t {
  BoolConst, NumConst, Var,
  Not, And, Or, Implies, Iff, Ite,
  Add, Sub, Mul, ToReal,
  Lt, Le, Eq, Ge, Gt,
};

struct Formula {
  uint32_t id = UINT32_MAX;
  bool valid() const { return id != UINT32_MAX; }
  bool operator==(const Formula&) const = default;
};

class FormulaManager {
 public:
  struct Node {
    Op op;
    Sort sort;
    std::vector<Formula> kids;
    Rat num;           // NumConst
    bool bval = false; // BoolConst
    int var = -1;      // Var: index into var tables
  };

  // --- leaves ---------------------------------------------------------
  Formula bconst(bool v) { return intern(make(Op::BoolConst, Sort::Bool, {}, Rat(0), v)); }
  Formula tt() { return bconst(true); }
  Formula ff() { return bconst(false); }
  Formula num(const Rat& r, Sort s) {
    Node n = make(Op::NumConst, s, {}, r);
    return intern(std::move(n));
  }
  Formula intnum(long v) { return num(Rat(v), Sort::Int); }
  Formula realnum(const Rat& r) { return num(r, Sort::Real); }

  Formula var(const std::string& name, Sort sort) {
    auto it = var_index_.find(name);
    if (it != var_index_.end()) {
      if (node(var_nodes_[it->second]).sort != sort)
        throw ModelError("variable re-declared with another sort: " + name);
      return var_nodes_[it->second];
    }
    Node n = make(Op::Var, sort, {});
    n.var = (int)var_names_.size();
    Formula f = intern(std::move(n));
    var_index_.emplace(name, (int)var_names_.size());
    var_names_.push_back(name);
    var_nodes_.push_back(f);
    return f;
  }

  // --- boolean connectives --------------------------------------------
  Formula bnot(Formula a) {
    if (op(a) == Op::BoolConst) return bconst(!node(a).bval);
    if (op(a) == Op::Not) return node(a).kids[0];
    return intern(make(Op::Not, Sort::Bool, {a}));
  }
  Formula band(Formula a, Formula b) {
    if (is_true(a)) return b;
    if (is_true(b)) return a;
    if (is_false(a) || is_false(b)) return ff();
    return intern(make(Op::And, Sort::Bool, {a, b}));
  }
  Formula bor(Formula a, Formula b) {
    if (is_false(a)) return b;
    if (is_false(b)) return a;
    if (is_true(a) || is_true(b)) return tt();
    return intern(make(Op::Or, Sort::Bool, {a, b}));
  }
  Formula band_all(const std::vector<Formula>& fs) {
    Formula acc = tt();
    for (Formula f : fs) acc = band(acc, f);
    return acc;
  }
  Formula bor_all(const std::vector<Formula>& fs) {
    Formula acc = ff();
    for (Formula f : fs) acc = bor(acc, f);
    return acc;
  }
  Formula implies(Formula a, Formula b) {
    if (is_true(a)) return b;
    if (is_false(a) || is_true(b)) return tt();
    if (is_false(b)) return bnot(a);
    return intern(make(Op::Implies, Sort::Bool, {a, b}));
  }
  Formula iff(Formula a, Formula b) {
    if (is_true(a)) return b;
    if (is_true(b)) return a;
    if (is_false(a)) return bnot(b);
    if (is_false(b)) return bnot(a);
    return intern(make(Op::Iff, Sort::Bool, {a, b}));
  }
  Formula ite(Formula c, Formula t, Formula e) {
    if (is_true(c)) return t;
    if (is_false(c)) return e;
    if (sort(t) == Sort::Bool || sort(e) == Sort::Bool) {
      if (sort(t) != sort(e)) throw ModelError("ite branch sorts disagree");
      return intern(make(Op::Ite, Sort::Bool, {c, t, e}));
    }
    Sort s = join(t, e);
    return intern(make(Op::Ite, s, {c, coerce(t, s), coerce(e, s)}));
  }

  // --- arithmetic -------------------------------------------------------
  // to_real distributes through arithmetic so that sign/neutral-element
  // normalization in add/mul sees the same shapes in Int and Real contexts.
  // Children are copied out first: builder recursion may grow the node pool.
  Formula to_real(Formula a) {
    if (sort(a) == Sort::Real) return a;
    Op o = op(a);
    if (o == Op::NumConst) return realnum(node(a).num);
    if (o == Op::Add || o == Op::Sub || o == Op::Mul || o == Op::Ite) {
      std::vector<Formula> kids = node(a).kids;
      switch (o) {
        case Op::Add: return add(to_real(kids[0]), to_real(kids[1]));
        case Op::Sub: return sub(to_real(kids[0]), to_real(kids[1]));
        case Op::Mul: return mul(to_real(kids[0]), to_real(kids[1]));
        default: return ite(kids[0], to_real(kids[1]), to_real(kids[2]));
      }
    }
    return intern(make(Op::ToReal, Sort::Real, {a}));
  }

  // add normalizes x + (-c) and x + (-c)*y into subtractions so encoder
  // output reads like the usual algebraic notation.
  Formula add(Formula a, Formula b) {
    Sort s = join(a, b);
    a = coerce(a, s);
    b = coerce(b, s);
    if (is_zero(a)) return b;
    if (is_zero(b)) return a;
    if (op(a) == Op::NumConst && op(b) == Op::NumConst) return num(node(a).num + node(b).num, s);
    if (op(b) == Op::NumConst && node(b).num < 0) return sub(a, num(-node(b).num, s));
    if (op(b) == Op::Mul && op(node(b).kids[0]) == Op::NumConst &&
        node(node(b).kids[0]).num < 0)
      return sub(a, mul(num(-node(node(b).kids[0]).num, sort(node(b).kids[0])),
                        node(b).kids[1]));
    return intern(make(Op::Add, s, {a, b}));
  }
  Formula sub(Formula a, Formula b) {
    Sort s = join(a, b);
    a = coerce(a, s);
    b = coerce(b, s);
    if (is_zero(b)) return a;
    if (op(a) == Op::NumConst && op(b) == Op::NumConst) return num(node(a).num - node(b).num, s);
    return intern(make(Op::Sub, s, {a, b}));
  }
  Formula neg(Formula a) { return mul(num(Rat(-1), sort(a)), a); }

  // Constant factors stay on the left; multiplying two non-constant terms
  // marks the manager nonlinear (affects the SMT logic declaration only).
  Formula mul(Formula a, Formula b) {
    if (op(b) == Op::NumConst && op(a) != Op::NumConst) std::swap(a, b);
    Sort s = join(a, b);
    a = coerce(a, s);
    b = coerce(b, s);
    if (op(a) == Op::NumConst) {
      const Rat& k = node(a).num;
      if (k == 0) return num(Rat(0), s);
      if (k == 1) return b;
      if (op(b) == Op::NumConst) return num(k * node(b).num, s);
    } else {
      nonlinear_ = true;
    }
    return intern(make(Op::Mul, s, {a, b}));
  }

  Formula cmp(CmpOp c, Formula a, Formula b) {
    switch (c) {
      case CmpOp::Lt: return lt(a, b);
      case CmpOp::Le: return le(a, b);
      case CmpOp::Eq: return eq(a, b);
      case CmpOp::Ge: return ge(a, b);
      case CmpOp::Gt: return gt(a, b);
    }
    throw std::logic_error("bad cmp");
  }
  Formula lt(Formula a, Formula b) { return compare(Op::Lt, a, b); }
  Formula le(Formula a, Formula b) { return compare(Op::Le, a, b); }
  Formula ge(Formula a, Formula b) { return compare(Op::Ge, a, b); }
  Formula gt(Formula a, Formula b) { return compare(Op::Gt, a, b); }
  Formula eq(Formula a, Formula b) {
    if (sort(a) == Sort::Bool || sort(b) == Sort::Bool) return iff(a, b);
    return compare(Op::Eq, a, b);
  }

  // --- inspection -------------------------------------------------------
  const Node& node(Formula f) const { return nodes_.at(f.id); }
  Op op(Formula f) const { return node(f).op; }
  Sort sort(Formula f) const { return node(f).sort; }
  bool is_true(Formula f) const { return op(f) == Op::BoolConst && node(f).bval; }
  bool is_false(Formula f) const { return op(f) == Op::BoolConst && !node(f).bval; }
  bool is_zero(Formula f) const { return op(f) == Op::NumConst && node(f).num == 0; }
  size_t node_count() const { return nodes_.size(); }
  bool nonlinear() const { return nonlinear_; }
  const std::string& var_name(Formula f) const { return var_names_.at(node(f).var); }
  const std::vector<std::string>& var_names() const { return var_names_; }
  Sort var_sort(int var) const { return node(var_nodes_.at(var)).sort; }

  // --- evaluation -------------------------------------------------------
  using Value = std::variant<bool, Rat>;
  // Assignment by variable index (aligned with var_names()).
  Value eval(Formula f, const std::vector<Value>& assignment) const {
    std::unordered_map<uint32_t, Value> memo;
    return eval_rec(f, assignment, memo);
  }

  // Capture-free substitution of variables by formulas; unmapped variables
  // stay themselves. Results are rebuilt through the normalizing builders.
  Formula substitute(Formula f, const std::unordered_map<uint32_t, Formula>& map) {
    std::unordered_map<uint32_t, Formula> memo;
    return subst_rec(f, map, memo);
  }

 private:
  Node make(Op o, Sort s, std::vector<Formula> kids, Rat r = Rat(0), bool b = false) {
    Node n;
    n.op = o;
    n.sort = s;
    n.kids = std::move(kids);
    n.num = std::move(r);
    n.bval = b;
    return n;
  }

  Sort join(Formula a, Formula b) const {
    Sort sa = sort(a), sb = sort(b);
    if (sa == Sort::Bool || sb == Sort::Bool)
      throw ModelError("arithmetic on boolean term");
    return (sa == Sort::Real || sb == Sort::Real) ? Sort::Real : Sort::Int;
  }
  Sort join(Formula a) const { return sort(a); }
  Formula coerce(Formula f, Sort s) {
    if (sort(f) == s || sort(f) == Sort::Bool) return f;
    if (s == Sort::Real) return to_real(f);
    throw ModelError("cannot narrow real term to int");
  }

  Formula compare(Op o, Formula a, Formula b) {
    Sort s = join(a, b);
    a = coerce(a, s);
    b = coerce(b, s);
    if (op(a) == Op::NumConst && op(b) == Op::NumConst) {
      const Rat &x = node(a).num, &y = node(b).num;
      bool v = o == Op::Lt   ? x < y
               : o == Op::Le ? x <= y
               : o == Op::Eq ? x == y
               : o == Op::Ge ? x >= y
                             : x > y;
      return bconst(v);
    }
    return intern(make(o, Sort::Bool, {a, b}));
  }

  struct Key {
    Op op;
    Sort sort;
    std::vector<uint32_t> kids;
    std::string payload;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    size_t operator()(const Key& k) const {
      size_t h = std::hash<int>()((int)k.op * 8 + (int)k.sort);
      for (uint32_t c : k.kids) h = h * 1000003u + c;
      h = h * 1000003u + std::hash<std::string>()(k.payload);
      return h;
    }
  };

  Formula intern(Node n) {
    Key k;
    k.op = n.op;
    k.sort = n.sort;
    for (Formula f : n.kids) k.kids.push_back(f.id);
    if (n.op == Op::NumConst)
      k.payload = n.num.str();
    else if (n.op == Op::BoolConst)
      k.payload = n.bval ? "t" : "f";
    else if (n.op == Op::Var)
      k.payload = "v" + std::to_string(n.var);
    auto it = table_.find(k);
    if (it != table_.end()) return {it->second};
    uint32_t id = (uint32_t)nodes_.size();
    nodes_.push_back(std::move(n));
    table_.emplace(std::move(k), id);
    return {id};
  }

  Value eval_rec(Formula f, const std::vector<Value>& asg,
                 std::unordered_map<uint32_t, Value>& memo) const {
    auto it = memo.find(f.id);
    if (it != memo.end()) return it->second;
    const Node& n = node(f);
    auto rat_of = [&](Formula g) { return std::get<Rat>(eval_rec(g, asg, memo)); };
    auto bool_of = [&](Formula g) { return std::get<bool>(eval_rec(g, asg, memo)); };
    Value v;
    switch (n.op) {
      case Op::BoolConst: v = n.bval; break;
      case Op::NumConst: v = n.num; break;
      case Op::Var:
        if (n.var >= (int)asg.size()) throw ModelError("unassigned variable in evaluation");
        v = asg[n.var];
        break;
      case Op::Not: v = !bool_of(n.kids[0]); break;
      case Op::And: v = bool_of(n.kids[0]) && bool_of(n.kids[1]); break;
      case Op::Or: v = bool_of(n.kids[0]) || bool_of(n.kids[1]); break;
      case Op::Implies: v = !bool_of(n.kids[0]) || bool_of(n.kids[1]); break;
      case Op::Iff: v = bool_of(n.kids[0]) == bool_of(n.kids[1]); break;
      case Op::Ite:
        v = bool_of(n.kids[0]) ? eval_rec(n.kids[1], asg, memo)
                               : eval_rec(n.kids[2], asg, memo);
        break;
      case Op::Add: v = rat_of(n.kids[0]) + rat_of(n.kids[1]); break;
      case Op::Sub: v = rat_of(n.kids[0]) - rat_of(n.kids[1]); break;
      case Op::Mul: v = rat_of(n.kids[0]) * rat_of(n.kids[1]); break;
      case Op::ToReal: v = rat_of(n.kids[0]); break;
      case Op::Lt: v = rat_of(n.kids[0]) < rat_of(n.kids[1]); break;
      case Op::Le: v = rat_of(n.kids[0]) <= rat_of(n.kids[1]); break;
      case Op::Eq: v = rat_of(n.kids[0]) == rat_of(n.kids[1]); break;
      case Op::Ge: v = rat_of(n.kids[0]) >= rat_of(n.kids[1]); break;
      case Op::Gt: v = rat_of(n.kids[0]) > rat_of(n.kids[1]); break;
    }
    memo.emplace(f.id, v);
    return v;
  }

  Formula subst_rec(Formula f, const std::unordered_map<uint32_t, Formula>& map,
                    std::unordered_map<uint32_t, Formula>& memo) {
    if (auto it = map.find(f.id); it != map.end()) return it->second;
    auto mit = memo.find(f.id);
    if (mit != memo.end()) return mit->second;
    const Node n = node(f);  // copy: nodes_ may grow below
    Formula out = f;
    if (!n.kids.empty()) {
      std::vector<Formula> kids;
      kids.reserve(n.kids.size());
      bool changed = false;
      for (Formula k : n.kids) {
        Formula nk = subst_rec(k, map, memo);
        changed |= !(nk == k);
        kids.push_back(nk);
      }
      if (changed) out = rebuild(n.op, kids);
    }
    memo.emplace(f.id, out);
    return out;
  }

  Formula rebuild(Op o, const std::vector<Formula>& k) {
    switch (o) {
      case Op::Not: return bnot(k[0]);
      case Op::And: return band(k[0], k[1]);
      case Op::Or: return bor(k[0], k[1]);
      case Op::Implies: return implies(k[0], k[1]);
      case Op::Iff: return iff(k[0], k[1]);
      case Op::Ite: return ite(k[0], k[1], k[2]);
      case Op::Add: return add(k[0], k[1]);
      case Op::Sub: return sub(k[0], k[1]);
      case Op::Mul: return mul(k[0], k[1]);
      case Op::ToReal: return to_real(k[0]);
      case Op::Lt: return lt(k[0], k[1]);
      case Op::Le: return le(k[0], k[1]);
      case Op::Eq: return compare(Op::Eq, k[0], k[1]);
      case Op::Ge: return ge(k[0], k[1]);
      case Op::Gt: return gt(k[0], k[1]);
      default: throw std::logic_error("rebuild on leaf");
    }
  }

  std::vector<Node> nodes_;
  std::unordered_map<Key, uint32_t, KeyHash> table_;
  std::unordered_map<std::string, int> var_index_;
  std::vector<std::string> var_names_;
  std::vector<Formula> var_nodes_;
  bool nonlinear_ = false;
};

// Deterministic SMT-LIB2 rendering of one formula.
inline void print_smt(std::string& out, const FormulaManager& m, Formula f) {
  const auto& n = m.node(f);
  auto walk = [&m](std::string& o, Formula g, auto&& self) -> void {
    const auto& nd = m.node(g);
    switch (nd.op) {
      case Op::BoolConst: o += nd.bval ? "true" : "false"; return;
      case Op::NumConst: {
        const Rat& r = nd.num;
        bool is_int = nd.sort == Sort::Int;
        BigInt p = numerator(r), q = denominator(r);
        std::string core;
        if (q == 1)
          core = (p < 0 ? -p : p).str() + (is_int ? "" : ".0");
        else
          core = "(/ " + (p < 0 ? -p : p).str() + ".0 " + q.str() + ".0)";
        o += (p < 0) ? "(- " + core + ")" : core;
        return;
      }
      case Op::Var: o += m.var_name(g); return;
      default: break;
    }
    static const char* names[] = {"",   "",        "",      "not", "and", "or", "=>",
                                  "=",  "ite",     "+",     "-",   "*",   "to_real",
                                  "<",  "<=",      "=",     ">=",  ">"};
    o += "(";
    o += names[(int)nd.op];
    for (Formula k : nd.kids) {
      o += " ";
      self(o, k, self);
    }
    o += ")";
  };
  walk(out, f, walk);
  (void)n;
}

inline std::string to_smt(const FormulaManager& m, Formula f) {
  std::string s;
  print_smt(s, m, f);
  return s;
}

}  // namespace tpp

#endif  // TPP_FORMULA_HPP
