#ifndef TPP_ANALYSIS_HPP
#define TPP_ANALYSIS_HPP

#include <vector>

#include "tpp/problem.hpp"

// Syntactic interference / mutex between snap actions and rolling
// eligibility of durative actions.

namespace tpp {

// True when every occurrence of v in act's effects sits inside a linear
// increment of v itself (the only numeric shape that commutes).
inline bool occurrences_within_increments(const SnapAction& act, VarId v) {
  for (const auto& e : act.eff) {
    if (e.var == v) {
      if (e.kind != Effect::NumAssign || !e.linear_increment) return false;
    } else if (e.kind == Effect::NumAssign && e.expr.mentions(v)) {
      return false;  // v feeds someone else's assignment
    }
  }
  return true;
}

// a interferes with a2 if some variable assigned by a (1) occurs in the
// preconditions of a2, or (2) is a Boolean assigned by a2 with the opposite
// polarity, or (3) is a numeric that occurs in a2's effects outside matching
// linear increments.
inline bool interferes(const SnapAction& a, const SnapAction& a2, const VariableTable& vars) {
  for (const auto& e : a.eff) {
    VarId v = e.var;
    if (a2.pre_mentions(v)) return true;
    if (vars.is_bool(v)) {
      const Effect* other = a2.effect_on(v);
      if (other && other->value != e.value) return true;
    } else {
      bool occurs_in_a2 = a2.assigns(v);
      for (const auto& e2 : a2.eff)
        if (e2.kind == Effect::NumAssign && e2.expr.mentions(v)) occurs_in_a2 = true;
      if (occurs_in_a2 &&
          !(occurrences_within_increments(a, v) && occurrences_within_increments(a2, v)))
        return true;
    }
  }
  return false;
}

inline bool mutex(const SnapAction& a, const SnapAction& b, const VariableTable& vars) {
  return interferes(a, b, vars) || interferes(b, a, vars);
}

// Precomputed symmetric mutex relation keyed by snap-action gid; the time
// encoding queries it O(k^2) times.
class MutexMatrix {
 public:
  explicit MutexMatrix(const TemporalNumericProblem& p) {
    auto snaps = p.snap_actions();
    n_ = (int)snaps.size();
    bits_.assign((size_t)n_ * n_, 0);
    for (int i = 0; i < n_; ++i)
      for (int j = i; j < n_; ++j) {
        bool m = mutex(*snaps[i], *snaps[j], p.vars);
        bits_[(size_t)i * n_ + j] = m;
        bits_[(size_t)j * n_ + i] = m;
      }
  }
  bool operator()(const SnapAction& a, const SnapAction& b) const {
    return bits_[(size_t)a.gid * n_ + b.gid];
  }
  bool at(int gid_a, int gid_b) const { return bits_[(size_t)gid_a * n_ + gid_b]; }
  int size() const { return n_; }

 private:
  int n_ = 0;
  std::vector<uint8_t> bits_;
};

namespace detail {

inline bool has_bool_effect(const SnapAction& s, VarId v, bool val) {
  const Effect* e = s.effect_on(v);
  return e && e->kind == Effect::BoolAssign && e->value == val;
}

// Boolean repetition condition on one precondition set. `reestablisher` is
// the snap action whose effect may restore v = val for the next round
// (b-end for pre(b-start), b-start for pre(b-lasting) and pre(b-end)).
inline bool bool_conditions_repeatable(const std::vector<Condition>& pre,
                                       const SnapAction& reestablisher,
                                       const DurativeAction& b) {
  for (const auto& c : pre) {
    if (c.kind != Condition::BoolEq) continue;
    bool restored = has_bool_effect(reestablisher, c.var, c.value);
    bool never_broken = !has_bool_effect(b.start, c.var, !c.value) &&
                        !has_bool_effect(b.end, c.var, !c.value);
    if (!restored && !never_broken) return false;
  }
  return true;
}

}  // namespace detail

// A durative action can be rolled up when (1) its Boolean effects do not
// disable repetition given its preconditions, (2) the numeric effects of
// start and end do not interfere with each other, and (3) rolling could be
// useful, i.e. some effect is a linear increment.
inline bool eligible_for_rolling(const DurativeAction& b) {
  // (1) Boolean repetition conditions.
  if (!detail::bool_conditions_repeatable(b.start.pre, b.end, b)) return false;
  std::vector<Condition> mid = b.lasting.pre;
  mid.insert(mid.end(), b.end.pre.begin(), b.end.pre.end());
  if (!detail::bool_conditions_repeatable(mid, b.start, b)) return false;
  // (2) Each numeric effect variable is touched exactly once across
  // start+end, and each assignment is an increment or free of its target.
  bool has_increment = false;
  for (const SnapAction* s : {&b.start, &b.end}) {
    for (const auto& e : s->eff) {
      if (e.kind != Effect::NumAssign) continue;
      int occurrences = 0;
      for (const SnapAction* s2 : {&b.start, &b.end}) {
        for (const auto& e2 : s2->eff) {
          if (e2.var == e.var) ++occurrences;
          if (e2.kind == Effect::NumAssign && &e2 != &e && e2.expr.mentions(e.var))
            return false;  // v occurs in another effect's expression
        }
      }
      if (occurrences > 1) return false;
      if (e.expr.mentions(e.var) && !e.linear_increment) return false;
      has_increment |= e.linear_increment;
    }
  }
  // (3) usefulness
  return has_increment;
}

// Minimal gap between consecutive rolled executions of b.
inline Rat epsilon_b(const DurativeAction& b, const VariableTable& vars, const Rat& eps) {
  return mutex(b.start, b.end, vars) ? eps : Rat(0);
}

inline Rat epsilon_b(const DurativeAction& b, const MutexMatrix& mm, const Rat& eps) {
  return mm(b.start, b.end) ? eps : Rat(0);
}

}  // namespace tpp

#endif  // TPP_ANALYSIS_HPP
