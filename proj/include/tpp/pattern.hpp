#ifndef TPP_PATTERN_HPP
#define TPP_PATTERN_HPP

#include <algorithm>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "tpp/problem.hpp"

// Patterns: ordered sequences of start/end snap-action occurrences. The
// encoding only permits plans whose mutex-ordered action sequence is a
// subsequence of the pattern, so completeness needs every action's start and
// end to occur (and bound iteration concatenates copies).

namespace tpp {

struct PatternEntry {
  int pos = 0;     // 1-based position in the pattern
  int action = -1; // durative action index
  SnapRole role = SnapRole::Start;  // Start or End only
  int copy = 0;    // which concatenated copy this entry came from

  // Occurrence identity: position is unique even across repeated occurrences
  // of the same snap action.
  bool same_snap(const PatternEntry& o) const { return action == o.action && role == o.role; }
};

class Pattern {
 public:
  Pattern() = default;
  Pattern(const TemporalNumericProblem* prob, std::vector<PatternEntry> entries)
      : prob_(prob), entries_(std::move(entries)) {
    renumber();
  }

  const TemporalNumericProblem& problem() const { return *prob_; }
  int size() const { return (int)entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const PatternEntry& entry(int pos) const { return entries_.at(pos - 1); }  // 1-based
  const std::vector<PatternEntry>& entries() const { return entries_; }

  const SnapAction& snap(const PatternEntry& e) const {
    const DurativeAction& b = prob_->actions.at(e.action);
    return e.role == SnapRole::Start ? b.start : b.end;
  }
  const SnapAction& snap(int pos) const { return snap(entry(pos)); }

  // E_i: positions of matching end occurrences after a start at i.
  std::vector<int> ends_after(int i) const {
    std::vector<int> out;
    for (int j = i + 1; j <= size(); ++j)
      if (entry(j).role == SnapRole::End && entry(j).action == entry(i).action)
        out.push_back(j);
    return out;
  }
  // S_j: positions of matching start occurrences before an end at j.
  std::vector<int> starts_before(int j) const {
    std::vector<int> out;
    for (int i = 1; i < j; ++i)
      if (entry(i).role == SnapRole::Start && entry(i).action == entry(j).action)
        out.push_back(i);
    return out;
  }
  // B_i: positions of earlier start occurrences of the same action.
  std::vector<int> prev_starts(int i) const {
    std::vector<int> out;
    for (int j = 1; j < i; ++j)
      if (entry(j).role == SnapRole::Start && entry(j).action == entry(i).action)
        out.push_back(j);
    return out;
  }

  // Complete: every durative action has at least one start and one end.
  bool complete() const { return missing_actions().empty(); }
  std::vector<int> missing_actions() const {
    std::vector<int> missing;
    for (int a = 0; a < (int)prob_->actions.size(); ++a) {
      bool s = false, e = false;
      for (const auto& en : entries_)
        if (en.action == a) (en.role == SnapRole::Start ? s : e) = true;
      if (!s || !e) missing.push_back(a);
    }
    return missing;
  }

  std::string dump() const {
    std::string s = "[";
    for (const auto& e : entries_) {
      if (s.size() > 1) s += ", ";
      s += "{\"pos\": " + std::to_string(e.pos) + ", \"action\": \"" +
           prob_->actions[e.action].id + "\", \"role\": \"" +
           (e.role == SnapRole::Start ? "start" : "end") + "\", \"copy\": " +
           std::to_string(e.copy) + "}";
    }
    return s + "]";
  }

 private:
  void renumber() {
    for (int i = 0; i < (int)entries_.size(); ++i) entries_[i].pos = i + 1;
  }
  const TemporalNumericProblem* prob_ = nullptr;
  std::vector<PatternEntry> entries_;
};

enum class PatternHeuristic { Arpg, StartsThenEnds };

struct PatternOptions {
  PatternHeuristic heuristic = PatternHeuristic::Arpg;
  // 0 keeps the stable action-id tie-break; otherwise ties are shuffled
  // deterministically by this seed.
  uint64_t seed = 0;
};

namespace detail {

// Asymptotic relaxed state: booleans accumulate reachable values, numerics
// widen to intervals (increments push a bound to infinity).
struct RelaxedState {
  struct Interval {
    Rat lo{0}, hi{0};
    bool lo_inf = false, hi_inf = false;
  };
  std::vector<bool> can_true, can_false;
  std::vector<Interval> num;

  explicit RelaxedState(const TemporalNumericProblem& p) {
    can_true.assign(p.vars.size(), false);
    can_false.assign(p.vars.size(), false);
    num.resize(p.vars.size());
    for (VarId v = 0; v < p.vars.size(); ++v) {
      if (p.vars.is_bool(v))
        (p.init.get_bool(v) ? can_true : can_false)[v] = true;
      else
        num[v].lo = num[v].hi = p.init.get_num(v);
    }
  }

  Interval eval(const LinearExpr& e) const {
    Interval acc;
    acc.lo = acc.hi = e.constant;
    for (const auto& [v, c] : e.terms) {
      const Interval& iv = num[v];
      auto lo_part = c > 0 ? iv.lo : iv.hi;
      auto hi_part = c > 0 ? iv.hi : iv.lo;
      bool lo_part_inf = c > 0 ? iv.lo_inf : iv.hi_inf;
      bool hi_part_inf = c > 0 ? iv.hi_inf : iv.lo_inf;
      acc.lo_inf |= lo_part_inf;
      acc.hi_inf |= hi_part_inf;
      if (!lo_part_inf) acc.lo += c * lo_part;
      if (!hi_part_inf) acc.hi += c * hi_part;
    }
    return acc;
  }

  bool satisfiable(const Condition& c) const {
    if (c.kind == Condition::BoolEq) return c.value ? can_true[c.var] : can_false[c.var];
    Interval iv = eval(c.expr);
    switch (c.op) {
      case CmpOp::Lt: return iv.lo_inf || iv.lo < 0;
      case CmpOp::Le: return iv.lo_inf || iv.lo <= 0;
      case CmpOp::Eq: return (iv.lo_inf || iv.lo <= 0) && (iv.hi_inf || iv.hi >= 0);
      case CmpOp::Ge: return iv.hi_inf || iv.hi >= 0;
      case CmpOp::Gt: return iv.hi_inf || iv.hi > 0;
    }
    return false;
  }
  bool satisfiable(const std::vector<Condition>& cs) const {
    for (const auto& c : cs)
      if (!satisfiable(c)) return false;
    return true;
  }

  void apply(const Effect& e) {
    if (e.kind == Effect::BoolAssign) {
      (e.value ? can_true : can_false)[e.var] = true;
      return;
    }
    Interval rhs = eval(e.expr);
    Interval& tgt = num[e.var];
    if (e.linear_increment) {
      // Repeated application: a strictly positive (negative) possible delta
      // widens the bound to infinity.
      Interval delta = eval(e.increment_delta());
      if (delta.hi_inf || delta.hi > 0) tgt.hi_inf = true;
      if (delta.lo_inf || delta.lo < 0) tgt.lo_inf = true;
    }
    tgt.lo_inf |= rhs.lo_inf;
    tgt.hi_inf |= rhs.hi_inf;
    if (!tgt.lo_inf && rhs.lo < tgt.lo) tgt.lo = rhs.lo;
    if (!tgt.hi_inf && rhs.hi > tgt.hi) tgt.hi = rhs.hi;
  }
  void apply(const SnapAction& s) {
    for (const auto& e : s.eff) apply(e);
  }
};

inline std::vector<int> action_order(const TemporalNumericProblem& p, uint64_t seed) {
  std::vector<int> order(p.actions.size());
  for (int i = 0; i < (int)order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return p.actions[a].id < p.actions[b].id; });
  if (seed != 0) {
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  return order;
}

}  // namespace detail

// Relaxed-reachability sweep: starts are emitted in the level at which their
// start+lasting conditions first become relaxed-satisfiable, each end one
// level after its start (once its own conditions are satisfiable). Within a
// level starts precede ends, ties in stable action-id order. Leftovers are
// appended so the pattern is always complete.
inline Pattern build_arpg_pattern(const TemporalNumericProblem& p, uint64_t seed) {
  auto order = detail::action_order(p, seed);
  detail::RelaxedState relaxed(p);
  std::vector<int> start_level(p.actions.size(), -1), end_level(p.actions.size(), -1);
  std::vector<PatternEntry> entries;
  size_t emitted = 0;
  for (int level = 0; emitted < 2 * p.actions.size(); ++level) {
    std::vector<const SnapAction*> now;
    for (int a : order) {
      const DurativeAction& b = p.actions[a];
      if (start_level[a] >= 0) continue;
      if (relaxed.satisfiable(b.start.pre) && relaxed.satisfiable(b.lasting.pre)) {
        start_level[a] = level;
        entries.push_back({0, a, SnapRole::Start, 0});
        now.push_back(&b.start);
        ++emitted;
      }
    }
    for (int a : order) {
      const DurativeAction& b = p.actions[a];
      if (end_level[a] >= 0 || start_level[a] < 0 || start_level[a] >= level) continue;
      if (relaxed.satisfiable(b.end.pre)) {
        end_level[a] = level;
        entries.push_back({0, a, SnapRole::End, 0});
        now.push_back(&b.end);
        ++emitted;
      }
    }
    if (now.empty()) break;  // fixpoint
    for (const SnapAction* s : now) relaxed.apply(*s);
  }
  // Unreached actions still need their occurrences for completeness.
  for (int a : order)
    if (start_level[a] < 0) entries.push_back({0, a, SnapRole::Start, 0});
  for (int a : order)
    if (end_level[a] < 0) entries.push_back({0, a, SnapRole::End, 0});
  return Pattern(&p, std::move(entries));
}

// Reference ordering: all starts in action-id order, then all ends.
inline Pattern build_starts_then_ends_pattern(const TemporalNumericProblem& p, uint64_t seed) {
  auto order = detail::action_order(p, seed);
  std::vector<PatternEntry> entries;
  for (int a : order) entries.push_back({0, a, SnapRole::Start, 0});
  for (int a : order) entries.push_back({0, a, SnapRole::End, 0});
  return Pattern(&p, std::move(entries));
}

inline Pattern build_base_pattern(const TemporalNumericProblem& p,
                                  const PatternOptions& opts = {}) {
  return opts.heuristic == PatternHeuristic::Arpg
             ? build_arpg_pattern(p, opts.seed)
             : build_starts_then_ends_pattern(p, opts.seed);
}

// The pattern concatenated n times; occurrence identities are fresh per copy
// (an end in copy 2 can match a start in copy 1).
inline Pattern concatenate(const Pattern& base, int n) {
  if (n < 1) throw ModelError("pattern bound must be >= 1");
  std::vector<PatternEntry> entries;
  entries.reserve((size_t)base.size() * n);
  for (int c = 0; c < n; ++c)
    for (const auto& e : base.entries()) {
      PatternEntry copy = e;
      copy.copy = c;
      entries.push_back(copy);
    }
  return Pattern(&base.problem(), std::move(entries));
}

struct SimplifyResult {
  Pattern pattern;
  // Actions that occurred in the input but lost their start or end here
  // (the pattern is no longer complete for them); reported, never silently
  // ignored.
  std::vector<int> dropped_actions;
};

// Removes pointless occurrences to a fixpoint: an end with no start before
// it, a start with no end after it, and the latter of two consecutive
// occurrences of the same start (end) action.
inline SimplifyResult simplify(const Pattern& p) {
  std::vector<PatternEntry> es = p.entries();
  std::set<int> present;
  for (const auto& e : es) present.insert(e.action);
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<PatternEntry> next;
    for (size_t i = 0; i < es.size(); ++i) {
      const PatternEntry& e = es[i];
      if (!next.empty() && next.back().same_snap(e)) {
        changed = true;  // consecutive duplicate
        continue;
      }
      if (e.role == SnapRole::End) {
        bool has_start = false;
        for (size_t j = 0; j < i; ++j)
          if (es[j].role == SnapRole::Start && es[j].action == e.action) has_start = true;
        if (!has_start) {
          changed = true;
          continue;
        }
      } else {
        bool has_end = false;
        for (size_t j = i + 1; j < es.size(); ++j)
          if (es[j].role == SnapRole::End && es[j].action == e.action) has_end = true;
        if (!has_end) {
          changed = true;
          continue;
        }
      }
      next.push_back(e);
    }
    es = std::move(next);
  }
  Pattern out(&p.problem(), std::move(es));
  std::vector<int> dropped;
  for (int a : out.missing_actions())
    if (present.count(a)) dropped.push_back(a);
  return {out, dropped};
}

}  // namespace tpp

#endif  // TPP_PATTERN_HPP
