#ifndef TPP_VALIDATOR_HPP
#define TPP_VALIDATOR_HPP

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "tpp/analysis.hpp"
#include "tpp/plan.hpp"
#include "tpp/problem.hpp"

// Independent semantic plan checker: executes the event timeline with res()
// and reports violations of the four validity conditions. Shares only the
// problem model and the mutex predicate with the planner; no formula
// machinery is involved, so agreement with the encoding is real evidence.

namespace tpp {

struct Violation {
  std::string code;  // precondition | mutex | epsilon-separation | self-overlap |
                     // lasting | goal | event-time | duration-bounds
  std::string message;
};

struct ValidationReport {
  bool valid = true;
  std::vector<Violation> violations;

  void add(std::string code, std::string message) {
    valid = false;
    violations.push_back({std::move(code), std::move(message)});
  }
};

struct TimelineEvent {
  Rat t;
  struct Item {
    const SnapAction* snap;
    int step;  // index into plan.steps
  };
  std::vector<Item> items;
};

struct Timeline {
  std::vector<TimelineEvent> events;
  // per plan step: event index of its start and end
  std::vector<std::pair<int, int>> span;
};

// Events are start/end snap actions grouped by exact-rational time.
inline Timeline build_timeline(const TimedPlan& plan, const TemporalNumericProblem& p) {
  std::map<Rat, std::vector<TimelineEvent::Item>> by_time;
  for (int s = 0; s < (int)plan.steps.size(); ++s) {
    const auto& step = plan.steps[s];
    const DurativeAction& b = p.actions.at(step.action);
    by_time[step.t].push_back({&b.start, s});
    by_time[step.t + step.d].push_back({&b.end, s});
  }
  Timeline tl;
  tl.span.assign(plan.steps.size(), {-1, -1});
  for (auto& [t, items] : by_time) {
    TimelineEvent ev;
    ev.t = t;
    ev.items = std::move(items);
    tl.events.push_back(std::move(ev));
  }
  for (int e = 0; e < (int)tl.events.size(); ++e)
    for (const auto& item : tl.events[e].items)
      (item.snap->role == SnapRole::Start ? tl.span[item.step].first
                                          : tl.span[item.step].second) = e;
  return tl;
}

// Simultaneous execution of one event. Precondition failures are condition-1
// violations, mutex pairs in one event condition-2 violations; effects are
// applied regardless so later checks stay meaningful.
inline State res(const std::vector<TimelineEvent::Item>& items, const State& s,
                 const TemporalNumericProblem& p, ValidationReport* report = nullptr) {
  if (report) {
    for (size_t i = 0; i < items.size(); ++i)
      for (size_t j = i + 1; j < items.size(); ++j)
        if (mutex(*items[i].snap, *items[j].snap, p.vars))
          report->add("mutex", "mutex actions " + items[i].snap->id + " and " +
                                   items[j].snap->id + " share an event");
  }
  State cur = s;
  for (const auto& item : items) {
    for (const auto& c : item.snap->pre)
      if (report && !cur.satisfies(c))
        report->add("precondition", "precondition of " + item.snap->id + " fails");
    State next = cur;
    for (const auto& e : item.snap->eff) {
      if (e.kind == Effect::BoolAssign)
        next.set(e.var, e.value);
      else
        next.set(e.var, cur.eval(e.expr));
    }
    cur = std::move(next);
  }
  return cur;
}

inline ValidationReport validate(const TimedPlan& plan, const TemporalNumericProblem& p,
                                 const Rat& eps) {
  ValidationReport report;
  Timeline tl = build_timeline(plan, p);

  for (const auto& step : plan.steps) {
    const DurativeAction& b = p.actions[step.action];
    if (step.t <= 0)
      report.add("event-time", "(" + b.id + ") starts at non-positive time " +
                                   rat_to_string(step.t));
    if (b.instantaneous ? step.d != 0 : (step.d < b.dur_lo || step.d > b.dur_hi))
      report.add("duration-bounds", "(" + b.id + ") has duration " + rat_to_string(step.d) +
                                        " outside [" + rat_to_string(b.dur_lo) + ", " +
                                        rat_to_string(b.dur_hi) + "]");
  }

  // Condition 1: execute the timeline, check preconditions and the goal.
  std::vector<State> states;
  states.push_back(p.init);
  for (const auto& ev : tl.events) states.push_back(res(ev.items, states.back(), p, &report));
  for (const auto& g : p.goals)
    if (!states.back().satisfies(g)) {
      std::ostringstream os;
      os << "goal ";
      if (g.kind == Condition::BoolEq)
        os << p.vars.name(g.var) << " = " << (g.value ? "true" : "false");
      else
        os << "(numeric condition)";
      os << " not satisfied in the final state";
      report.add("goal", os.str());
    }

  // Condition 2: eps-separation between mutex actions of distinct events.
  for (size_t i = 0; i < tl.events.size(); ++i)
    for (size_t j = i + 1; j < tl.events.size(); ++j) {
      if (tl.events[j].t - tl.events[i].t >= eps) break;
      for (const auto& a : tl.events[i].items)
        for (const auto& b : tl.events[j].items)
          if (mutex(*a.snap, *b.snap, p.vars))
            report.add("epsilon-separation",
                       a.snap->id + " and " + b.snap->id + " are only " +
                           rat_to_string(tl.events[j].t - tl.events[i].t) + " apart");
    }

  // Condition 3: no self-overlapping executions of one durative action.
  std::map<int, std::vector<const TimedDurativeAction*>> by_action;
  for (const auto& step : plan.steps) by_action[step.action].push_back(&step);
  for (auto& [action, steps] : by_action) {
    std::sort(steps.begin(), steps.end(),
              [](const auto* a, const auto* b) { return a->t < b->t; });
    for (size_t k = 0; k + 1 < steps.size(); ++k)
      if (steps[k + 1]->t < steps[k]->t + steps[k]->d)
        report.add("self-overlap", "(" + p.actions[action].id + ") at " +
                                       rat_to_string(steps[k + 1]->t) +
                                       " overlaps the execution at " +
                                       rat_to_string(steps[k]->t));
  }

  // Condition 4: lasting conditions hold in each state spanned by the
  // execution window (the start's own effects count toward the first state).
  for (int s = 0; s < (int)plan.steps.size(); ++s) {
    const DurativeAction& b = p.actions[plan.steps[s].action];
    if (b.lasting.pre.empty()) continue;
    auto [ei, ej] = tl.span[s];
    for (int e = ei; e < ej; ++e) {
      // states[e + 1] is the state right after event e.
      for (const auto& c : b.lasting.pre)
        if (!states[e + 1].satisfies(c)) {
          report.add("lasting", "invariant of (" + b.id + ") broken at time " +
                                    rat_to_string(tl.events[e].t));
          break;
        }
    }
  }
  return report;
}

}  // namespace tpp

#endif  // TPP_VALIDATOR_HPP
