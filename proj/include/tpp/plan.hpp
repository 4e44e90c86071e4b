#ifndef TPP_PLAN_HPP
#define TPP_PLAN_HPP

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "tpp/problem.hpp"

namespace tpp {

// One execution of a durative action: start time and a pinned duration.
struct TimedDurativeAction {
  Rat t;
  int action = -1;  // index into problem.actions
  Rat d;
};

struct TimedPlan {
  std::vector<TimedDurativeAction> steps;
  // provenance
  int bound = 0;
  std::string pattern_desc;
  double wall_seconds = 0;

  void sort(const TemporalNumericProblem& p) {
    std::sort(steps.begin(), steps.end(), [&](const auto& a, const auto& b) {
      if (a.t != b.t) return a.t < b.t;
      if (a.action != b.action) return p.actions[a.action].id < p.actions[b.action].id;
      return a.d < b.d;
    });
  }
};

// Text format, one action per line: "<time>: (<action> <args>) [<duration>]".
// Times and durations print as exact decimals or p/q rationals.
inline std::string plan_to_text(const TimedPlan& plan, const TemporalNumericProblem& p) {
  std::ostringstream os;
  for (const auto& s : plan.steps)
    os << rat_to_string(s.t) << ": (" << p.actions[s.action].id << ") ["
       << rat_to_string(s.d) << "]\n";
  return os.str();
}

inline TimedPlan parse_plan_text(const std::string& text, const TemporalNumericProblem& p) {
  TimedPlan plan;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto strip = [](std::string s) {
      size_t b = s.find_first_not_of(" \t\r");
      size_t e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string body = strip(line);
    if (body.empty() || body[0] == ';') continue;
    size_t colon = body.find(':');
    size_t lpar = body.find('(', colon);
    size_t rpar = body.find(')', lpar);
    size_t lbr = body.find('[', rpar);
    size_t rbr = body.find(']', lbr);
    if (colon == std::string::npos || lpar == std::string::npos ||
        rpar == std::string::npos || lbr == std::string::npos || rbr == std::string::npos)
      throw ParseError("malformed plan line", lineno, 1);
    auto time = parse_rat(strip(body.substr(0, colon)));
    auto dur = parse_rat(strip(body.substr(lbr + 1, rbr - lbr - 1)));
    if (!time || !dur) throw ParseError("malformed time or duration", lineno, 1);
    // Normalize inner whitespace of the action name.
    std::istringstream as(body.substr(lpar + 1, rpar - lpar - 1));
    std::string tok, name;
    while (as >> tok) name += (name.empty() ? "" : " ") + tok;
    int action = -1;
    for (int i = 0; i < (int)p.actions.size(); ++i)
      if (p.actions[i].id == name) action = i;
    if (action < 0) throw ParseError("unknown action (" + name + ")", lineno, 1);
    plan.steps.push_back({*time, action, *dur});
  }
  return plan;
}

}  // namespace tpp

#endif  // TPP_PLAN_HPP
