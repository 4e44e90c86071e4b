#ifndef TPP_TESTS_HELPERS_HPP
#define TPP_TESTS_HELPERS_HPP

#include <cstdlib>
#include <string>

#include "tpp/generators.hpp"
#include "tpp/pddl.hpp"
#include "tpp/smt.hpp"

namespace tpp_tests {

// Running-example instance: p sources, q bottles, given litres in b1.
inline tpp::TemporalNumericProblem pour_problem(int p, int q,
                                                std::vector<tpp::Rat> litres = {}) {
  tpp::GenSpec spec;
  spec.family = "pour";
  spec.p = p;
  spec.q = q;
  spec.litres = std::move(litres);
  tpp::Generated g = tpp::generate_instance(spec);
  return tpp::load_problem(g.domain, g.problem);
}

inline tpp::TemporalNumericProblem load_family(const std::string& family, int p, int q,
                                               std::vector<tpp::Rat> litres = {}) {
  tpp::GenSpec spec;
  spec.family = family;
  spec.p = p;
  spec.q = q;
  spec.litres = std::move(litres);
  tpp::Generated g = tpp::generate_instance(spec);
  return tpp::load_problem(g.domain, g.problem);
}

inline int action_index(const tpp::TemporalNumericProblem& prob, const std::string& id) {
  for (int i = 0; i < (int)prob.actions.size(); ++i)
    if (prob.actions[i].id == id) return i;
  throw std::runtime_error("no action " + id);
}

inline bool solver_available() {
  static int cached = -1;
  if (cached < 0) {
    try {
      tpp::FormulaManager m;
      tpp::Encoding enc;
      enc.families.emplace_back("t", std::vector<tpp::Formula>{m.tt()});
      tpp::SmtOptions opts;
      opts.command = tpp::default_solver_command();
      cached = tpp::check(tpp::emit_smtlib(m, enc), opts).status == tpp::SmtResult::Sat;
    } catch (const std::exception&) {
      cached = 0;
    }
  }
  return cached == 1;
}

}  // namespace tpp_tests

#endif
