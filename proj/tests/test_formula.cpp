#include <catch2/catch_amalgamated.hpp>

#include "tpp/formula.hpp"

using namespace tpp;

TEST_CASE("hash-consing shares structurally equal terms", "[formula]") {
  FormulaManager m;
  Formula a = m.var("a", Sort::Int);
  Formula x = m.var("x", Sort::Real);
  Formula t1 = m.add(x, m.to_real(a));
  Formula t2 = m.add(x, m.to_real(a));
  CHECK(t1 == t2);
  CHECK(m.var("a", Sort::Int) == a);
  CHECK_THROWS_AS(m.var("a", Sort::Real), ModelError);
}

TEST_CASE("builders fold constants and neutral elements", "[formula]") {
  FormulaManager m;
  Formula x = m.var("x", Sort::Real);
  CHECK(m.add(x, m.realnum(Rat(0))) == x);
  CHECK(m.mul(m.realnum(Rat(1)), x) == x);
  CHECK(m.is_zero(m.mul(m.realnum(Rat(0)), x)));
  CHECK(m.is_true(m.le(m.realnum(Rat(1)), m.realnum(Rat(2)))));
  CHECK(m.is_false(m.bnot(m.tt())));
  CHECK(m.bnot(m.bnot(m.gt(x, m.realnum(Rat(0))))) == m.gt(x, m.realnum(Rat(0))));
  CHECK(m.ite(m.tt(), x, m.realnum(Rat(7))) == x);
  CHECK(m.band(m.tt(), m.gt(x, m.realnum(Rat(0)))) == m.gt(x, m.realnum(Rat(0))));
  // implies with false consequent becomes a negation
  Formula g = m.gt(x, m.realnum(Rat(0)));
  CHECK(m.implies(g, m.ff()) == m.bnot(g));
}

TEST_CASE("negative addends normalize to subtraction", "[formula]") {
  FormulaManager m;
  Formula a = m.var("a", Sort::Int);
  Formula x = m.var("x", Sort::Real);
  CHECK(m.add(x, m.mul(m.intnum(-1), a)) == m.sub(x, m.to_real(a)));
  CHECK(m.add(x, m.realnum(Rat(-3))) == m.sub(x, m.realnum(Rat(3))));
  // to_real pushes through arithmetic so Int and Real routes agree
  CHECK(m.to_real(m.sub(a, m.intnum(1))) == m.sub(m.to_real(a), m.realnum(Rat(1))));
}

TEST_CASE("mixed-sort comparisons coerce ints to reals", "[formula]") {
  FormulaManager m;
  Formula a = m.var("a", Sort::Int);
  Formula d = m.var("d", Sort::Real);
  Formula f = m.le(a, d);
  CHECK(to_smt(m, f) == "(<= (to_real a) d)");
  CHECK(m.sort(m.ite(m.gt(a, m.intnum(0)), d, d)) == Sort::Real);
  CHECK_FALSE(m.nonlinear());
  m.mul(a, d);
  CHECK(m.nonlinear());
}

TEST_CASE("evaluation is exact over rationals", "[formula]") {
  FormulaManager m;
  Formula a = m.var("a", Sort::Int);
  Formula x = m.var("x", Sort::Real);
  Formula f = m.ite(m.gt(a, m.intnum(0)), m.sub(x, m.mul(m.realnum(Rat(1, 3)), a)), x);
  auto v = m.eval(f, {Rat(1), Rat(1, 3)});
  CHECK(std::get<Rat>(v) == 0);
  Formula cmp = m.eq(f, m.realnum(Rat(0)));
  CHECK(std::get<bool>(m.eval(cmp, {Rat(1), Rat(1, 3)})));
  CHECK_FALSE(std::get<bool>(m.eval(cmp, {Rat(0), Rat(1, 3)})));
}

TEST_CASE("substitution rebuilds through normalizing builders", "[formula]") {
  FormulaManager m;
  Formula x = m.var("x", Sort::Real);
  Formula y = m.var("y", Sort::Real);
  Formula f = m.gt(m.add(x, y), m.realnum(Rat(0)));
  std::unordered_map<uint32_t, Formula> map{{y.id, m.realnum(Rat(0))}};
  CHECK(m.substitute(f, map) == m.gt(x, m.realnum(Rat(0))));
}

TEST_CASE("sigma-style chains stay linear in the DAG", "[formula]") {
  FormulaManager m;
  Formula a = m.var("a", Sort::Int);
  Formula x = m.var("x", Sort::Real);
  // x := 2x repeated: tree size doubles per step, node count must not.
  Formula cur = x;
  size_t start_nodes = m.node_count();
  const int steps = 40;
  for (int i = 0; i < steps; ++i)
    cur = m.ite(m.gt(a, m.intnum(i)), m.mul(m.realnum(Rat(2)), cur), cur);
  CHECK(m.node_count() - start_nodes <= 4 * steps + 8);
}

TEST_CASE("smt printing is deterministic and standard", "[formula]") {
  FormulaManager m;
  Formula a = m.var("a", Sort::Int);
  Formula x = m.var("x", Sort::Real);
  Formula f = m.ite(m.gt(a, m.intnum(0)), m.realnum(Rat(-7, 2)), x);
  CHECK(to_smt(m, f) == "(ite (> a 0) (- (/ 7.0 2.0)) x)");
  CHECK(to_smt(m, m.iff(m.var("b", Sort::Bool), m.var("c", Sort::Bool))) == "(= b c)");
}
