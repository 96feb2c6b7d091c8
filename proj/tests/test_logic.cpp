#include <gtest/gtest.h>

#include "support.hpp"
#include "viewforge/error.hpp"
#include "viewforge/system_model.hpp"

using namespace viewforge;
using ex::TypedVar;

namespace {

Universe small_universe() {
  Document d = parse_document(vftest::slurp(vftest::corpus("types.vtype")));
  return build_universe({std::get<TypeDocument>(d)}, {{"Branch", 2}, {"Rental", 2}});
}

SortExpr S(const std::string& s) { return parse_sort(s); }

std::vector<TypedVar> vars_of(std::initializer_list<std::pair<const char*, const char*>> vs) {
  std::vector<TypedVar> out;
  for (const auto& [n, s] : vs) out.push_back(TypedVar{n, S(s)});
  return out;
}

}  // namespace

TEST(Solver, EnumerationMatchesBruteForce) {
  Universe u = small_universe();
  Solver solver(u);
  const auto vars = vars_of({{"c", "Car"}, {"s", "Set Car"}, {"d", "Date"}, {"b", "Branch"}});
  const char* formulas[] = {
      "c elem s and d > 1",
      "s = {c} or card(s) = 2",
      "not (c elem s) and s subset {c1, c2} and b = Branch#1",
      "d + 1 = card(s) and (c = c1 => d = 0)",
      "exists x : Car . x elem s and x != c",
      "forall x : Car . x elem s => x = c",
      "s - {c} = {} <=> (s = {} or s = {c})",
      "d >= 2 and d <= 2 and c != c3",
      "false",
  };
  for (const char* text : formulas) {
    Formula f = parse_formula(text);
    auto expected = vftest::brute_models(f, u, vars);
    auto got = solver.enumerate(f, vars);
    ASSERT_EQ(got.size(), expected.size()) << text;
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_TRUE(got[i] == expected[i]) << text << " model " << i;
    EXPECT_EQ(solver.exists(f, vars), !expected.empty()) << text;
    auto any = solver.find_any(f, vars);
    ASSERT_EQ(any.has_value(), !expected.empty()) << text;
    if (any) EXPECT_TRUE(eval(f, *any, u)) << text;
  }
}

TEST(Solver, BaseBindingIsVisible) {
  Universe u = small_universe();
  Solver solver(u);
  Binding base;
  base.set("k", Value::integer(2));
  auto models = solver.enumerate(parse_formula("d < k"), vars_of({{"d", "Date"}}), 0, base);
  ASSERT_EQ(models.size(), 2u);
  EXPECT_EQ(models[0].find("d")->as_int(), 0);
  EXPECT_EQ(models[1].find("d")->as_int(), 1);
}

TEST(Solver, EquationsPinLargeVariables) {
  Universe u = small_universe();
  Solver solver(u);
  const auto vars = vars_of({{"a", "Set Car"}, {"b", "Set Car"}, {"c", "Set Car"}, {"d", "Set Car"}});
  auto m = solver.find_model(parse_formula("a = {c1} and b = a + {c2} and c = b - {c1} and d = c"), vars);
  ASSERT_TRUE(m);
  EXPECT_EQ(to_string(*m->find("d")), "{c2}");
  EXPECT_LT(solver.last_nodes(), 100u);  // the product is 8^4 = 4096
}

TEST(Solver, BudgetIsEnforced) {
  Universe u = small_universe();
  u.set_enumeration_cap(50);
  Solver solver(u);
  const auto vars = vars_of({{"a", "Set Car"}, {"b", "Set Car"}, {"c", "Set Car"}});
  EXPECT_THROW(solver.enumerate(parse_formula("card(a) + card(b) + card(c) = 9"), vars), BudgetExceeded);
}

TEST(Eval, UnboundVariable) {
  Universe u = small_universe();
  try {
    eval(parse_formula("x = 1"), Binding{}, u);
    FAIL() << "no error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnboundVariable);
  }
}

TEST(Eval, OverflowIsAnError) {
  Universe u = small_universe();
  Binding b;
  b.set("x", Value::integer(INT64_MAX));
  try {
    eval(parse_formula("x + 1 > x"), b, u);
    FAIL() << "no error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Overflow);
  }
}

TEST(Eval, SetOperationsByHand) {
  Universe u = small_universe();
  Binding b;
  b.set("s", Value::set({Value::atom("c1"), Value::atom("c3")}));
  EXPECT_EQ(to_string(eval_term(parse_term("s + {c2} - {c1}"), b, u)), "{c2, c3}");
  EXPECT_EQ(eval_term(parse_term("card(s + s)"), b, u).as_int(), 2);
  EXPECT_TRUE(eval(parse_formula("{c3} subset s and not (c2 elem s)"), b, u));
  EXPECT_FALSE(eval(parse_formula("s = {c1}"), b, u));
}

TEST(Eval, EqualityAcrossKindsIsFalse) {
  Universe u = small_universe();
  EXPECT_FALSE(eval(parse_formula("c1 = 1"), Binding{}, u));
  EXPECT_TRUE(eval(parse_formula("c1 != {c1}"), Binding{}, u));
}

TEST(Expr, SubstituteAvoidsCapture) {
  Formula f = parse_formula("exists x : Car . x = y");
  Formula g = substitute(f, "y", ex::name("x"));
  ASSERT_EQ(g->op, Op::Exists);
  EXPECT_NE(g->name, "x");
  Universe u = small_universe();
  Binding b;
  b.set("x", Value::atom("c2"));
  EXPECT_TRUE(eval(g, b, u));
}

TEST(Expr, PrimeRenamesAttributes) {
  Formula f = prime(parse_formula("a = b and c elem s"), {"a", "s"});
  EXPECT_EQ(render(f), "a' = b and c elem s'");
  EXPECT_THROW(prime(f, {"a"}), Error);
}

TEST(Expr, FreeNames) {
  auto names = free_names(*parse_formula("forall x : Car . x elem s and y' = self"));
  EXPECT_EQ(names, (std::set<std::string>{"s", "self", "y'"}));
}

TEST(Transition, DesugaredPreAndPost) {
  Project p = vftest::project("final");
  SignatureEnv env = induce_signatures(p.docs);
  const LifecycleDoc* lc = p.docs.lifecycle_for("Branch");
  ASSERT_TRUE(lc);
  Universe u = with_signatures(project_universe(p), env);
  DesugaredTransition d = desugar_transition(*lc->find_transition("pick-up-ok"), env.at("Branch"), true);

  Binding b = self_binding(u, "Branch");
  b.set("available_cars", Value::set({Value::atom("c2")}));
  b.set("branches", Value::set({Value::atom("Branch#1")}));
  b.set("pick-up_rentals", Value::set({}));
  b.set("return_rentals", Value::set({}));
  b.set("town", Value::atom("munich"));
  b.set("in", Value::message(Message{"Branch#0", "EXTERNAL", "pick-up", {Value::integer(2), Value::atom("munich")}}));
  EXPECT_TRUE(eval(d.pre, b, u));
  b.set("available_cars", Value::set({}));
  EXPECT_FALSE(eval(d.pre, b, u));
}
