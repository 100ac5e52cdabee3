#include <gtest/gtest.h>

#include "corpus.hpp"
#include "pgcl/errors.hpp"
#include "pgcl/expr.hpp"
#include "pgcl/parser.hpp"
#include "pgcl/program.hpp"

using namespace pgcl;

namespace {

StateSpace coins() { return parse_space("var x in {H, T}\nvar c2 in {H, T}"); }

StateSpace pqr() {
  return parse_space(
      "var p in {0, 1/4, 1/2, 3/4, 1}\nvar q in {0, 1/4, 1/2, 3/4, 1}\nvar r in {0, 1/4, 1/2, 3/4, 1}");
}

Valuation at(const StateSpace& s, std::initializer_list<std::pair<const char*, Value>> binding) {
  Valuation v = s.state(0);
  for (const auto& [name, value] : binding) v[*s.index_of(name)] = value;
  return v;
}

}  // namespace

TEST(Header, DomainsAndParams) {
  SourceUnit u = parse_unit("var n in {0 .. 3}\nvar c in {H, T}\nparam p = 0.25\nSKIP");
  ASSERT_EQ(u.space.variable_count(), 2u);
  EXPECT_EQ(u.space.domain(0).values.size(), 4u);
  EXPECT_EQ(u.space.state_count(), 8u);
  EXPECT_EQ(u.params.at("p"), Rational(1, 4));
  EXPECT_TRUE(as<Skip>(u.program));
}

TEST(Header, OverrideReplacesParam) {
  SourceUnit u = parse_unit("var c in {H, T}\nparam p = 1/3\nc := H <p> c := T", {{"p", Rational(1, 8)}});
  const auto* pa = as<ProbAssign>(u.program);
  ASSERT_TRUE(pa);
  EXPECT_EQ(pa->probability.number(), Rational(1, 8));
}

TEST(Header, ParamClashingWithVariable) {
  EXPECT_THROW(parse_unit("var p in {0, 1}\nSKIP", {{"p", Rational(1)}}), ParseError);
}

TEST(Header, RejectsRepeatedDomainValue) { EXPECT_THROW(parse_space("var x in {1, 2, 1}"), ParseError); }

TEST(Parse, ProbabilisticAssignmentFromChoice) {
  Program p = parse_program("x := H <0.5> x := T", coins());
  const auto* pa = as<ProbAssign>(p);
  ASSERT_TRUE(pa);
  EXPECT_EQ(pa->target.name, "x");
  EXPECT_EQ(to_text(pa->left), "H");
  EXPECT_EQ(pa->probability.number(), Rational(1, 2));
  EXPECT_EQ(to_text(pa->right), "T");
}

TEST(Parse, GuardedIfWithTwoBranches) {
  Program p = parse_program("IF p <= 1/2 -> q,r := 0, 2*p [] p >= 1/2 -> q,r := 2*p-1, 1 FI", pqr());
  const auto* g = as<GuardedIf>(p);
  ASSERT_TRUE(g);
  ASSERT_EQ(g->branches.size(), 2u);
  const auto* a = as<Assign>(g->branches[0].body);
  ASSERT_TRUE(a);
  EXPECT_EQ(a->targets.size(), 2u);
  EXPECT_EQ(to_text(a->values[1]), "2 * p");
}

TEST(Parse, WhileLoop) {
  Program p = parse_program("WHILE 0 < p & p < 1 DO p :in q <1/2> r OD", pqr());
  const auto* w = as<While>(p);
  ASSERT_TRUE(w);
  EXPECT_TRUE(w->guard.is_boolean());
  EXPECT_TRUE(as<ProbAssign>(w->body));
}

TEST(Parse, ChainedComparison) {
  StateSpace s = pqr();
  Expr e = parse_expr("0 < p < 1", s);
  EXPECT_TRUE(eval_bool(e, at(s, {{"p", Rational(1, 2)}})));
  EXPECT_FALSE(eval_bool(e, at(s, {{"p", Rational(1)}})));
}

TEST(Parse, SequencingAndChoicePrecedence) {
  Program p = parse_program("x := H; c2 := H |^| c2 := T", coins());
  const auto* seq = as<Seq>(p);
  ASSERT_TRUE(seq);
  EXPECT_TRUE(as<Assign>(seq->first));
  EXPECT_TRUE(as<DemonAssign>(seq->second));
}

TEST(Parse, GeneralChoiceKeepsStructure) {
  Program p = parse_program("(x := H; c2 := T) <1/3> x := T", coins());
  EXPECT_TRUE(as<ProbChoice>(p));
}

TEST(Parse, OtherStatements) {
  StateSpace s = parse_space("var x in {0 .. 3}\nvar y in {0, 1}");
  EXPECT_TRUE(as<ChooseFromSet>(parse_program("x :in {0, 2, 3}", s)));
  EXPECT_TRUE(as<SuchThat>(parse_program("x, y :suchthat x + y = 2", s)));
  EXPECT_TRUE(as<ChooseFromDist>(parse_program("x :dist [0: 1/2, 1: 1/4, 3: 0.25]", s)));
  EXPECT_TRUE(as<Assert>(parse_program("{ x >= y }", s)));
  EXPECT_TRUE(as<IfProb>(parse_program("IF 1/3 THEN x := 1 ELSE x := 2 FI", s)));
  EXPECT_TRUE(as<IfBool>(parse_program("IF x = 1 THEN SKIP ELSE ABORT", s)));
  EXPECT_TRUE(as<DemonChoice>(parse_program("SKIP |^| ABORT", s)));
}

TEST(ParseErrors, SyntaxErrorHasPosition) {
  try {
    parse_program("x := H\nx := := T", coins());
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 6u);
  }
}

TEST(ParseErrors, UndeclaredVariable) {
  try {
    parse_program("z := H", coins());
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("undeclared variable 'z'"), std::string::npos);
  }
}

TEST(ParseErrors, MalformedProbability) {
  for (const char* text : {"x := H <3/2> x := T", "x := H <1/0> x := T", "x := H <-1/4> x := T"}) {
    try {
      parse_program(text, coins());
      ADD_FAILURE() << text;
    } catch (const ParseError& e) {
      EXPECT_NE(std::string(e.what()).find("malformed probability literal"), std::string::npos) << e.what();
    }
  }
}

TEST(ParseErrors, Others) {
  StateSpace s = parse_space("var x in {0 .. 3}\nvar y in {0, 1}");
  EXPECT_THROW(parse_program("x := 1.2.3", s), ParseError);
  EXPECT_THROW(parse_program("x :dist [0: 1/2, 1: 1/4]", s), ParseError);
  EXPECT_THROW(parse_program("x, x := 1, 2", s), ParseError);
  EXPECT_THROW(parse_program("x, y := 1", s), ParseError);
  EXPECT_THROW(parse_program("WHILE x < 2 DO x := x + 1", s), ParseError);
  EXPECT_THROW(parse_program("x := 1 $ 2", s), ParseError);
  EXPECT_THROW(parse_program("", s), ParseError);
}

TEST(RoundTrip, CorpusPrograms) {
  for (const char* name : corpus::kPrograms) {
    SourceUnit u = corpus::program(name);
    std::string text = to_text(u.program);
    Program again = parse_program(text, u.space, u.params);
    EXPECT_TRUE(again == u.program) << name << "\n" << text;
    EXPECT_EQ(to_text(again), text) << name;
  }
}

TEST(RoundTrip, NestedSequenceOnTheLeft) {
  StateSpace s = coins();
  Program a = parse_program("x := H", s);
  Program b = parse_program("c2 := T", s);
  Program left_nested = make_program(Seq{make_program(Seq{a, b}), a});
  EXPECT_TRUE(parse_program(to_text(left_nested), s) == left_nested);
}

TEST(RoundTrip, Expressions) {
  StateSpace s = parse_space("var x in {0 .. 3}\nvar y in {0, 1}");
  for (const char* text : {"x - (y - 1)", "-(1/2) * x", "x / (y + 1)", "[x = 1] * 2 + [y > 0]", "!(x < 1 | y = 0) & true",
                           "min(x, y, 1/3) + max(x, 2)", "x in {1, 3}", "-x - -2", "2 / 3 / x"}) {
    Expr e = parse_expr(text, s);
    EXPECT_TRUE(parse_expr(to_text(e), s) == e) << text << " -> " << to_text(e);
  }
}

TEST(Eval, Examples) {
  StateSpace s = parse_space("var x in {H, T}\nvar y in {0, 1}\nvar p in {0, 1/2, 1}");
  Valuation v = at(s, {{"y", Rational(1)}, {"p", Rational(1, 2)}});
  EXPECT_EQ(eval_expectation(parse_expr("[H = H]", s), v), Rational(1));
  EXPECT_EQ(eval_number(parse_expr("1 - y + 3", s), v), Rational(3));
  EXPECT_EQ(eval_expectation(parse_expr("[0 < p & p < 1]", s), v), Rational(1));
}

TEST(Eval, Errors) {
  StateSpace s = parse_space("var x in {H, T}\nvar y in {0, 1}");
  Valuation v = s.state(0);
  EXPECT_THROW(eval(parse_expr("1 / y", s), v), EvalError);
  EXPECT_THROW(eval(parse_expr("x = 1", s), v), EvalError);
  EXPECT_THROW(eval(parse_expr("x + 1", s), v), EvalError);
  EXPECT_THROW(eval_expectation(parse_expr("y - 1", s), v), EvalError);
}

TEST(Substitute, WorkedExample) {
  StateSpace s = parse_space("var x in {0 .. 2}\nvar y in {0, 1}");
  Expr post = parse_expr("x + 3", s);
  Expr result = substitute(post, "x", parse_expr("1 - y", s));
  EXPECT_EQ(to_text(result), "1 - y + 3");
}

TEST(Substitute, Identity) {
  StateSpace s = parse_space("var x in {0 .. 2}\nvar y in {0, 1}");
  Expr e = parse_expr("[x = y] * (x + 2) / 3", s);
  EXPECT_TRUE(substitute(e, "x", parse_expr("x", s)) == e);
}

TEST(Substitute, TokenIntoBracket) {
  StateSpace s = parse_space("var x in {H, T}\nvar c2 in {H, T}");
  Expr e = substitute(parse_expr("[x = c2]", s), "x", parse_expr("H", s));
  for (std::size_t i = 0; i < s.state_count(); ++i) {
    Valuation v = s.state(i);
    Rational expected = std::get<Token>(v[1]).name == "H" ? 1 : 0;
    EXPECT_EQ(eval_expectation(e, v), expected);
  }
}

// eval(E[x\e], s) = eval(E, s[x := eval(e, s)]) at every state.
TEST(Substitute, SemanticsExhaustive) {
  StateSpace s = parse_space("var x in {0 .. 4}\nvar y in {0 .. 3}\nvar c in {H, T}");
  const char* posts[] = {"x + 3", "[x = y] * 2 + y", "min(x, y) + [c = H]", "x * x - y * x + 7",
                         "[x > 2 & c = T] + max(x, 1/2)"};
  const char* repls[] = {"1 - y + 3", "y", "x * 2", "x + y", "min(y, 2)"};
  for (const char* p : posts) {
    Expr post = parse_expr(p, s);
    for (const char* r : repls) {
      Expr repl = parse_expr(r, s);
      Expr sub = substitute(post, "x", repl);
      for (std::size_t i = 0; i < s.state_count(); ++i) {
        Valuation v = s.state(i);
        Valuation moved = v;
        moved[0] = eval_value(repl, v);
        EXPECT_EQ(eval_number(sub, v), eval_number(post, moved)) << p << " [x\\" << r << "]";
      }
    }
  }
}
