#include <gtest/gtest.h>

#include <algorithm>

#include "corpus.hpp"
#include "pgcl/checks.hpp"
#include "pgcl/errors.hpp"
#include "pgcl/parser.hpp"
#include "pgcl/resolutions.hpp"

using namespace pgcl;

namespace {

const char* kX = "var x in {0, 1}\nvar y in {0, 1}";

Verdict equal_text(const char* header, const char* a, const char* b) {
  StateSpace s = parse_space(header);
  Program p = parse_program(a, s), q = parse_program(b, s);
  return check_equal(p, q, ProbeFamily::build(s, {p, q}), s);
}

Verdict refines_text(const char* header, const char* spec, const char* impl) {
  StateSpace s = parse_space(header);
  Program p = parse_program(spec, s), q = parse_program(impl, s);
  return check_refines(p, q, ProbeFamily::build(s, {p, q}), s);
}

bool has_probe(const ProbeFamily& f, const std::string& name) {
  return std::any_of(f.probes().begin(), f.probes().end(), [&](const Probe& p) { return p.name == name; });
}

}  // namespace

TEST(Probes, FamilyContents) {
  StateSpace s = parse_space("var x in {0, 1}\nvar q in {0, 1/2, 1}");
  Program p = parse_program("IF q < 1/2 -> x := 1 [] q >= 1/2 -> x := 0 FI; { x = 1 }", s);
  ProbeOptions opts;
  opts.random_count = 4;
  ProbeFamily all = ProbeFamily::build(s, {p}, opts);
  EXPECT_TRUE(has_probe(all, "[x=1,q=1/2]"));
  EXPECT_TRUE(has_probe(all, "[q < 1/2]"));
  EXPECT_TRUE(has_probe(all, "[x = 1]"));
  EXPECT_TRUE(has_probe(all, "random#3"));
  EXPECT_FALSE(has_probe(all, "random#4"));

  opts.observed = {"x"};
  ProbeFamily xs = ProbeFamily::build(s, {p}, opts);
  EXPECT_TRUE(has_probe(xs, "[x=1]"));
  EXPECT_TRUE(has_probe(xs, "[x = 1]"));
  EXPECT_FALSE(has_probe(xs, "[q < 1/2]"));
  for (const Probe& probe : xs.probes()) {
    for (std::size_t i = 0; i < s.state_count(); ++i) {
      Valuation v = s.state(i);
      v[1] = Rational(0);
      EXPECT_EQ(probe.values[i], probe.values[*s.index(v)]) << probe.name;
    }
  }
}

TEST(Probes, SeedDeterminesRandomProbes) {
  StateSpace s = parse_space(kX);
  ProbeOptions a, b, c;
  a.seed = b.seed = 7;
  c.seed = 8;
  auto randoms = [&](const ProbeOptions& o) {
    std::vector<Expectation> out;
    ProbeFamily f = ProbeFamily::build(s, {}, o);
    for (const Probe& p : f.probes())
      if (p.name.rfind("random#", 0) == 0) out.push_back(p.values);
    return out;
  };
  EXPECT_EQ(randoms(a), randoms(b));
  EXPECT_NE(randoms(a), randoms(c));
  for (const Expectation& e : randoms(a))
    for (const Rational& v : e.values()) EXPECT_TRUE(v <= Rational(4) && (v * Rational(8)).is_integer());
}

TEST(Equal, SameProgramTwoSpellings) {
  Verdict v = equal_text(kX, "x := 1 <1/2> x := 0", "IF 1/2 THEN x := 1 ELSE x := 0 FI");
  EXPECT_TRUE(v.exact());
}

TEST(Equal, BiasMismatchFailsOnIndicator) {
  Verdict v = equal_text(kX, "x :in 1 <1/4> 0", "x :in 1 <1/2> 0");
  EXPECT_EQ(v.status, Status::Fails);
  ASSERT_TRUE(v.counterexample);
  EXPECT_EQ(v.counterexample->probe, "[x=0,y=0]");
}

TEST(Equal, BiasMismatchFailsOnObservedIndicator) {
  StateSpace s = parse_space(kX);
  Program p = parse_program("x :in 1 <1/4> 0", s), q = parse_program("x :in 1 <1/2> 0", s);
  ProbeOptions opts;
  opts.observed = {"x"};
  Verdict v = check_equal(p, q, ProbeFamily::build(s, {p, q}, opts), s);
  EXPECT_EQ(v.status, Status::Fails);
  ASSERT_TRUE(v.counterexample);
  EXPECT_EQ(v.counterexample->probe, "[x=0]");
  EXPECT_EQ(v.counterexample->lhs, Rational(3, 4));
  EXPECT_EQ(v.counterexample->rhs, Rational(1, 2));
}

TEST(Equal, DifferentAssignmentsFail) {
  StateSpace s = parse_space("var x in {a, b}");
  Program p = parse_program("x := a", s), q = parse_program("x := b", s);
  Verdict v = check_equal(p, q, ProbeFamily::build(s, {p, q}), s);
  EXPECT_EQ(v.status, Status::Fails);
}

TEST(Equal, DemonBeforeAndAfterDiffer) {
  SourceUnit a = corpus::program("demon_after"), b = corpus::program("demon_before");
  Verdict v = check_equal(a.program, b.program, ProbeFamily::build(a.space, {a.program, b.program}), a.space);
  EXPECT_EQ(v.status, Status::Fails);
  Verdict r = check_refines(a.program, b.program, ProbeFamily::build(a.space, {a.program, b.program}), a.space);
  EXPECT_TRUE(r.exact());
}

TEST(Equal, SplitStepMatchesCoinAtEveryGridPoint) {
  auto results = over_grid(uniform_grid(8), [](const Rational& p) {
    SourceUnit spec = corpus::program("split_spec", {{"p", p}});
    SourceUnit step = corpus::program("split_step", {{"p", p}});
    ProbeOptions opts;
    opts.observed = {"x"};
    return check_equal(spec.program, step.program, ProbeFamily::build(spec.space, {spec.program, step.program}, opts),
                       spec.space);
  });
  ASSERT_EQ(results.size(), 9u);
  for (const GridPoint& g : results) EXPECT_TRUE(g.verdict.exact()) << g.value << " " << g.verdict.note;
}

TEST(Equal, DyadicLoopIsExact) {
  SourceUnit spec = corpus::program("loop_spec_dyadic"), impl = corpus::program("loop_impl_dyadic");
  ProbeOptions opts;
  opts.observed = {"x"};
  Verdict v = check_equal(spec.program, impl.program, ProbeFamily::build(spec.space, {spec.program}, opts), spec.space);
  EXPECT_TRUE(v.exact()) << to_string(v.status) << " " << v.residual;
}

TEST(Equal, ThirdsLoopHoldsWithinResidual) {
  SourceUnit spec = corpus::program("loop_spec_thirds"), impl = corpus::program("loop_impl_thirds");
  ProbeOptions opts;
  opts.observed = {"x"};
  Verdict v = check_equal(spec.program, impl.program, ProbeFamily::build(spec.space, {spec.program}, opts), spec.space);
  EXPECT_TRUE(v.holds());
  EXPECT_FALSE(v.exact());
  EXPECT_LE(v.residual, LoopConfig{}.tolerance);
}

TEST(Equal, BudgetExhaustionIsInconclusive) {
  SourceUnit spec = corpus::program("loop_spec_thirds"), impl = corpus::program("loop_impl_thirds");
  ProbeOptions opts;
  opts.observed = {"x"};
  CheckOptions co;
  co.loop.max_iterations = 10;
  Verdict v =
      check_equal(spec.program, impl.program, ProbeFamily::build(spec.space, {spec.program}, opts), spec.space, co);
  EXPECT_EQ(v.status, Status::Inconclusive);
}

TEST(Equal, InitialFilterRestrictsStates) {
  StateSpace s = parse_space(kX);
  Program p = parse_program("IF y = 0 THEN x := 1 ELSE x := 0 FI", s), q = parse_program("x := 1", s);
  ProbeFamily f = ProbeFamily::build(s, {p, q});
  EXPECT_EQ(check_equal(p, q, f, s).status, Status::Fails);
  CheckOptions co;
  co.initial = parse_expr("y = 0", s);
  EXPECT_TRUE(check_equal(p, q, f, s, co).exact());
}

TEST(Refines, DemonicChoiceRefinedByEitherBranch) {
  StateSpace s = parse_space("var x in {a, b}");
  Program spec = parse_program("x :suchthat x in {a, b}", s);
  for (const char* impl_text : {"x := a", "x := b", "x := a <1/3> x := b"}) {
    Program impl = parse_program(impl_text, s);
    EXPECT_TRUE(check_refines(spec, impl, ProbeFamily::build(s, {spec, impl}), s).exact()) << impl_text;
    EXPECT_EQ(check_refines(impl, spec, ProbeFamily::build(s, {spec, impl}), s).status, Status::Fails) << impl_text;
  }
}

TEST(Refines, AbortIsRefinedByEverything) {
  EXPECT_TRUE(refines_text(kX, "ABORT", "x := 1 <1/2> y := 1").exact());
  EXPECT_EQ(refines_text(kX, "SKIP", "ABORT").status, Status::Fails);
}

TEST(Refines, ShrinkingSplitRefinesAnySplit) {
  SourceUnit any = corpus::program("split_any"), shrinking = corpus::program("split_shrinking");
  ProbeFamily f = ProbeFamily::build(any.space, {any.program, shrinking.program});
  EXPECT_TRUE(check_refines(any.program, shrinking.program, f, any.space).exact());
  EXPECT_EQ(check_refines(shrinking.program, any.program, f, any.space).status, Status::Fails);
}

TEST(Variant, CoinLoopTerminates) {
  SourceUnit u = corpus::program("coin_loop");
  Verdict v = check_variant(u.program, {parse_expr("[c = H]", u.space), 1, Rational(1, 2)}, u.space);
  EXPECT_TRUE(v.holds()) << v.note;
  Verdict strict = check_variant(u.program, {parse_expr("[c = H]", u.space), 1, Rational(3, 4)}, u.space);
  EXPECT_EQ(strict.status, Status::Fails);
}

TEST(Variant, DyadicLoopHalvesDenominator) {
  SourceUnit u = corpus::program("loop_impl_dyadic");
  Expr variant = parse_expr("3 * [p in {1/8, 3/8, 5/8, 7/8}] + 2 * [p in {1/4, 3/4}] + [p = 1/2]", u.space);
  Verdict v = check_variant(u.program, {variant, 3, Rational(1)}, u.space);
  EXPECT_TRUE(v.holds()) << v.note;
  EXPECT_EQ(check_variant(u.program, {variant, 2, Rational(1)}, u.space).status, Status::Fails);
}

TEST(Variant, DivergenceFails) {
  SourceUnit u = corpus::program("diverge");
  Verdict v = check_variant(u.program, {parse_expr("1", u.space), 1, Rational(1, 2)}, u.space);
  EXPECT_EQ(v.status, Status::Fails);
}

TEST(Variant, RejectsNonIntegerOrNegativeVariant) {
  SourceUnit u = corpus::program("coin_loop");
  EXPECT_THROW(check_variant(u.program, {parse_expr("1/2", u.space), 1, Rational(1, 2)}, u.space), VariantError);
  EXPECT_THROW(check_variant(u.program, {parse_expr("[c = H] - 1", u.space), 1, Rational(1, 2)}, u.space),
               VariantError);
}

TEST(Resolutions, DemonAfterFlipHasStateDependentStrategies) {
  SourceUnit u = corpus::program("demon_after", {{"p", Rational(1, 2)}});
  std::vector<Resolution> rs = enumerate_resolutions(u.program, u.space, u.space.state(0));
  EXPECT_EQ(rs.size(), 4u);
  EXPECT_EQ(distinct_outputs(rs).size(), 4u);
  for (const Resolution& r : rs) EXPECT_EQ(mass(r.output), Rational(1));
}

TEST(Resolutions, IdenticalBranchesAreNotMerged) {
  StateSpace s = parse_space(kX);
  std::vector<Resolution> rs = enumerate_resolutions(parse_program("x := 1 |^| x := 1", s), s, s.state(0));
  EXPECT_EQ(rs.size(), 2u);
  EXPECT_EQ(distinct_outputs(rs).size(), 1u);
}

TEST(Resolutions, AbortLosesMass) {
  StateSpace s = parse_space(kX);
  std::vector<Resolution> rs = enumerate_resolutions(parse_program("x := 1 <1/3> ABORT", s), s, s.state(0));
  ASSERT_EQ(rs.size(), 1u);
  EXPECT_EQ(mass(rs[0].output), Rational(1, 3));
}

TEST(Resolutions, MinimumMatchesWp) {
  for (const char* name : corpus::kLoopFree) {
    SourceUnit u = corpus::program(name);
    if (u.space.state_count() > 200) continue;
    Expr post = parse_expr(u.space.variable_count() > 1 ? "[" + u.space.domain(0).name + " = " +
                                                              u.space.domain(1).name + "]"
                                                        : "1",
                           u.space);
    WpResult w = wp(u.program, post, u.space);
    for (std::size_t i = 0; i < u.space.state_count(); ++i) {
      std::vector<Resolution> rs = enumerate_resolutions(u.program, u.space, u.space.state(i));
      ASSERT_FALSE(rs.empty());
      Rational best = expected_value(rs[0].output, post_of(post));
      for (const Resolution& r : rs) best = min(best, expected_value(r.output, post_of(post)));
      EXPECT_EQ(best, w.pre[i]) << name << " " << u.space.describe(u.space.state(i));
    }
  }
}

TEST(Resolutions, BoundAndLoops) {
  StateSpace s = parse_space("var x in {0 .. 3}");
  Program many = parse_program("x :in {0, 1, 2, 3}; x :in {0, 1, 2, 3}; x :in {0, 1, 2, 3}", s);
  EXPECT_THROW(enumerate_resolutions(many, s, s.state(0), 10), ResolutionBoundError);
  EXPECT_THROW(enumerate_resolutions(parse_program("WHILE x < 3 DO x := x + 1 OD", s), s, s.state(0)), Error);
}

TEST(Resolutions, ReachableStates) {
  StateSpace s = parse_space("var x in {0 .. 3}");
  auto reach = reachable_states(parse_program("x := 1 <1/2> x := 3; x := 0 |^| SKIP", s), s, s.state(0));
  EXPECT_EQ(reach.size(), 3u);
}

TEST(Grid, Uniform) {
  auto g = uniform_grid(4);
  ASSERT_EQ(g.size(), 5u);
  EXPECT_EQ(g[1], Rational(1, 4));
  EXPECT_EQ(g.back(), Rational(1));
}
