// One line per acceptance criterion; exits non-zero if any fails.
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "corpus.hpp"
#include "pgcl/checks.hpp"
#include "pgcl/machine.hpp"
#include "pgcl/resolutions.hpp"
#include "pgcl/sampler.hpp"
#include "pgcl/wp.hpp"

using namespace pgcl;
using sampler::WeightedDist;

namespace {

// Collects failed expectations for one criterion.
struct Criterion {
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  template <typename A, typename B>
  void expect_eq(const A& a, const B& b, const std::string& what) {
    if (!(a == b)) {
      std::ostringstream s;
      s << what << ": got " << a << ", want " << b;
      failures.push_back(s.str());
    }
  }
};

std::vector<Rational> eighths() { return uniform_grid(8); }

Rational constant_pre(const SourceUnit& u, const char* post, Criterion& c, const std::string& what) {
  WpResult r = wp(u.program, parse_expr(post, u.space, u.params), u.space);
  c.expect(r.converged && r.loop_residual.is_zero(), what + ": not exact");
  for (std::size_t i = 1; i < r.pre.size(); ++i) c.expect(r.pre[i] == r.pre[0], what + ": not constant");
  return r.pre[0];
}

void wp_oracles(Criterion& c) {
  c.expect_eq(constant_pre(corpus::program("two_coins"), "[c1 = c2]", c, "two coins"), Rational(1, 2), "two coins");
  for (const Rational& p : eighths()) {
    std::string at = " at p=" + p.str();
    c.expect_eq(constant_pre(corpus::program("mixed_coins", {{"p", p}}), "[c1 = c2]", c, "mixed" + at),
                Rational(1, 2), "mixed" + at);
    c.expect_eq(constant_pre(corpus::program("demon_after", {{"p", p}}), "[c1 = c2]", c, "demon after" + at),
                Rational(0), "demon after" + at);
    c.expect_eq(constant_pre(corpus::program("demon_before", {{"p", p}}), "[c1 = c2]", c, "demon before" + at),
                min(p, Rational(1) - p), "demon before" + at);
  }
  SourceUnit u = corpus::program("assign_example");
  WpResult r = wp(u.program, parse_expr("x + 3", u.space), u.space);
  for (std::size_t i = 0; i < u.space.state_count(); ++i) {
    Valuation v = u.space.state(i);
    Rational x = std::get<Rational>(v[0]), y = std::get<Rational>(v[1]);
    Rational expected = Rational(1, 3) * (Rational(1) - y + Rational(3)) + Rational(2, 3) * (Rational(3) * x + Rational(3));
    c.expect_eq(r.pre[i], expected, "assignment example at " + u.space.describe(v));
  }
}

Verdict equal_on_x(const SourceUnit& a, const SourceUnit& b) {
  ProbeOptions opts;
  opts.observed = {"x"};
  return check_equal(a.program, b.program, ProbeFamily::build(a.space, {a.program, b.program}, opts), a.space);
}

void derivation_steps(Criterion& c) {
  for (const Rational& p : eighths()) {
    Verdict v = equal_on_x(corpus::program("split_spec", {{"p", p}}), corpus::program("split_step", {{"p", p}}));
    c.expect(v.exact(), "split step at p=" + p.str() + ": " + to_string(v.status));
  }
  const Rational tolerance = Rational::power_of_two(-40);
  for (const Rational& p : {Rational(1, 3), Rational(0), Rational(1, 8), Rational(3, 8), Rational(1, 2), Rational(3, 4),
                            Rational(1)}) {
    Verdict v =
        equal_on_x(corpus::program("binary_spec", {{"p", p}}), corpus::program("binary_sampler", {{"p", p}}));
    bool dyadic = (p * Rational(8)).is_integer();
    std::string at = "loop at p=" + p.str();
    if (dyadic) c.expect(v.exact(), at + ": " + to_string(v.status) + " residual " + v.residual.str());
    else c.expect(v.holds() && v.residual <= tolerance, at + ": " + to_string(v.status) + " residual " + v.residual.str());
  }
  {
    SourceUnit any = corpus::program("split_any"), shrinking = corpus::program("split_shrinking");
    Verdict v = check_refines(any.program, shrinking.program,
                              ProbeFamily::build(any.space, {any.program, shrinking.program}), any.space);
    c.expect(v.exact(), "split refinement: " + to_string(v.status));
  }
  {
    SourceUnit u = corpus::program("coin_loop");
    Verdict v = check_variant(u.program, {parse_expr("[c = H]", u.space), 1, Rational(1, 2)}, u.space);
    c.expect(v.holds(), "coin loop variant: " + v.note);
  }
  const StateSpace sampler_space = corpus::program("binary_sampler").space;
  for (const Value& p : sampler_space.domain(0).values) {
    SourceUnit u = corpus::program("binary_sampler", {{"p", std::get<Rational>(p)}});
    Expr variant = parse_expr(
        "3 * [x in {1/8, 3/8, 5/8, 7/8}] + 2 * [x in {1/4, 3/4}] + [x = 1/2] + [x in {1/3, 2/3}]", u.space);
    Verdict v = check_variant(u.program, {variant, 3, Rational(1, 2)}, u.space);
    c.expect(v.holds(), "sampler loop variant at p=" + to_string(p) + ": " + v.note);
  }
  {
    SourceUnit u = corpus::program("diverge");
    Verdict v = check_variant(u.program, {parse_expr("1", u.space), 1, Rational(1, 2)}, u.space);
    c.expect(v.status == Status::Fails, "WHILE true DO SKIP OD variant should fail");
  }
}

void sampler_exactness(Criterion& c) {
  const std::vector<std::vector<std::int64_t>> corpus{{1},    {1, 1},           {1, 2},
                                                      {1, 3}, {2, 1, 3, 4},     {1, 1, 1, 1, 1, 1},
                                                      {1, 1, 1, 1, 1, 1, 1}, {5, 1, 1, 1}};
  for (const auto& w : corpus) {
    WeightedDist d(w);
    ddg::MachineAnalysis a = ddg::analyze(ddg::build_machine(d));
    std::string name = "[";
    for (auto x : w) name += std::to_string(x) + (name.size() > 0 ? " " : "");
    name.back() = ']';
    for (std::size_t i = 0; i < w.size(); ++i)
      c.expect_eq(a.outcome_prob[i], Rational(w[i], d.total()), name + " outcome " + std::to_string(i + 1));
    long bound = 2 * static_cast<long>(w.size()) - 2;
    c.expect(a.expected_flips <= Rational(bound), name + " expected flips " + a.expected_flips.str() + " > 2N-2");
  }
}

void die_machine(Criterion& c) {
  ddg::Machine m = ddg::build_machine(WeightedDist({1, 1, 1, 1, 1, 1}));
  ddg::MachineAnalysis a = ddg::analyze(m);
  c.expect_eq(a.node_count, std::size_t{17}, "die machine nodes");
  c.expect_eq(a.expected_flips, Rational(4), "die machine expected flips");
}

void knuth_yao(Criterion& c) {
  ddg::LoadedMachine lm = ddg::load_machine(corpus::read("machines/knuth_yao_die.machine"));
  ddg::MachineAnalysis a = ddg::analyze(lm.machine);
  c.expect_eq(a.node_count, std::size_t{13}, "Knuth-Yao states");
  for (std::size_t i = 0; i < a.outcome_prob.size(); ++i)
    c.expect_eq(a.outcome_prob[i], Rational(1, 6), "Knuth-Yao outcome " + std::to_string(i + 1));
  c.expect_eq(a.expected_flips, Rational(11, 3), "Knuth-Yao expected flips");
}

void die_trials(Criterion& c) {
  sampler::DistFile f = sampler::parse_dist_file(corpus::read("dists/die.txt"));
  sampler::TrialsReport r = sampler::run_trials(f.dist, f.runs, 1);
  for (std::size_t i = 0; i < r.rel_freq.size(); ++i)
    c.expect(r.rel_freq[i] >= 0.99 && r.rel_freq[i] <= 1.01,
             "relative frequency " + std::to_string(i + 1) + " = " + std::to_string(r.rel_freq[i]));
  c.expect(r.avg_flips >= 3.97 && r.avg_flips <= 4.03, "average flips " + std::to_string(r.avg_flips));
  sampler::ChiSquare chi = sampler::chi_square(r.tallies, f.dist);
  c.expect(chi.p_value >= 0.001, "chi-square rejects: p = " + std::to_string(chi.p_value));
}

void binary_laws(Criterion& c) {
  for (int p : {0, 1}) {
    sampler::ScriptedBits none({});
    sampler::SampleTrace t = sampler::sample_binary(Rational(p), none);
    c.expect(t.flips == 0 && t.outcome == static_cast<std::size_t>(p), "p=" + std::to_string(p) + " needs flips");
  }
  for (int bit : {0, 1}) {
    sampler::ScriptedBits one({bit});
    c.expect_eq(sampler::sample_binary(Rational(1, 2), one).flips, std::size_t{1}, "p=1/2 flips");
  }
  c.expect_eq(ddg::analyze(ddg::build_machine(WeightedDist({1, 2}))).expected_flips, Rational(2), "p=1/3 flips");
  c.expect_eq(ddg::analyze(ddg::build_machine(WeightedDist({3, 1}))).expected_flips, Rational(3, 2), "p=3/4 flips");

  const std::uint64_t runs = 100000;
  for (auto [num, den] : {std::pair<long, long>{1, 3}, {3, 4}, {3, 10}}) {
    sampler::SeededBits a(100 + num), b(200 + num);
    WeightedDist d({num, den - num});
    std::vector<std::uint64_t> binary(2, 0), discrete(2, 0);
    for (std::uint64_t i = 0; i < runs; ++i) {
      binary[sampler::sample_binary(Rational(num, den), a).outcome == 1 ? 0 : 1]++;
      discrete[sampler::sample_discrete(d, b).outcome - 1]++;
    }
    sampler::ChiSquare chi = sampler::chi_square_homogeneity(binary, discrete);
    c.expect(chi.p_value >= 0.001, "binary vs discrete at " + std::to_string(num) + "/" + std::to_string(den) +
                                       ": p = " + std::to_string(chi.p_value));
  }
}

// Posts for the property checks: brackets of the first variable's values and
// seeded random combinations of brackets over the first two variables. They
// are expressions so programs that leave the declared domains can be read.
std::vector<Expr> posts(const StateSpace& space, std::mt19937_64& rng) {
  std::vector<std::string> brackets;
  for (std::size_t var = 0; var < std::min<std::size_t>(2, space.variable_count()); ++var)
    for (const Value& v : space.domain(var).values)
      brackets.push_back("[" + space.domain(var).name + " = " + to_string(v) + "]");
  std::vector<Expr> out;
  for (const Value& v : space.domain(0).values)
    out.push_back(parse_expr("[" + space.domain(0).name + " = " + to_string(v) + "]", space));
  for (int k = 0; k < 3; ++k) {
    std::string text = "0";
    for (const auto& b : brackets) text += " + " + std::to_string(rng() % 9) + "/4 * " + b;
    out.push_back(parse_expr(text, space));
  }
  return out;
}

Rational max_over(const Expr& f, const StateSpace& space) {
  Rational best = 0;
  for (std::size_t i = 0; i < space.state_count(); ++i) best = max(best, eval_number(f, space.state(i)));
  return best;
}

void properties(Criterion& c) {
  std::mt19937_64 rng(5);
  for (const char* name : corpus::kPrograms) {
    SourceUnit u = corpus::program(name);
    if (u.space.state_count() > 10000) continue;
    const std::string tag(name);
    std::vector<Expr> fs = posts(u.space, rng);
    std::vector<Expectation> pres;
    for (const Expr& f : fs) {
      WpResult r = wp(u.program, f, u.space);
      pres.push_back(r.pre);
      c.expect(r.pre.max() <= max_over(f, u.space), tag + ": feasibility for " + to_text(f));
      Rational k(static_cast<long>(1 + rng() % 5), 2);
      WpResult scaled = wp(u.program, Expr::binary(Op::Mul, Expr::number(k), f), u.space);
      if (r.loop_residual.is_zero() && scaled.loop_residual.is_zero())
        c.expect(scaled.pre == r.pre.scaled(k), tag + ": scaling");
      if (find_loop(u.program)) {
        Expectation previous = Expectation::constant(u.space, 0);
        for (std::size_t n = 1; n <= 6; ++n) {
          LoopConfig cfg;
          cfg.max_iterations = n;
          Expectation pre = wp(u.program, f, u.space, cfg).pre;
          c.expect(previous.leq(pre), tag + ": chain ascent");
          previous = pre;
        }
        c.expect(previous.leq(r.pre), tag + ": iterates below the limit");
      }
    }
    for (std::size_t i = 0; i + 1 < fs.size(); ++i) {
      Expr bigger = Expr::binary(Op::Add, fs[i], fs[i + 1]);
      c.expect(pres[i].leq(wp(u.program, bigger, u.space).pre), tag + ": monotonicity");
    }
    if (is_loop_free(u.program)) {
      for (std::size_t s = 0; s < u.space.state_count(); ++s) {
        std::vector<Resolution> rs = enumerate_resolutions(u.program, u.space, u.space.state(s));
        for (std::size_t k = 0; k < fs.size(); ++k) {
          PostFn post = post_of(fs[k]);
          Rational best = expected_value(rs.at(0).output, post);
          for (const Resolution& r : rs) best = min(best, expected_value(r.output, post));
          c.expect(best == pres[k][s], tag + ": resolution minimum differs from wp at " +
                                           u.space.describe(u.space.state(s)));
        }
      }
    }
  }

  for (int round = 0; round < 5000; ++round) {
    std::vector<std::int64_t> w(1 + rng() % 10);
    for (auto& x : w) x = 1 + static_cast<std::int64_t>(rng() % 100);
    sampler::CumulativeDist d = sampler::CumulativeDist::initial(WeightedDist(w));
    try {
      while (!d.terminal()) {
        d.check();
        d = rng() % 2 ? sampler::split_left(d) : sampler::split_right(d);
      }
      d.check();
    } catch (const sampler::InvariantBreach& e) {
      c.expect(false, std::string("window invariant: ") + e.what());
    }
  }
}

}  // namespace

int main() {
  struct Entry {
    int number;
    const char* title;
    std::function<void(Criterion&)> run;
    double budget_seconds;
  };
  const std::vector<Entry> entries{
      {1, "wp oracle suite", wp_oracles, 1},
      {2, "derivation steps", derivation_steps, 0},
      {3, "sampler exactness", sampler_exactness, 5},
      {4, "die machine: 17 nodes, 4 expected flips", die_machine, 0},
      {5, "Knuth-Yao die: 13 states, 11/3 expected flips", knuth_yao, 0},
      {6, "10^6 die trials", die_trials, 30},
      {7, "binary sampler laws", binary_laws, 0},
      {8, "property suites", properties, 0},
  };
  int failed = 0;
  for (const Entry& e : entries) {
    Criterion c;
    auto start = std::chrono::steady_clock::now();
    try {
      e.run(c);
    } catch (const std::exception& ex) {
      c.failures.push_back(std::string("exception: ") + ex.what());
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (e.budget_seconds > 0 && seconds > e.budget_seconds)
      c.failures.push_back("took " + std::to_string(seconds) + " s, budget " + std::to_string(e.budget_seconds) + " s");
    std::ostringstream time;
    time.precision(2);
    time << std::fixed << seconds;
    std::cout << (c.failures.empty() ? "PASS" : "FAIL") << " " << e.number << " " << e.title << " (" << time.str()
              << " s)\n";
    for (const auto& f : c.failures) std::cout << "    " << f << "\n";
    std::cout.flush();
    if (!c.failures.empty()) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
