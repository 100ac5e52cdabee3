#include "pgcl/checks.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <set>

#include "pgcl/errors.hpp"
#include "pgcl/resolutions.hpp"

namespace pgcl {

std::string to_string(Status s) {
  switch (s) {
    case Status::Holds:
      return "holds";
    case Status::Fails:
      return "fails";
    case Status::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

namespace {

std::vector<std::size_t> observed_indices(const StateSpace& space, const std::vector<std::string>& names) {
  std::vector<std::size_t> out;
  if (names.empty()) {
    for (std::size_t i = 0; i < space.variable_count(); ++i) out.push_back(i);
    return out;
  }
  for (const auto& n : names) {
    auto idx = space.index_of(n);
    if (!idx) throw Error("observed variable '" + n + "' is not declared");
    out.push_back(*idx);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::size_t> initial_states(const StateSpace& space, const CheckOptions& options) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < space.state_count(); ++i)
    if (!options.initial || eval_bool(*options.initial, space.state(i))) out.push_back(i);
  return out;
}

enum class Relation { Equal, Refines };

Verdict compare(const Program& p, const Program& q, Relation rel, const ProbeFamily& probes, const StateSpace& space,
                const CheckOptions& options) {
  const auto starts = initial_states(space, options);
  Verdict v;
  bool converged = true;
  for (const auto& probe : probes.probes()) {
    WpResult a = wp(p, probe.values, space, options.loop);
    WpResult b = wp(q, probe.values, space, options.loop);
    converged = converged && a.converged && b.converged;
    v.residual = max(v.residual, max(a.loop_residual, b.loop_residual));
    for (std::size_t i : starts) {
      const Rational& x = a.pre[i];
      const Rational& y = b.pre[i];
      bool separated = y + b.loop_residual < x;
      if (rel == Relation::Equal) separated = separated || x + a.loop_residual < y;
      if (separated) {
        v.status = Status::Fails;
        v.counterexample = Counterexample{probe.name, space.state(i), x, y};
        return v;
      }
    }
  }
  v.status = converged ? Status::Holds : Status::Inconclusive;
  if (!converged) v.note = "loop iteration budget exhausted above the residual tolerance";
  return v;
}

}  // namespace

ProbeFamily ProbeFamily::build(const StateSpace& space, const std::vector<Program>& programs,
                               const ProbeOptions& options) {
  ProbeFamily family;
  family.seed_ = options.seed;
  const auto observed = observed_indices(space, options.observed);
  const std::set<std::size_t> observed_set(observed.begin(), observed.end());

  // Projection of each state onto the observed variables, numbered by first
  // appearance.
  std::map<Valuation, std::size_t> class_of;
  std::vector<std::size_t> cls(space.state_count());
  std::vector<Valuation> reps;
  for (std::size_t i = 0; i < space.state_count(); ++i) {
    Valuation s = space.state(i);
    Valuation key;
    for (std::size_t v : observed) key.push_back(s[v]);
    auto [it, fresh] = class_of.emplace(key, reps.size());
    if (fresh) reps.push_back(key);
    cls[i] = it->second;
  }

  for (std::size_t c = 0; c < reps.size(); ++c) {
    std::string name = "[";
    for (std::size_t j = 0; j < observed.size(); ++j)
      name += (j ? "," : "") + space.domain(observed[j]).name + "=" + to_string(reps[c][j]);
    name += "]";
    std::vector<Rational> values(space.state_count());
    for (std::size_t i = 0; i < space.state_count(); ++i) values[i] = cls[i] == c ? 1 : 0;
    family.probes_.push_back(Probe{name, Expectation(std::move(values))});
  }

  std::vector<Expr> predicates = options.extra_predicates;
  for (const auto& p : programs) collect_predicates(p, predicates);
  std::vector<Expr> kept;
  for (const auto& e : predicates) {
    if (std::find(kept.begin(), kept.end(), e) != kept.end()) continue;
    std::set<std::size_t> vars;
    collect_variables(e, vars);
    if (!std::includes(observed_set.begin(), observed_set.end(), vars.begin(), vars.end())) continue;
    try {
      family.probes_.push_back(Probe{"[" + to_text(e) + "]", Expectation::from_expr(space, e)});
      kept.push_back(e);
    } catch (const EvalError&) {
      // Not total over the space; skip it as a probe.
    }
  }

  for (std::size_t k = 0; k < options.random_count; ++k) {
    std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                      static_cast<std::uint32_t>(k)};
    std::mt19937_64 gen(seq);
    std::vector<Rational> per_class(reps.size());
    for (auto& r : per_class) r = Rational(static_cast<long>(gen() % 33), 8);
    std::vector<Rational> values(space.state_count());
    for (std::size_t i = 0; i < space.state_count(); ++i) values[i] = per_class[cls[i]];
    family.probes_.push_back(Probe{"random#" + std::to_string(k), Expectation(std::move(values))});
  }
  return family;
}

Verdict check_equal(const Program& p, const Program& q, const ProbeFamily& probes, const StateSpace& space,
                    const CheckOptions& options) {
  return compare(p, q, Relation::Equal, probes, space, options);
}

Verdict check_refines(const Program& spec, const Program& impl, const ProbeFamily& probes, const StateSpace& space,
                      const CheckOptions& options) {
  return compare(spec, impl, Relation::Refines, probes, space, options);
}

namespace {

long natural_variant(const Expr& variant, const Valuation& s, const StateSpace& space) {
  Rational v = eval_number(variant, s);
  if (v.is_negative() || !v.is_integer())
    throw VariantError("variant " + to_text(variant) + " is " + v.str() + " at " + space.describe(s) +
                       "; variants must be natural numbers");
  return v.numerator().get_si();
}

// States at the head of the first loop, from the given initial states.
const While* loop_heads(const Program& p, const StateSpace& space, std::set<Valuation>& states) {
  if (const auto* w = as<While>(p)) return w;
  if (const auto* s = as<Seq>(p)) {
    if (find_loop(s->first)) return loop_heads(s->first, space, states);
    std::set<Valuation> next;
    for (const auto& v : states) next.merge(reachable_states(s->first, space, v));
    states = std::move(next);
    return loop_heads(s->second, space, states);
  }
  if (find_loop(p)) throw Error("variant check needs the loop at top level or after a loop-free prefix");
  throw Error("program has no loop");
}

}  // namespace

Verdict check_variant(const Program& program, const VariantSpec& spec, const StateSpace& space,
                      const CheckOptions& options) {
  std::set<Valuation> heads;
  for (std::size_t i : initial_states(space, options)) heads.insert(space.state(i));
  const While* loop = loop_heads(program, space, heads);

  // Guard-satisfying states reachable by iterating the body.
  std::set<Valuation> seen;
  std::deque<Valuation> work;
  for (const auto& s : heads)
    if (!branch_weight(loop->guard, s).is_zero() && seen.insert(s).second) work.push_back(s);
  while (!work.empty()) {
    Valuation s = std::move(work.front());
    work.pop_front();
    for (const auto& t : reachable_states(loop->body, space, s)) {
      if (!space.contains(t)) throw EvalError("loop reaches a state outside the declared domains: " + space.describe(t));
      if (!branch_weight(loop->guard, t).is_zero() && seen.insert(t).second) work.push_back(t);
    }
  }

  Verdict v;
  for (const auto& s : seen) {
    long here = natural_variant(spec.variant, s, space);
    if (here > spec.upper_bound) {
      v.status = Status::Fails;
      v.counterexample = Counterexample{"variant bound", s, Rational(here), Rational(spec.upper_bound)};
      v.note = "variant exceeds its upper bound";
      return v;
    }
    for (const auto& r : enumerate_resolutions(loop->body, space, s)) {
      Rational down;
      for (const auto& [t, m] : r.output) {
        long there = natural_variant(spec.variant, t, space);
        if (there < here) down += m;
      }
      if (down < spec.epsilon) {
        v.status = Status::Fails;
        v.counterexample = Counterexample{"decrease probability (" + r.strategy + ")", s, down, spec.epsilon};
        v.note = "variant decreases with probability below epsilon";
        return v;
      }
    }
  }
  v.note = std::to_string(seen.size()) + " guard states checked";
  return v;
}

std::vector<GridPoint> over_grid(const std::vector<Rational>& grid,
                                 const std::function<Verdict(const Rational&)>& check) {
  std::vector<GridPoint> out;
  out.reserve(grid.size());
  for (const auto& g : grid) out.push_back(GridPoint{g, check(g)});
  return out;
}

std::vector<Rational> uniform_grid(long n) {
  if (n < 1) throw Error("grid needs at least one step");
  std::vector<Rational> out;
  for (long k = 0; k <= n; ++k) out.emplace_back(k, n);
  return out;
}

}  // namespace pgcl
