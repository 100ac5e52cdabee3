#include "pgcl/resolutions.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <optional>

#include "pgcl/errors.hpp"

namespace pgcl {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

using Outs = std::vector<Resolution>;

std::string labelled(const std::string& head, const std::string& rest) {
  return rest.empty() ? head : head + "." + rest;
}

void add_scaled(Distribution& into, const Distribution& d, const Rational& w) {
  if (w.is_zero()) return;
  for (const auto& [s, m] : d) into[s] += m * w;
}

std::size_t saturating_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) return std::numeric_limits<std::size_t>::max();
  return a * b;
}

// Assigns each target of a such-that statement in turn; calls f for every
// combination of domain values.
template <typename F>
void for_each_assignment(const SuchThat& n, const StateSpace& space, const Valuation& s, F&& f) {
  std::vector<std::size_t> digit(n.targets.size(), 0);
  Valuation next = s;
  while (true) {
    for (std::size_t i = 0; i < n.targets.size(); ++i)
      next[n.targets[i].index] = space.domain(n.targets[i].index).values[digit[i]];
    f(next);
    std::size_t i = 0;
    for (; i < digit.size(); ++i) {
      if (++digit[i] < space.domain(n.targets[i].index).values.size()) break;
      digit[i] = 0;
    }
    if (i == digit.size()) return;
  }
}

class Enumerator {
 public:
  Enumerator(const StateSpace& space, std::size_t bound) : space_(space), bound_(bound) {}

  const Outs& run(const Program& p, const Valuation& s) {
    auto key = std::make_pair(p.id(), s);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Outs out = compute(p, s);
    check(out.size());
    return memo_.emplace(std::move(key), std::move(out)).first->second;
  }

 private:
  void check(std::size_t n) const {
    if (n > bound_)
      throw ResolutionBoundError("resolution count exceeds the bound of " + std::to_string(bound_));
  }

  static Outs point(const Valuation& s) { return {Resolution{"", Distribution{{s, Rational(1)}}}}; }

  // Union of the alternatives, tagged with the choice made.
  Outs choose(const std::vector<std::pair<std::string, const Outs*>>& alts) {
    Outs out;
    for (const auto& [tag, outs] : alts)
      for (const auto& r : *outs) {
        out.push_back(Resolution{labelled(tag, r.strategy), r.output});
        check(out.size());
      }
    return out;
  }

  // Independent resolution of both sides, mixed with weight w on the left.
  Outs mix(const Rational& w, const Outs& left, const Outs& right) {
    if (w == Rational(1)) return left;
    if (w.is_zero()) return right;
    check(saturating_mul(left.size(), right.size()));
    Outs out;
    for (const auto& a : left)
      for (const auto& b : right) {
        Resolution r;
        if (!a.strategy.empty() || !b.strategy.empty()) r.strategy = "<" + a.strategy + "|" + b.strategy + ">";
        add_scaled(r.output, a.output, w);
        add_scaled(r.output, b.output, Rational(1) - w);
        out.push_back(std::move(r));
      }
    return out;
  }

  Outs sequence(const Program& second, const Outs& first) {
    Outs out;
    for (const auto& a : first) {
      std::vector<std::pair<const Valuation*, const Outs*>> parts;
      std::size_t count = 1;
      for (const auto& [t, m] : a.output) {
        const Outs& o = run(second, t);
        parts.emplace_back(&t, &o);
        count = saturating_mul(count, o.size());
      }
      check(out.size() + count);
      // Mixed-radix walk over one choice per intermediate state.
      std::vector<std::size_t> digit(parts.size(), 0);
      while (true) {
        Resolution r;
        std::string tail;
        for (std::size_t i = 0; i < parts.size(); ++i) {
          const Resolution& b = (*parts[i].second)[digit[i]];
          add_scaled(r.output, b.output, a.output.at(*parts[i].first));
          if (!b.strategy.empty()) tail += (tail.empty() ? "" : ", ") + space_.describe(*parts[i].first) + "->" + b.strategy;
        }
        r.strategy = a.strategy;
        if (!tail.empty()) r.strategy += (r.strategy.empty() ? "" : " ; ") + std::string("{") + tail + "}";
        out.push_back(std::move(r));
        std::size_t i = 0;
        for (; i < digit.size(); ++i) {
          if (++digit[i] < parts[i].second->size()) break;
          digit[i] = 0;
        }
        if (i == digit.size()) break;
      }
    }
    return out;
  }

  Outs compute(const Program& p, const Valuation& s) {
    return std::visit(
        overloaded{
            [&](const Skip&) { return point(s); },
            [&](const Abort&) { return Outs{Resolution{"", {}}}; },
            [&](const Assign& n) {
              Valuation next = s;
              for (std::size_t i = 0; i < n.targets.size(); ++i)
                next[n.targets[i].index] = eval_value(n.values[i], s);
              return point(next);
            },
            [&](const Seq& n) {
              Outs first = run(n.first, s);
              return sequence(n.second, first);
            },
            [&](const IfBool& n) {
              return eval_bool(n.condition, s) ? run(n.then_branch, s) : run(n.else_branch, s);
            },
            [&](const IfProb& n) {
              Rational w = branch_weight(n.probability, s);
              return mix(w, w.is_zero() ? Outs{} : run(n.then_branch, s),
                         w == Rational(1) ? Outs{} : run(n.else_branch, s));
            },
            [&](const ProbChoice& n) {
              Rational w = branch_weight(n.probability, s);
              return mix(w, w.is_zero() ? Outs{} : run(n.left, s), w == Rational(1) ? Outs{} : run(n.right, s));
            },
            [&](const DemonChoice& n) {
              const Outs& l = run(n.left, s);
              const Outs& r = run(n.right, s);
              return choose({{"L", &l}, {"R", &r}});
            },
            [&](const ProbAssign& n) {
              Rational w = branch_weight(n.probability, s);
              Distribution d;
              Valuation next = s;
              if (!w.is_zero()) {
                next[n.target.index] = eval_value(n.left, s);
                d[next] += w;
              }
              if (w != Rational(1)) {
                next[n.target.index] = eval_value(n.right, s);
                d[next] += Rational(1) - w;
              }
              return Outs{Resolution{"", std::move(d)}};
            },
            [&](const DemonAssign& n) {
              Valuation a = s, b = s;
              a[n.target.index] = eval_value(n.left, s);
              b[n.target.index] = eval_value(n.right, s);
              return Outs{Resolution{"L", {{a, Rational(1)}}}, Resolution{"R", {{b, Rational(1)}}}};
            },
            [&](const ChooseFromSet& n) {
              Outs out;
              Valuation next = s;
              for (std::size_t i = 0; i < n.elements.size(); ++i) {
                next[n.target.index] = eval_value(n.elements[i], s);
                out.push_back(Resolution{"#" + std::to_string(i), {{next, Rational(1)}}});
              }
              return out;
            },
            [&](const SuchThat& n) {
              Outs out;
              for_each_assignment(n, space_, s, [&](const Valuation& next) {
                if (!eval_bool(n.predicate, next)) return;
                out.push_back(Resolution{space_.describe(next), {{next, Rational(1)}}});
                check(out.size());
              });
              if (out.empty()) out.push_back(Resolution{"none", {}});
              return out;
            },
            [&](const ChooseFromDist& n) {
              Distribution d;
              Rational total;
              Valuation next = s;
              for (const auto& e : n.entries) {
                Rational w = branch_weight(e.probability, s);
                total += w;
                if (w.is_zero()) continue;
                next[n.target.index] = eval_value(e.value, s);
                d[next] += w;
              }
              if (total != Rational(1))
                throw ProbabilityError("distribution for '" + n.target.name + "' sums to " + total.str() + ", not 1");
              return Outs{Resolution{"", std::move(d)}};
            },
            [&](const GuardedIf& n) {
              std::vector<std::string> tags;
              std::vector<const Outs*> bodies;
              for (std::size_t i = 0; i < n.branches.size(); ++i) {
                if (!eval_bool(n.branches[i].guard, s)) continue;
                tags.push_back("[]" + std::to_string(i + 1));
                bodies.push_back(&run(n.branches[i].body, s));
              }
              if (bodies.empty()) return Outs{Resolution{"", {}}};
              // A single enabled guard is not a choice.
              if (bodies.size() == 1) return *bodies.front();
              std::vector<std::pair<std::string, const Outs*>> alts;
              for (std::size_t i = 0; i < bodies.size(); ++i) alts.emplace_back(tags[i], bodies[i]);
              return choose(alts);
            },
            [&](const Assert& n) { return eval_bool(n.predicate, s) ? point(s) : Outs{Resolution{"", {}}}; },
            [&](const While&) -> Outs { throw Error("cannot enumerate resolutions of a program with loops"); },
        },
        p.node().v);
  }

  const StateSpace& space_;
  std::size_t bound_;
  std::map<std::pair<const void*, Valuation>, Outs> memo_;
};

class Reach {
 public:
  explicit Reach(const StateSpace& space) : space_(space) {}

  std::set<Valuation> run(const Program& p, const Valuation& s) {
    auto key = std::make_pair(p.id(), s);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::set<Valuation> out = compute(p, s);
    memo_.emplace(std::move(key), out);
    return out;
  }

 private:
  std::set<Valuation> compute(const Program& p, const Valuation& s) {
    auto assign = [&](const VarRef& t, const Expr& e) {
      Valuation next = s;
      next[t.index] = eval_value(e, s);
      return next;
    };
    auto both = [&](const Rational& w, const Program& a, const Program& b) {
      std::set<Valuation> out;
      if (!w.is_zero()) out = run(a, s);
      if (w != Rational(1)) out.merge(run(b, s));
      return out;
    };
    return std::visit(
        overloaded{
            [&](const Skip&) { return std::set<Valuation>{s}; },
            [&](const Abort&) { return std::set<Valuation>{}; },
            [&](const Assign& n) {
              Valuation next = s;
              for (std::size_t i = 0; i < n.targets.size(); ++i)
                next[n.targets[i].index] = eval_value(n.values[i], s);
              return std::set<Valuation>{next};
            },
            [&](const Seq& n) {
              std::set<Valuation> out;
              for (const auto& t : run(n.first, s)) out.merge(run(n.second, t));
              return out;
            },
            [&](const IfBool& n) { return eval_bool(n.condition, s) ? run(n.then_branch, s) : run(n.else_branch, s); },
            [&](const IfProb& n) { return both(branch_weight(n.probability, s), n.then_branch, n.else_branch); },
            [&](const ProbChoice& n) { return both(branch_weight(n.probability, s), n.left, n.right); },
            [&](const DemonChoice& n) { return both(Rational(1, 2), n.left, n.right); },
            [&](const ProbAssign& n) {
              Rational w = branch_weight(n.probability, s);
              std::set<Valuation> out;
              if (!w.is_zero()) out.insert(assign(n.target, n.left));
              if (w != Rational(1)) out.insert(assign(n.target, n.right));
              return out;
            },
            [&](const DemonAssign& n) { return std::set<Valuation>{assign(n.target, n.left), assign(n.target, n.right)}; },
            [&](const ChooseFromSet& n) {
              std::set<Valuation> out;
              for (const auto& e : n.elements) out.insert(assign(n.target, e));
              return out;
            },
            [&](const SuchThat& n) {
              std::set<Valuation> out;
              for_each_assignment(n, space_, s, [&](const Valuation& next) {
                if (eval_bool(n.predicate, next)) out.insert(next);
              });
              return out;
            },
            [&](const ChooseFromDist& n) {
              std::set<Valuation> out;
              for (const auto& e : n.entries)
                if (!branch_weight(e.probability, s).is_zero()) out.insert(assign(n.target, e.value));
              return out;
            },
            [&](const GuardedIf& n) {
              std::set<Valuation> out;
              for (const auto& b : n.branches)
                if (eval_bool(b.guard, s)) out.merge(run(b.body, s));
              return out;
            },
            [&](const Assert& n) {
              return eval_bool(n.predicate, s) ? std::set<Valuation>{s} : std::set<Valuation>{};
            },
            [&](const While& n) {
              // Exit states of the closure of guard-satisfying states.
              std::set<Valuation> seen{s}, out;
              std::deque<Valuation> work{s};
              while (!work.empty()) {
                Valuation t = std::move(work.front());
                work.pop_front();
                if (branch_weight(n.guard, t) != Rational(1)) out.insert(t);
                if (branch_weight(n.guard, t).is_zero()) continue;
                for (const auto& u : run(n.body, t))
                  if (seen.insert(u).second) work.push_back(u);
              }
              return out;
            },
        },
        p.node().v);
  }

  const StateSpace& space_;
  std::map<std::pair<const void*, Valuation>, std::set<Valuation>> memo_;
};

}  // namespace

std::vector<Resolution> enumerate_resolutions(const Program& p, const StateSpace& space, const Valuation& initial,
                                              std::size_t bound) {
  if (!is_loop_free(p)) throw Error("cannot enumerate resolutions of a program with loops");
  Enumerator e(space, bound);
  std::vector<Resolution> out = e.run(p, initial);
  for (auto& r : out) {
    if (r.strategy.empty()) r.strategy = "-";
    for (auto it = r.output.begin(); it != r.output.end();) it = it->second.is_zero() ? r.output.erase(it) : ++it;
  }
  return out;
}

std::vector<Distribution> distinct_outputs(const std::vector<Resolution>& rs) {
  std::vector<Distribution> out;
  for (const auto& r : rs)
    if (std::find(out.begin(), out.end(), r.output) == out.end()) out.push_back(r.output);
  return out;
}

Rational expected_value(const Distribution& d, const PostFn& f) {
  Rational total;
  for (const auto& [s, m] : d) total += m * f(s);
  return total;
}

Rational mass(const Distribution& d) {
  Rational total;
  for (const auto& [s, m] : d) total += m;
  return total;
}

std::set<Valuation> reachable_states(const Program& p, const StateSpace& space, const Valuation& initial) {
  Reach r(space);
  return r.run(p, initial);
}

}  // namespace pgcl
