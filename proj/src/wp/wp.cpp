#include "pgcl/wp.hpp"

#include <map>
#include <memory>
#include <numeric>

#include "pgcl/errors.hpp"
#include "pgcl/resolutions.hpp"

namespace pgcl {

Expectation::Expectation(std::vector<Rational> values) : values_(std::move(values)) {
  for (const auto& v : values_)
    if (v.is_negative()) throw Error("expectation value " + v.str() + " is negative");
}

Expectation Expectation::constant(const StateSpace& space, const Rational& c) {
  return Expectation(std::vector<Rational>(space.state_count(), c));
}

Expectation Expectation::from_expr(const StateSpace& space, const Expr& e) {
  std::vector<Rational> values;
  values.reserve(space.state_count());
  for (std::size_t i = 0; i < space.state_count(); ++i) values.push_back(eval_expectation(e, space.state(i)));
  return Expectation(std::move(values));
}

Expectation Expectation::indicator(const StateSpace& space, std::size_t state) {
  std::vector<Rational> values(space.state_count(), Rational(0));
  values.at(state) = 1;
  return Expectation(std::move(values));
}

Rational Expectation::max() const {
  Rational m;
  for (const auto& v : values_) m = pgcl::max(m, v);
  return m;
}

Expectation Expectation::scaled(const Rational& c) const {
  std::vector<Rational> out;
  out.reserve(values_.size());
  for (const auto& v : values_) out.push_back(v * c);
  return Expectation(std::move(out));
}

bool Expectation::leq(const Expectation& other) const {
  if (size() != other.size()) return false;
  for (std::size_t i = 0; i < size(); ++i)
    if (other[i] < values_[i]) return false;
  return true;
}

PostFn post_of(const Expr& e) {
  return [e](const Valuation& s) { return eval_expectation(e, s); };
}

PostFn post_of(const Expectation& e, const StateSpace& space) {
  return [&e, &space](const Valuation& s) -> Rational {
    auto idx = space.index(s);
    if (!idx) throw EvalError("post-expectation read outside the declared domains at " + space.describe(s));
    return e[*idx];
  };
}

Rational branch_weight(const Expr& guard, const Valuation& s) {
  Scalar v = eval(guard, s);
  if (const auto* b = std::get_if<bool>(&v)) return Rational(*b ? 1 : 0);
  if (const auto* r = std::get_if<Rational>(&v)) {
    if (r->is_negative() || Rational(1) < *r)
      throw ProbabilityError("probability '" + to_text(guard) + "' evaluates to " + r->str() + ", outside [0,1]");
    return *r;
  }
  throw EvalError("type mismatch: '" + to_text(guard) + "' is a token, expected a condition or probability");
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// A memoized function of the valuation: wp(rest-of-program)(post).
class Cont {
 public:
  explicit Cont(std::function<Rational(const Valuation&)> fn) : impl_(std::make_shared<Impl>(std::move(fn))) {}

  const Rational& operator()(const Valuation& s) const {
    auto it = impl_->cache.find(s);
    if (it != impl_->cache.end()) return it->second;
    Rational v = impl_->fn(s);
    return impl_->cache.emplace(s, std::move(v)).first->second;
  }

 private:
  struct Impl {
    explicit Impl(std::function<Rational(const Valuation&)> f) : fn(std::move(f)) {}
    std::function<Rational(const Valuation&)> fn;
    std::map<Valuation, Rational> cache;
  };
  std::shared_ptr<Impl> impl_;
};

class Engine {
 public:
  Engine(const StateSpace& space, const LoopConfig& cfg) : space_(space), cfg_(cfg) {}

  Cont transform(const Program& p, const Cont& k) {
    return std::visit(
        overloaded{
            [&](const Skip&) { return k; },
            [&](const Abort&) { return Cont([](const Valuation&) { return Rational(0); }); },
            [&](const Assign& n) {
              return Cont([n, k](const Valuation& s) {
                Valuation next = s;
                for (std::size_t i = 0; i < n.targets.size(); ++i)
                  next[n.targets[i].index] = eval_value(n.values[i], s);
                return k(next);
              });
            },
            [&](const Seq& n) { return transform(n.first, transform(n.second, k)); },
            [&](const IfBool& n) { return weighted(n.condition, n.then_branch, n.else_branch, k); },
            [&](const IfProb& n) { return weighted(n.probability, n.then_branch, n.else_branch, k); },
            [&](const ProbChoice& n) { return weighted(n.probability, n.left, n.right, k); },
            [&](const DemonChoice& n) {
              Cont l = transform(n.left, k);
              Cont r = transform(n.right, k);
              return Cont([l, r](const Valuation& s) { return min(l(s), r(s)); });
            },
            [&](const ProbAssign& n) {
              return Cont([n, k](const Valuation& s) {
                Rational w = branch_weight(n.probability, s);
                Rational out;
                Valuation next = s;
                if (!w.is_zero()) {
                  next[n.target.index] = eval_value(n.left, s);
                  out += w * k(next);
                }
                if (w != Rational(1)) {
                  next[n.target.index] = eval_value(n.right, s);
                  out += (Rational(1) - w) * k(next);
                }
                return out;
              });
            },
            [&](const DemonAssign& n) {
              return Cont([n, k](const Valuation& s) {
                Valuation a = s, b = s;
                a[n.target.index] = eval_value(n.left, s);
                b[n.target.index] = eval_value(n.right, s);
                return min(k(a), k(b));
              });
            },
            [&](const ChooseFromSet& n) {
              return Cont([n, k](const Valuation& s) {
                std::optional<Rational> best;
                Valuation next = s;
                for (const auto& e : n.elements) {
                  next[n.target.index] = eval_value(e, s);
                  const Rational& v = k(next);
                  if (!best || v < *best) best = v;
                }
                return *best;
              });
            },
            [&](const SuchThat& n) { return such_that(n, k); },
            [&](const ChooseFromDist& n) {
              return Cont([n, k](const Valuation& s) {
                Rational total, out;
                Valuation next = s;
                for (const auto& entry : n.entries) {
                  Rational w = branch_weight(entry.probability, s);
                  total += w;
                  if (w.is_zero()) continue;
                  next[n.target.index] = eval_value(entry.value, s);
                  out += w * k(next);
                }
                if (total != Rational(1))
                  throw ProbabilityError("distribution for '" + n.target.name + "' sums to " + total.str() +
                                         ", not 1");
                return out;
              });
            },
            [&](const GuardedIf& n) {
              std::vector<std::pair<Expr, Cont>> arms;
              for (const auto& b : n.branches) arms.emplace_back(b.guard, transform(b.body, k));
              return Cont([arms](const Valuation& s) {
                std::optional<Rational> best;
                for (const auto& [guard, body] : arms) {
                  if (!eval_bool(guard, s)) continue;
                  const Rational& v = body(s);
                  if (!best || v < *best) best = v;
                }
                return best.value_or(Rational(0));  // no enabled guard: ABORT
              });
            },
            [&](const Assert& n) {
              return Cont([n, k](const Valuation& s) { return eval_bool(n.predicate, s) ? k(s) : Rational(0); });
            },
            [&](const While& n) { return loop(p, n, k); },
        },
        p.node().v);
  }

  Rational residual() const {
    Rational total;
    for (const auto& [id, r] : residuals_) total += r;
    return total;
  }
  bool converged() const { return converged_; }
  std::size_t iterations() const { return iterations_; }

 private:
  Cont weighted(const Expr& weight, const Program& a, const Program& b, const Cont& k) {
    Cont ta = transform(a, k);
    Cont tb = transform(b, k);
    return Cont([weight, ta, tb](const Valuation& s) {
      Rational w = branch_weight(weight, s);
      Rational out;
      if (!w.is_zero()) out += w * ta(s);
      if (w != Rational(1)) out += (Rational(1) - w) * tb(s);
      return out;
    });
  }

  // The targets are overwritten, so the value depends only on the other
  // variables; cache on that projection.
  Cont such_that(const SuchThat& n, const Cont& k) {
    auto cache = std::make_shared<std::map<Valuation, Rational>>();
    const StateSpace& space = space_;
    return Cont([n, k, cache, &space](const Valuation& s) {
      Valuation key = s;
      for (const auto& t : n.targets) key[t.index] = Token{};
      if (auto it = cache->find(key); it != cache->end()) return it->second;

      std::vector<std::size_t> digit(n.targets.size(), 0);
      std::optional<Rational> best;
      Valuation next = s;
      while (true) {
        for (std::size_t i = 0; i < n.targets.size(); ++i)
          next[n.targets[i].index] = space.domain(n.targets[i].index).values[digit[i]];
        if (eval_bool(n.predicate, next)) {
          const Rational& v = k(next);
          if (!best || v < *best) best = v;
        }
        std::size_t i = 0;
        for (; i < digit.size(); ++i) {
          if (++digit[i] < space.domain(n.targets[i].index).values.size()) break;
          digit[i] = 0;
        }
        if (i == digit.size()) break;
      }
      Rational out = best.value_or(Rational(0));  // unsatisfiable: ABORT
      cache->emplace(std::move(key), out);
      return out;
    });
  }

  // Solved lazily: a query at an unsolved state iterates the loop over the
  // forward closure of that state only.
  Cont loop(const Program& self, const While& n, const Cont& exit) {
    auto solved = std::make_shared<std::map<Valuation, Rational>>();
    const void* id = self.id();
    return Cont([this, n, exit, solved, id](const Valuation& s) {
      if (auto it = solved->find(s); it != solved->end()) return it->second;
      solve_component(id, n, exit, s, *solved);
      return solved->at(s);
    });
  }

  void solve_component(const void* id, const While& n, const Cont& exit, const Valuation& start,
                       std::map<Valuation, Rational>& solved) {
    std::map<Valuation, std::size_t> local;
    std::vector<Valuation> states;
    std::vector<Rational> weight;
    auto visit = [&](const Valuation& t) {
      if (solved.count(t) || local.count(t)) return;
      if (!space_.contains(t)) throw EvalError("loop reaches a state outside the declared domains: " + space_.describe(t));
      local.emplace(t, states.size());
      states.push_back(t);
    };
    visit(start);
    for (std::size_t i = 0; i < states.size(); ++i) {
      weight.push_back(branch_weight(n.guard, states[i]));
      if (weight.back().is_zero()) continue;
      const Valuation here = states[i];
      for (const auto& t : reachable_states(n.body, space_, here)) visit(t);
    }

    const std::size_t count = states.size();
    auto current = std::make_shared<std::vector<Rational>>(count, Rational(0));
    Rational change;
    bool exact = false;
    std::size_t iter = 0;
    while (iter < cfg_.max_iterations) {
      ++iter;
      Cont lookup([&local, &solved, current, this](const Valuation& t) {
        if (auto it = local.find(t); it != local.end()) return (*current)[it->second];
        if (auto it = solved.find(t); it != solved.end()) return it->second;
        throw EvalError("loop body reached an unexplored state " + space_.describe(t));
      });
      Cont body = transform(n.body, lookup);
      auto next = std::make_shared<std::vector<Rational>>(count);
      change = 0;
      for (std::size_t i = 0; i < count; ++i) {
        const Rational& w = weight[i];
        Rational v;
        if (!w.is_zero()) v += w * body(states[i]);
        if (w != Rational(1)) v += (Rational(1) - w) * exit(states[i]);
        Rational delta = v - (*current)[i];
        if (delta.is_negative())
          throw ChainError("loop iterates decreased at " + space_.describe(states[i]) + " (iteration " +
                           std::to_string(iter) + ")");
        change = max(change, delta);
        (*next)[i] = std::move(v);
      }
      *current = std::move(*next);
      if (change.is_zero()) {
        exact = true;
        break;
      }
      if (change < cfg_.tolerance) break;
    }
    iterations_ += iter;
    if (!exact) {
      Rational& slot = residuals_[id];
      slot = max(slot, change);
      if (!(change < cfg_.tolerance)) converged_ = false;
    }
    for (std::size_t i = 0; i < count; ++i) solved.emplace(states[i], (*current)[i]);
  }

  const StateSpace& space_;
  LoopConfig cfg_;
  std::map<const void*, Rational> residuals_;
  bool converged_ = true;
  std::size_t iterations_ = 0;
};

WpResult run(const Program& p, const PostFn& post, const StateSpace& space, const std::vector<std::size_t>& states,
             const LoopConfig& cfg) {
  Engine engine(space, cfg);
  Cont top = engine.transform(p, Cont(post));
  std::vector<Rational> values;
  values.reserve(states.size());
  for (std::size_t i : states) values.push_back(top(space.state(i)));
  WpResult r;
  r.pre = Expectation(std::move(values));
  r.loop_residual = engine.residual();
  r.converged = engine.converged();
  r.loop_iterations = engine.iterations();
  return r;
}

std::vector<std::size_t> all_states(const StateSpace& space) {
  std::vector<std::size_t> v(space.state_count());
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

}  // namespace

WpResult wp(const Program& p, const Expectation& post, const StateSpace& space, const LoopConfig& cfg) {
  if (post.size() != space.state_count()) throw Error("post-expectation does not match the state space");
  WpResult r = run(p, post_of(post, space), space, all_states(space), cfg);
  const Rational bound = post.max();
  for (std::size_t i = 0; i < r.pre.size(); ++i)
    if (bound < r.pre[i])
      throw ChainError("pre-expectation " + r.pre[i].str() + " exceeds max(post) = " + bound.str() + " at " +
                       space.describe(space.state(i)));
  return r;
}

WpResult wp(const Program& p, const Expr& post, const StateSpace& space, const LoopConfig& cfg) {
  return run(p, post_of(post), space, all_states(space), cfg);
}

WpResult wp(const Program& p, const PostFn& post, const StateSpace& space, const LoopConfig& cfg) {
  return run(p, post, space, all_states(space), cfg);
}

WpResult wp_at(const Program& p, const PostFn& post, const StateSpace& space, const std::vector<std::size_t>& states,
               const LoopConfig& cfg) {
  return run(p, post, space, states, cfg);
}

}  // namespace pgcl
