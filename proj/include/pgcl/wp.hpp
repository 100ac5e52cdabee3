#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "pgcl/expr.hpp"
#include "pgcl/program.hpp"
#include "pgcl/rational.hpp"
#include "pgcl/state_space.hpp"

namespace pgcl {

// Total map from the states of a StateSpace (by index) to non-negative rationals.
class Expectation {
 public:
  Expectation() = default;
  // Throws pgcl::Error if any value is negative.
  explicit Expectation(std::vector<Rational> values);

  static Expectation constant(const StateSpace& space, const Rational& c);
  static Expectation from_expr(const StateSpace& space, const Expr& e);
  static Expectation indicator(const StateSpace& space, std::size_t state);

  std::size_t size() const { return values_.size(); }
  const Rational& operator[](std::size_t i) const { return values_[i]; }
  const std::vector<Rational>& values() const { return values_; }
  Rational max() const;
  Expectation scaled(const Rational& c) const;
  // Pointwise <=.
  bool leq(const Expectation& other) const;

  friend bool operator==(const Expectation&, const Expectation&) = default;

 private:
  std::vector<Rational> values_;
};

// A post-expectation readable at any valuation, including ones that leave
// the declared domains (e.g. the x+3 after x := 3*x).
using PostFn = std::function<Rational(const Valuation&)>;

PostFn post_of(const Expr& e);
// Valuations outside the space are an EvalError.
PostFn post_of(const Expectation& e, const StateSpace& space);

struct LoopConfig {
  std::size_t max_iterations = 100000;
  // Stop once the largest pointwise change between iterates drops below this.
  Rational tolerance = Rational::power_of_two(-40);
};

struct WpResult {
  Expectation pre;
  // Sum over loops of the largest pointwise change at their last iterate; 0
  // when every loop reached its fixpoint exactly (and always for loop-free code).
  Rational loop_residual;
  // False when some loop used up max_iterations with its change still above
  // the tolerance.
  bool converged = true;
  std::size_t loop_iterations = 0;
};

// Weakest pre-expectation over all states of `space`.
//
// Loops are evaluated as the ascending chain from the zero expectation; a
// decrease between iterates throws ChainError. With an Expectation post the
// result is also checked against max(post) (ChainError on violation).
// Probabilities outside [0,1] throw ProbabilityError.
WpResult wp(const Program& p, const Expectation& post, const StateSpace& space, const LoopConfig& cfg = {});
WpResult wp(const Program& p, const Expr& post, const StateSpace& space, const LoopConfig& cfg = {});
WpResult wp(const Program& p, const PostFn& post, const StateSpace& space, const LoopConfig& cfg = {});

// Pre-expectation at selected initial states only; entries of `pre` follow
// `states`. Loops are solved only on the states reachable from where they are entered.
WpResult wp_at(const Program& p, const PostFn& post, const StateSpace& space, const std::vector<std::size_t>& states,
               const LoopConfig& cfg = {});

// Weight of a guard at a state: truth values give 0/1, numbers must be
// probabilities.
Rational branch_weight(const Expr& guard, const Valuation& s);

}  // namespace pgcl
