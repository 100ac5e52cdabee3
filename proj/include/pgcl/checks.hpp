#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pgcl/expr.hpp"
#include "pgcl/program.hpp"
#include "pgcl/rational.hpp"
#include "pgcl/state_space.hpp"
#include "pgcl/wp.hpp"

namespace pgcl {

struct Probe {
  std::string name;  // "[x=1]", "[c1 = c2]", "random#3"
  Expectation values;
};

struct ProbeOptions {
  // Variables the probes may depend on; empty means all. Programs that use
  // other variables as scratch (p, q, r in the coin loop) are compared on
  // what they are meant to establish.
  std::vector<std::string> observed;
  std::size_t random_count = 16;
  std::uint64_t seed = 0;
  std::vector<Expr> extra_predicates;
};

// Indicators of every observed-variable valuation, brackets of the programs'
// guards and assertions (those over observed variables only), and seeded
// random expectations with values in {0, 1/8, ..., 4}.
class ProbeFamily {
 public:
  static ProbeFamily build(const StateSpace& space, const std::vector<Program>& programs,
                           const ProbeOptions& options = {});

  const std::vector<Probe>& probes() const { return probes_; }
  std::uint64_t seed() const { return seed_; }

 private:
  std::vector<Probe> probes_;
  std::uint64_t seed_ = 0;
};

enum class Status { Holds, Fails, Inconclusive };
std::string to_string(Status s);

struct Counterexample {
  std::string probe;
  Valuation state;
  Rational lhs;
  Rational rhs;
};

struct Verdict {
  Status status = Status::Holds;
  std::optional<Counterexample> counterexample;
  // Largest loop residual met while deciding.
  Rational residual;
  std::string note;

  bool holds() const { return status == Status::Holds; }
  // Holds with every fixpoint reached exactly.
  bool exact() const { return holds() && residual.is_zero(); }
};

struct CheckOptions {
  LoopConfig loop;
  // Compare only from initial states satisfying this predicate.
  std::optional<Expr> initial;
};

// Equal pre-expectations on every probe. Fails when some probe and state
// separate the two beyond the loop residuals; Inconclusive when a loop ran
// out of iterations; Holds otherwise (see Verdict::exact).
Verdict check_equal(const Program& p, const Program& q, const ProbeFamily& probes, const StateSpace& space,
                    const CheckOptions& options = {});

// spec ⊑ impl: wp(spec)(f) <= wp(impl)(f) on every probe.
Verdict check_refines(const Program& spec, const Program& impl, const ProbeFamily& probes, const StateSpace& space,
                      const CheckOptions& options = {});

struct VariantSpec {
  Expr variant;
  long upper_bound = 0;
  Rational epsilon = Rational(1, 2);
};

// Bounded-variant termination rule for the first loop of `program`. States
// are those reachable at the loop head from the initial states (filtered by
// options.initial); holds when at each guard-satisfying one the variant is at
// most the bound and every resolution of one iteration decreases it with
// probability >= epsilon. Throws VariantError on a negative or non-integer
// variant.
Verdict check_variant(const Program& program, const VariantSpec& spec, const StateSpace& space,
                      const CheckOptions& options = {});

struct GridPoint {
  Rational value;
  Verdict verdict;
};

// Runs `check` at every grid value. Points are independent.
std::vector<GridPoint> over_grid(const std::vector<Rational>& grid, const std::function<Verdict(const Rational&)>& check);

// {0, 1/n, ..., 1}
std::vector<Rational> uniform_grid(long n);

}  // namespace pgcl
