#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "pgcl/program.hpp"
#include "pgcl/rational.hpp"
#include "pgcl/state_space.hpp"
#include "pgcl/wp.hpp"

namespace pgcl {

// Final-state sub-distribution; missing mass is the probability of aborting.
using Distribution = std::map<Valuation, Rational>;

struct Resolution {
  // Which branch each demonic point took, e.g. "L", "#1", "[] 2", composed
  // through sequencing as "first ; {state->choice, ...}".
  std::string strategy;
  Distribution output;
};

inline constexpr std::size_t kDefaultResolutionBound = 1000000;

// Every output distribution of a loop-free program from one initial state,
// one per resolution of its demonic choices (choices may depend on the state
// reached so far). Not deduplicated: distinct strategies with the same
// effect are all listed; see distinct_outputs.
//
// Throws Error for programs with loops and ResolutionBoundError when the
// count would exceed `bound`.
std::vector<Resolution> enumerate_resolutions(const Program& p, const StateSpace& space, const Valuation& initial,
                                              std::size_t bound = kDefaultResolutionBound);

std::vector<Distribution> distinct_outputs(const std::vector<Resolution>& rs);

Rational expected_value(const Distribution& d, const PostFn& f);
Rational mass(const Distribution& d);

// States reachable with non-zero probability under some resolution.
std::set<Valuation> reachable_states(const Program& p, const StateSpace& space, const Valuation& initial);

}  // namespace pgcl
