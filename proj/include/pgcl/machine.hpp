#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pgcl/rational.hpp"
#include "pgcl/sampler.hpp"

namespace pgcl::ddg {

struct MachineNode {
  enum class Kind { Interior, Leaf };

  std::string id;
  Kind kind = Kind::Leaf;
  // Indices into Machine::nodes; heads is the 0 bit.
  std::size_t heads = 0;
  std::size_t tails = 0;
  std::size_t outcome = 0;  // 1..N for leaves
  std::string label;

  bool leaf() const { return kind == Kind::Leaf; }
};

struct Machine {
  std::vector<MachineNode> nodes;
  std::size_t root = 0;
  std::size_t outcomes = 0;

  std::size_t interior_count() const;
};

// Breadth-first closure of the sampler's configurations from the initial
// one, keyed by (low, window, high). One leaf per outcome. Throws Error past
// max_nodes.
Machine build_machine(const sampler::WeightedDist& d, std::size_t max_nodes = 100000);

struct MachineAnalysis {
  std::vector<Rational> outcome_prob;  // entry i is outcome i+1
  Rational expected_flips;
  std::size_t node_count = 0;
};

// Exact absorption probabilities and expected flips from the root, by
// rational Gaussian elimination. Throws Error when the system is singular
// (some node never reaches a leaf) or the probabilities do not sum to 1.
MachineAnalysis analyze(const Machine& m);

struct LoadedMachine {
  Machine machine;
  std::vector<std::string> warnings;
};

// Line format:
//   node <id> interior <heads-id> <tails-id> [label]
//   node <id> leaf <outcome>
//   root <id>
//   outcomes <N>
// with '#' comments. Unreachable nodes are dropped with a warning.
LoadedMachine load_machine(std::string_view text);

// The same format; load_machine(save_machine(m)) reproduces m.
std::string save_machine(const Machine& m);

std::string to_dot(const Machine& m);

struct CrosscheckReport {
  MachineAnalysis exact;
  sampler::TrialsReport trials;
  std::vector<double> freq_z;
  double flips_z = 0;
};

CrosscheckReport crosscheck(const sampler::WeightedDist& d, std::uint64_t runs, std::uint64_t seed);

}  // namespace pgcl::ddg
