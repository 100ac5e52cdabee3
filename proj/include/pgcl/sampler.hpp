#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "pgcl/errors.hpp"
#include "pgcl/rational.hpp"

namespace pgcl::sampler {

class BitsExhausted : public Error {
 public:
  using Error::Error;
};

// The cumulative window lost its shape; always an implementation bug.
class InvariantBreach : public Error {
 public:
  using Error::Error;
};

class BitSource {
 public:
  virtual ~BitSource() = default;
  virtual int next() = 0;
};

class SeededBits : public BitSource {
 public:
  explicit SeededBits(std::uint64_t seed) : seed_(seed), gen_(seed) {}
  int next() override;
  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
  std::uint64_t word_ = 0;
  int left_ = 0;
};

// Replays a fixed bit list; throws BitsExhausted past its end.
class ScriptedBits : public BitSource {
 public:
  explicit ScriptedBits(std::vector<int> bits);
  int next() override;
  std::size_t consumed() const { return pos_; }

 private:
  std::vector<int> bits_;
  std::size_t pos_ = 0;
};

// Unnormalized integer weights, each >= 1.
class WeightedDist {
 public:
  // Throws Error on an empty list, a weight below 1, or a total above 2^61.
  explicit WeightedDist(std::vector<std::int64_t> weights);

  // Exact integer weights proportional to the given non-negative rationals
  // (e.g. 0.2 0.1 0.3 0.4 -> 2 1 3 4).
  static WeightedDist from_rationals(const std::vector<Rational>& probs);

  const std::vector<std::int64_t>& weights() const { return weights_; }
  std::int64_t total() const { return total_; }
  std::size_t size() const { return weights_.size(); }

 private:
  std::vector<std::int64_t> weights_;
  std::int64_t total_ = 0;
};

struct DistFile {
  std::uint64_t runs = 0;
  WeightedDist dist;
};

// Run count on the first line, then whitespace-separated weights to EOF.
DistFile parse_dist_file(std::string_view text);
// Whitespace-separated weights; decimals and fractions are scaled to integers.
WeightedDist parse_weights(std::string_view text);

// Accumulated weights dL[0..N-2] with the active window dL[low:high]; the
// support is outcomes low..high (0-based).
struct CumulativeDist {
  std::vector<std::int64_t> dL;
  std::int64_t total = 0;
  std::size_t low = 0;
  std::size_t high = 0;

  static CumulativeDist initial(const WeightedDist& d);

  bool terminal() const { return low == high; }
  std::size_t support() const { return high - low + 1; }
  std::vector<std::int64_t> window() const;
  // Throws InvariantBreach unless 0 < dL < total and strictly increasing on
  // the window, with low <= high < N.
  void check() const;
};

// Successor after a heads (0) or tails (1) coin. Throws Error when terminal.
CumulativeDist split_left(const CumulativeDist& c);
CumulativeDist split_right(const CumulativeDist& c);

struct SampleTrace {
  std::size_t outcome = 0;  // 1..N for sample_discrete, 0/1 for sample_binary
  std::size_t flips = 0;
  std::vector<int> bits;
};

// x := p; WHILE 0 < x < 1 DO split into q,r; x := q or r on one bit OD.
// At x = 1/2 the q,r = 0,1 branch is taken.
SampleTrace sample_binary(const Rational& p, BitSource& bits);

SampleTrace sample_discrete(const WeightedDist& d, BitSource& bits);
SampleTrace sample_discrete(const CumulativeDist& start, BitSource& bits);

struct TrialsReport {
  std::uint64_t runs = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> tallies;
  std::uint64_t total_flips = 0;
  std::uint64_t flip_squares = 0;
  double avg_flips = 0;
  // Sample variance of the per-run flip count.
  double flip_variance = 0;
  // tally_i / runs * total / w_i; near 1 for a faithful sampler.
  std::vector<double> rel_freq;
};

inline constexpr std::size_t kTrialShards = 8;

// Shard k draws from SeededBits seeded by (seed, k); the result does not
// depend on scheduling.
TrialsReport run_trials(const WeightedDist& d, std::uint64_t runs, std::uint64_t seed);

struct ChiSquare {
  double statistic = 0;
  std::size_t dof = 0;
  double p_value = 1;
};

// Goodness of fit of observed counts to the weights.
ChiSquare chi_square(const std::vector<std::uint64_t>& observed, const WeightedDist& expected);
// Two-sample homogeneity test for two tally vectors of equal length.
ChiSquare chi_square_homogeneity(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b);

}  // namespace pgcl::sampler
