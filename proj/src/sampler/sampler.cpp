#include "pgcl/sampler.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <future>
#include <numeric>
#include <sstream>
#include <string>

namespace pgcl::sampler {

int SeededBits::next() {
  if (left_ == 0) {
    word_ = gen_();
    left_ = 64;
  }
  int b = static_cast<int>(word_ & 1U);
  word_ >>= 1;
  --left_;
  return b;
}

ScriptedBits::ScriptedBits(std::vector<int> bits) : bits_(std::move(bits)) {
  for (int b : bits_)
    if (b != 0 && b != 1) throw Error("scripted bit " + std::to_string(b) + " is not 0 or 1");
}

int ScriptedBits::next() {
  if (pos_ == bits_.size())
    throw BitsExhausted("bit script exhausted after " + std::to_string(bits_.size()) + " bits");
  return bits_[pos_++];
}

namespace {

constexpr std::int64_t kMaxTotal = std::int64_t{1} << 61;

}  // namespace

WeightedDist::WeightedDist(std::vector<std::int64_t> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw Error("distribution needs at least one weight");
  for (auto w : weights_) {
    if (w < 1) throw Error("weight " + std::to_string(w) + " is below 1");
    if (w > kMaxTotal - total_) throw Error("total weight exceeds 2^61");
    total_ += w;
  }
}

WeightedDist WeightedDist::from_rationals(const std::vector<Rational>& probs) {
  mpz_class scale = 1;
  for (const auto& p : probs) {
    if (p.is_negative() || p.is_zero()) throw Error("weight " + p.str() + " is not positive");
    mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), p.denominator().get_mpz_t());
  }
  std::vector<mpz_class> ints;
  mpz_class g = 0;
  for (const auto& p : probs) {
    mpz_class v = p.numerator() * (scale / p.denominator());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    ints.push_back(v);
  }
  std::vector<std::int64_t> weights;
  for (auto& v : ints) {
    v /= g;
    if (!v.fits_slong_p()) throw Error("weights too large after scaling to integers");
    weights.push_back(v.get_si());
  }
  return WeightedDist(std::move(weights));
}

WeightedDist parse_weights(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<Rational> values;
  std::string word;
  while (in >> word) {
    try {
      values.push_back(Rational::parse(word));
    } catch (const std::invalid_argument&) {
      throw Error("malformed weight '" + word + "'");
    }
  }
  return WeightedDist::from_rationals(values);
}

DistFile parse_dist_file(std::string_view text) {
  auto eol = text.find('\n');
  std::string first(text.substr(0, eol));
  std::istringstream head(first);
  long long runs = 0;
  std::string extra;
  if (!(head >> runs) || (head >> extra) || runs < 1) throw Error("first line must be a positive run count");
  std::string_view rest = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
  std::istringstream in{std::string(rest)};
  std::vector<std::int64_t> weights;
  std::string word;
  while (in >> word) {
    std::size_t used = 0;
    long long w = 0;
    try {
      w = std::stoll(word, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != word.size() || used == 0) throw Error("weight '" + word + "' is not an integer");
    weights.push_back(w);
  }
  return DistFile{static_cast<std::uint64_t>(runs), WeightedDist(std::move(weights))};
}

CumulativeDist CumulativeDist::initial(const WeightedDist& d) {
  CumulativeDist c;
  c.total = d.total();
  std::int64_t sum = 0;
  for (std::size_t i = 0; i + 1 < d.size(); ++i) c.dL.push_back(sum += d.weights()[i]);
  c.low = 0;
  c.high = d.size() - 1;
  return c;
}

std::vector<std::int64_t> CumulativeDist::window() const {
  return {dL.begin() + static_cast<std::ptrdiff_t>(low), dL.begin() + static_cast<std::ptrdiff_t>(high)};
}

void CumulativeDist::check() const {
  if (low > high || high > dL.size())
    throw InvariantBreach("window [" + std::to_string(low) + ", " + std::to_string(high) + ") out of range");
  for (std::size_t i = low; i < high; ++i) {
    if (dL[i] <= 0 || dL[i] >= total)
      throw InvariantBreach("dL[" + std::to_string(i) + "] = " + std::to_string(dL[i]) + " outside (0, " +
                            std::to_string(total) + ")");
    if (i > low && dL[i - 1] >= dL[i])
      throw InvariantBreach("dL not strictly increasing at " + std::to_string(i));
  }
}

namespace {

// The two scans of the loop body, in place.
void take_left(CumulativeDist& c) {
  std::size_t n = c.low;
  while (n < c.high && 2 * c.dL[n] < c.total) {
    c.dL[n] = 2 * c.dL[n];
    ++n;
  }
  c.high = n;
}

void take_right(CumulativeDist& c) {
  std::size_t n = c.high;
  while (n > c.low && 2 * c.dL[n - 1] > c.total) {
    c.dL[n - 1] = 2 * c.dL[n - 1] - c.total;
    --n;
  }
  c.low = n;
}

}  // namespace

CumulativeDist split_left(const CumulativeDist& c) {
  if (c.terminal()) throw Error("split of a terminated configuration");
  CumulativeDist out = c;
  take_left(out);
  return out;
}

CumulativeDist split_right(const CumulativeDist& c) {
  if (c.terminal()) throw Error("split of a terminated configuration");
  CumulativeDist out = c;
  take_right(out);
  return out;
}

SampleTrace sample_binary(const Rational& p, BitSource& bits) {
  if (p.is_negative() || Rational(1) < p) throw Error("probability " + p.str() + " outside [0,1]");
  const Rational half(1, 2);
  SampleTrace t;
  Rational x = p;
  while (Rational(0) < x && x < Rational(1)) {
    Rational q, r;
    if (x <= half) {
      q = 0;
      r = x * Rational(2);
    } else {
      q = x * Rational(2) - Rational(1);
      r = 1;
    }
    int b = bits.next();
    t.bits.push_back(b);
    x = b == 0 ? q : r;
  }
  t.flips = t.bits.size();
  t.outcome = x.is_zero() ? 0 : 1;
  return t;
}

namespace {

template <bool Record>
SampleTrace run_discrete(CumulativeDist c, BitSource& bits) {
  SampleTrace t;
  c.check();
  while (c.low < c.high) {
    int b = bits.next();
    ++t.flips;
    if constexpr (Record) t.bits.push_back(b);
    if (b == 0)
      take_left(c);
    else
      take_right(c);
    c.check();
  }
  t.outcome = c.low + 1;
  return t;
}

}  // namespace

SampleTrace sample_discrete(const CumulativeDist& start, BitSource& bits) { return run_discrete<true>(start, bits); }

SampleTrace sample_discrete(const WeightedDist& d, BitSource& bits) {
  return run_discrete<true>(CumulativeDist::initial(d), bits);
}

TrialsReport run_trials(const WeightedDist& d, std::uint64_t runs, std::uint64_t seed) {
  if (runs < 1) throw Error("runs must be at least 1");
  struct Shard {
    std::vector<std::uint64_t> tallies;
    std::uint64_t flips = 0;
    std::uint64_t squares = 0;
  };
  const CumulativeDist start = CumulativeDist::initial(d);
  auto shard = [&](std::size_t k, std::uint64_t count) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(k)};
    std::uint32_t words[2];
    seq.generate(words, words + 2);
    SeededBits bits((std::uint64_t{words[0]} << 32) | words[1]);
    Shard s;
    s.tallies.assign(d.size(), 0);
    for (std::uint64_t i = 0; i < count; ++i) {
      SampleTrace t = run_discrete<false>(start, bits);
      ++s.tallies[t.outcome - 1];
      s.flips += t.flips;
      s.squares += std::uint64_t{t.flips} * t.flips;
    }
    return s;
  };

  std::vector<std::future<Shard>> pending;
  for (std::size_t k = 0; k < kTrialShards; ++k) {
    std::uint64_t count = runs / kTrialShards + (k < runs % kTrialShards ? 1 : 0);
    pending.push_back(std::async(std::launch::async, shard, k, count));
  }

  TrialsReport r;
  r.runs = runs;
  r.seed = seed;
  r.tallies.assign(d.size(), 0);
  for (auto& f : pending) {
    Shard s = f.get();
    for (std::size_t i = 0; i < d.size(); ++i) r.tallies[i] += s.tallies[i];
    r.total_flips += s.flips;
    r.flip_squares += s.squares;
  }
  const double n = static_cast<double>(runs);
  r.avg_flips = static_cast<double>(r.total_flips) / n;
  if (runs > 1)
    r.flip_variance = (static_cast<double>(r.flip_squares) - n * r.avg_flips * r.avg_flips) / (n - 1);
  for (std::size_t i = 0; i < d.size(); ++i)
    r.rel_freq.push_back(static_cast<double>(r.tallies[i]) / n * static_cast<double>(d.total()) /
                         static_cast<double>(d.weights()[i]));
  return r;
}

namespace {

double upper_tail(double statistic, std::size_t dof) {
  if (dof == 0) return 1;
  boost::math::chi_squared_distribution<double> dist(static_cast<double>(dof));
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

}  // namespace

ChiSquare chi_square(const std::vector<std::uint64_t>& observed, const WeightedDist& expected) {
  if (observed.size() != expected.size()) throw Error("tally count does not match the distribution");
  const double n = std::accumulate(observed.begin(), observed.end(), 0.0);
  ChiSquare c;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    double e = n * static_cast<double>(expected.weights()[i]) / static_cast<double>(expected.total());
    double diff = static_cast<double>(observed[i]) - e;
    c.statistic += diff * diff / e;
  }
  c.dof = observed.size() - 1;
  c.p_value = upper_tail(c.statistic, c.dof);
  return c;
}

ChiSquare chi_square_homogeneity(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  if (a.size() != b.size()) throw Error("tally vectors differ in length");
  const double na = std::accumulate(a.begin(), a.end(), 0.0);
  const double nb = std::accumulate(b.begin(), b.end(), 0.0);
  ChiSquare c;
  std::size_t used = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double col = static_cast<double>(a[i] + b[i]);
    if (col == 0) continue;
    ++used;
    double ea = col * na / (na + nb);
    double eb = col * nb / (na + nb);
    c.statistic += (a[i] - ea) * (a[i] - ea) / ea + (b[i] - eb) * (b[i] - eb) / eb;
  }
  c.dof = used > 0 ? used - 1 : 0;
  c.p_value = upper_tail(c.statistic, c.dof);
  return c;
}

}  // namespace pgcl::sampler
