#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pgcl/rational.hpp"

namespace pgcl {

// A symbolic scalar such as H or T.
struct Token {
  std::string name;
  friend bool operator==(const Token&, const Token&) = default;
  friend auto operator<=>(const Token&, const Token&) = default;
};

// Program variables hold numbers or tokens.
using Value = std::variant<Rational, Token>;

std::string to_string(const Value& v);

// One value per declared variable, in declaration order. Intermediate
// valuations (inside a loop-free fragment) may leave the declared domains.
using Valuation = std::vector<Value>;

struct VarDomain {
  std::string name;
  std::vector<Value> values;
};

class StateSpace {
 public:
  StateSpace() = default;
  // Throws pgcl::Error on duplicate names, empty or repeating domains.
  explicit StateSpace(std::vector<VarDomain> domains);

  const std::vector<VarDomain>& domains() const { return domains_; }
  std::size_t variable_count() const { return domains_.size(); }
  std::optional<std::size_t> index_of(const std::string& name) const;
  const VarDomain& domain(std::size_t var) const { return domains_.at(var); }

  // Product of domain sizes.
  std::size_t state_count() const { return state_count_; }

  // Mixed-radix enumeration; the last declared variable varies fastest.
  Valuation state(std::size_t index) const;
  std::optional<std::size_t> index(const Valuation& v) const;
  bool contains(const Valuation& v) const { return index(v).has_value(); }

  // "c1=H,c2=T"
  std::string describe(const Valuation& v) const;

  friend bool operator==(const StateSpace& a, const StateSpace& b);

 private:
  std::vector<VarDomain> domains_;
  std::vector<std::map<Value, std::size_t>> positions_;
  std::vector<std::size_t> strides_;
  std::size_t state_count_ = 1;
};

}  // namespace pgcl
