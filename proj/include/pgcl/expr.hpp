#pragma once

#include <cstddef>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "pgcl/rational.hpp"
#include "pgcl/state_space.hpp"

namespace pgcl {

enum class Op {
  Number,
  Token,
  Var,
  Bool,
  Neg,
  Add,
  Sub,
  Mul,
  Div,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  And,
  Or,
  Not,
  Iverson,  // [b], 1 if b holds else 0
  Min,
  Max,
  InSet,  // args[0] in {args[1], ...}
};

// Immutable expression tree over program variables. Copies share structure.
class Expr {
 public:
  Expr();  // the literal 0

  static Expr number(Rational value);
  static Expr token(std::string name);
  static Expr var(std::string name, std::size_t index);
  static Expr boolean(bool value);
  static Expr unary(Op op, Expr arg);
  static Expr binary(Op op, Expr lhs, Expr rhs);
  static Expr nary(Op op, std::vector<Expr> args);

  Op op() const;
  const Rational& number() const;
  // Token or variable name.
  const std::string& name() const;
  std::size_t var_index() const;
  bool bool_value() const;
  const std::vector<Expr>& args() const;
  const Expr& arg(std::size_t i) const { return args().at(i); }

  // Syntactic classification: comparisons, connectives and boolean literals.
  bool is_boolean() const;
  bool is_constant() const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Result of evaluating an expression: a number, a token, or a truth value.
using Scalar = std::variant<Rational, Token, bool>;

// Throws EvalError on division by zero or a type mismatch.
Scalar eval(const Expr& e, const Valuation& s);
Rational eval_number(const Expr& e, const Valuation& s);
bool eval_bool(const Expr& e, const Valuation& s);
// A program value (number or token); truth values are rejected.
Value eval_value(const Expr& e, const Valuation& s);
// Expectation reading: numbers must be non-negative, truth values map to 0/1.
Rational eval_expectation(const Expr& e, const Valuation& s);

// e[x\replacement], replacing every occurrence of variable `var`.
Expr substitute(const Expr& e, const std::string& var, const Expr& replacement);

void collect_variables(const Expr& e, std::set<std::size_t>& out);

std::string to_text(const Expr& e);

}  // namespace pgcl
