#include "pgcl/expr.hpp"

#include <stdexcept>

#include "pgcl/errors.hpp"

namespace pgcl {

struct Expr::Node {
  Op op = Op::Number;
  Rational number;
  std::string name;
  std::size_t index = 0;
  bool flag = false;
  std::vector<Expr> args;
};

Expr::Expr() : Expr(number(Rational(0))) {}

Expr Expr::number(Rational value) {
  auto n = std::make_shared<Node>();
  n->op = Op::Number;
  n->number = std::move(value);
  return Expr(std::move(n));
}

Expr Expr::token(std::string name) {
  auto n = std::make_shared<Node>();
  n->op = Op::Token;
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::var(std::string name, std::size_t index) {
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  n->name = std::move(name);
  n->index = index;
  return Expr(std::move(n));
}

Expr Expr::boolean(bool value) {
  auto n = std::make_shared<Node>();
  n->op = Op::Bool;
  n->flag = value;
  return Expr(std::move(n));
}

Expr Expr::unary(Op op, Expr arg) { return nary(op, {std::move(arg)}); }

Expr Expr::binary(Op op, Expr lhs, Expr rhs) { return nary(op, {std::move(lhs), std::move(rhs)}); }

Expr Expr::nary(Op op, std::vector<Expr> args) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->args = std::move(args);
  return Expr(std::move(n));
}

Op Expr::op() const { return node_->op; }
const Rational& Expr::number() const { return node_->number; }
const std::string& Expr::name() const { return node_->name; }
std::size_t Expr::var_index() const { return node_->index; }
bool Expr::bool_value() const { return node_->flag; }
const std::vector<Expr>& Expr::args() const { return node_->args; }

bool Expr::is_boolean() const {
  switch (op()) {
    case Op::Bool:
    case Op::Eq:
    case Op::Ne:
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge:
    case Op::And:
    case Op::Or:
    case Op::Not:
    case Op::InSet:
      return true;
    default:
      return false;
  }
}

bool Expr::is_constant() const {
  if (op() == Op::Var) return false;
  for (const auto& a : args())
    if (!a.is_constant()) return false;
  return true;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.op() != b.op()) return false;
  switch (a.op()) {
    case Op::Number:
      return a.number() == b.number();
    case Op::Token:
      return a.name() == b.name();
    case Op::Var:
      return a.name() == b.name() && a.var_index() == b.var_index();
    case Op::Bool:
      return a.bool_value() == b.bool_value();
    default:
      return a.args() == b.args();
  }
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

const char* type_name(const Scalar& s) {
  if (std::holds_alternative<Rational>(s)) return "number";
  if (std::holds_alternative<Token>(s)) return "token";
  return "truth value";
}

const Rational& as_number(const Scalar& s, const char* context) {
  if (const auto* r = std::get_if<Rational>(&s)) return *r;
  throw EvalError(std::string("type mismatch: ") + context + " expects a number, got a " + type_name(s));
}

bool as_bool(const Scalar& s, const char* context) {
  if (const auto* b = std::get_if<bool>(&s)) return *b;
  throw EvalError(std::string("type mismatch: ") + context + " expects a truth value, got a " + type_name(s));
}

bool scalar_equal(const Scalar& a, const Scalar& b) {
  if (a.index() != b.index())
    throw EvalError(std::string("type mismatch: cannot compare a ") + type_name(a) + " with a " + type_name(b));
  return a == b;
}

Scalar from_value(const Value& v) {
  if (const auto* r = std::get_if<Rational>(&v)) return *r;
  return std::get<Token>(v);
}

}  // namespace

Scalar eval(const Expr& e, const Valuation& s) {
  switch (e.op()) {
    case Op::Number:
      return e.number();
    case Op::Token:
      return Token{e.name()};
    case Op::Var:
      if (e.var_index() >= s.size()) throw EvalError("variable '" + e.name() + "' not in state");
      return from_value(s[e.var_index()]);
    case Op::Bool:
      return e.bool_value();
    case Op::Neg:
      return -as_number(eval(e.arg(0), s), "unary minus");
    case Op::Add:
      return as_number(eval(e.arg(0), s), "+") + as_number(eval(e.arg(1), s), "+");
    case Op::Sub:
      return as_number(eval(e.arg(0), s), "-") - as_number(eval(e.arg(1), s), "-");
    case Op::Mul:
      return as_number(eval(e.arg(0), s), "*") * as_number(eval(e.arg(1), s), "*");
    case Op::Div: {
      Rational num = as_number(eval(e.arg(0), s), "/");
      Rational den = as_number(eval(e.arg(1), s), "/");
      if (den.is_zero()) throw EvalError("division by zero in " + to_text(e));
      return num / den;
    }
    case Op::Eq:
      return scalar_equal(eval(e.arg(0), s), eval(e.arg(1), s));
    case Op::Ne:
      return !scalar_equal(eval(e.arg(0), s), eval(e.arg(1), s));
    case Op::Lt:
      return as_number(eval(e.arg(0), s), "<") < as_number(eval(e.arg(1), s), "<");
    case Op::Le:
      return as_number(eval(e.arg(0), s), "<=") <= as_number(eval(e.arg(1), s), "<=");
    case Op::Gt:
      return as_number(eval(e.arg(0), s), ">") > as_number(eval(e.arg(1), s), ">");
    case Op::Ge:
      return as_number(eval(e.arg(0), s), ">=") >= as_number(eval(e.arg(1), s), ">=");
    case Op::And:
      return as_bool(eval(e.arg(0), s), "&") && as_bool(eval(e.arg(1), s), "&");
    case Op::Or:
      return as_bool(eval(e.arg(0), s), "|") || as_bool(eval(e.arg(1), s), "|");
    case Op::Not:
      return !as_bool(eval(e.arg(0), s), "!");
    case Op::Iverson:
      return Rational(as_bool(eval(e.arg(0), s), "[...]") ? 1 : 0);
    case Op::Min:
    case Op::Max: {
      Rational best = as_number(eval(e.arg(0), s), "min/max");
      for (std::size_t i = 1; i < e.args().size(); ++i) {
        Rational v = as_number(eval(e.arg(i), s), "min/max");
        best = e.op() == Op::Min ? min(best, v) : max(best, v);
      }
      return best;
    }
    case Op::InSet: {
      Scalar x = eval(e.arg(0), s);
      for (std::size_t i = 1; i < e.args().size(); ++i)
        if (scalar_equal(x, eval(e.arg(i), s))) return true;
      return false;
    }
  }
  throw std::logic_error("unhandled expression kind");
}

Rational eval_number(const Expr& e, const Valuation& s) { return as_number(eval(e, s), to_text(e).c_str()); }

bool eval_bool(const Expr& e, const Valuation& s) { return as_bool(eval(e, s), to_text(e).c_str()); }

Value eval_value(const Expr& e, const Valuation& s) {
  Scalar v = eval(e, s);
  if (auto* r = std::get_if<Rational>(&v)) return std::move(*r);
  if (auto* t = std::get_if<Token>(&v)) return std::move(*t);
  throw EvalError("type mismatch: '" + to_text(e) + "' is a truth value, not a program value");
}

Rational eval_expectation(const Expr& e, const Valuation& s) {
  Scalar v = eval(e, s);
  if (const auto* b = std::get_if<bool>(&v)) return Rational(*b ? 1 : 0);
  const Rational& r = as_number(v, "expectation");
  if (r.is_negative()) throw EvalError("expectation '" + to_text(e) + "' is negative (" + r.str() + ")");
  return r;
}

Expr substitute(const Expr& e, const std::string& var, const Expr& replacement) {
  if (e.op() == Op::Var) return e.name() == var ? replacement : e;
  if (e.args().empty()) return e;
  std::vector<Expr> args;
  args.reserve(e.args().size());
  bool changed = false;
  for (const auto& a : e.args()) {
    args.push_back(substitute(a, var, replacement));
    changed = changed || !(args.back() == a);
  }
  return changed ? Expr::nary(e.op(), std::move(args)) : e;
}

void collect_variables(const Expr& e, std::set<std::size_t>& out) {
  if (e.op() == Op::Var) out.insert(e.var_index());
  for (const auto& a : e.args()) collect_variables(a, out);
}

// ---------------------------------------------------------------------------
// Printing. Output re-parses to a structurally equal tree.

namespace {

int precedence(const Expr& e) {
  switch (e.op()) {
    case Op::Or:
      return 1;
    case Op::And:
      return 2;
    case Op::Not:
      return 3;
    case Op::Eq:
    case Op::Ne:
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge:
    case Op::InSet:
      return 4;
    case Op::Add:
    case Op::Sub:
      return 5;
    case Op::Mul:
    case Op::Div:
      return 6;
    case Op::Neg:
      return 7;
    case Op::Number:
      if (e.number().is_negative()) return 7;
      return e.number().is_integer() ? 8 : 6;
    default:
      return 8;
  }
}

const char* symbol(Op op) {
  switch (op) {
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Div: return "/";
    case Op::Eq: return "=";
    case Op::Ne: return "!=";
    case Op::Lt: return "<";
    case Op::Le: return "<=";
    case Op::Gt: return ">";
    case Op::Ge: return ">=";
    case Op::And: return "&";
    case Op::Or: return "|";
    default: return "?";
  }
}

std::string wrap(const Expr& child, bool parens) {
  return parens ? "(" + to_text(child) + ")" : to_text(child);
}

}  // namespace

std::string to_text(const Expr& e) {
  const int p = precedence(e);
  switch (e.op()) {
    case Op::Number:
      return e.number().str();
    case Op::Token:
    case Op::Var:
      return e.name();
    case Op::Bool:
      return e.bool_value() ? "true" : "false";
    case Op::Neg:
      if (e.arg(0).op() == Op::Number) return "-(" + to_text(e.arg(0)) + ")";
      return "-" + wrap(e.arg(0), precedence(e.arg(0)) < 7);
    case Op::Not:
      return "!" + wrap(e.arg(0), precedence(e.arg(0)) <= 4);
    case Op::Iverson:
      return "[" + to_text(e.arg(0)) + "]";
    case Op::Min:
    case Op::Max: {
      std::string out = e.op() == Op::Min ? "min(" : "max(";
      for (std::size_t i = 0; i < e.args().size(); ++i) out += (i ? ", " : "") + to_text(e.arg(i));
      return out + ")";
    }
    case Op::InSet: {
      std::string out = wrap(e.arg(0), precedence(e.arg(0)) <= 4) + " in {";
      for (std::size_t i = 1; i < e.args().size(); ++i) out += (i > 1 ? ", " : "") + to_text(e.arg(i));
      return out + "}";
    }
    case Op::Eq:
    case Op::Ne:
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge:
      return wrap(e.arg(0), precedence(e.arg(0)) <= p) + " " + symbol(e.op()) + " " +
             wrap(e.arg(1), precedence(e.arg(1)) <= p);
    default:
      // Left-associative binary operators.
      return wrap(e.arg(0), precedence(e.arg(0)) < p) + " " + symbol(e.op()) + " " +
             wrap(e.arg(1), precedence(e.arg(1)) <= p);
  }
}

}  // namespace pgcl
