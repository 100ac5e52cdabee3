#include "pgcl/parser.hpp"

#include <cctype>
#include <set>
#include <stdexcept>

#include "pgcl/errors.hpp"

namespace pgcl {

namespace {

enum class Tok {
  Ident,
  Number,
  Assign,    // :=
  In,        // :in
  SuchThat,  // :suchthat
  Dist,      // :dist
  Colon,
  Arrow,  // ->
  Box,    // []
  Demon,  // |^|
  Lt,
  Le,
  Gt,
  Ge,
  Eq,
  Ne,
  And,
  Or,
  Not,
  Plus,
  Minus,
  Star,
  Slash,
  LParen,
  RParen,
  LBracket,
  RBracket,
  LBrace,
  RBrace,
  Comma,
  Semicolon,
  Range,  // ..
  Newline,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    int depth = 0;  // [ ] and { } nesting; newlines inside are insignificant
    while (true) {
      skip_blanks();
      const std::size_t line = line_, col = col_;
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "", line, col});
        return out;
      }
      const char c = src_[pos_];
      auto emit = [&](Tok k, std::size_t len) {
        out.push_back({k, std::string(src_.substr(pos_, len)), line, col});
        advance(len);
      };
      if (c == '\n') {
        if (depth == 0 && (out.empty() || out.back().kind != Tok::Newline)) emit(Tok::Newline, 1);
        else advance(1);
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t end = pos_;
        while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) ++end;
        if (end + 1 < src_.size() && src_[end] == '.' && std::isdigit(static_cast<unsigned char>(src_[end + 1]))) {
          ++end;
          while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) ++end;
          if (end + 1 < src_.size() && src_[end] == '.' && std::isdigit(static_cast<unsigned char>(src_[end + 1])))
            throw ParseError("malformed numeric literal", line, col);
        }
        emit(Tok::Number, end - pos_);
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t end = pos_;
        while (end < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_' ||
                                     src_[end] == '\''))
          ++end;
        emit(Tok::Ident, end - pos_);
        continue;
      }
      auto starts = [&](std::string_view s) { return src_.substr(pos_, s.size()) == s; };
      auto word_follows = [&](std::string_view w) {
        const std::size_t after = pos_ + 1 + w.size();
        return starts(std::string(":") + std::string(w)) &&
               (after >= src_.size() || !(std::isalnum(static_cast<unsigned char>(src_[after])) || src_[after] == '_'));
      };
      if (starts(":=")) emit(Tok::Assign, 2);
      else if (word_follows("suchthat")) emit(Tok::SuchThat, 9);
      else if (word_follows("dist")) emit(Tok::Dist, 5);
      else if (word_follows("in")) emit(Tok::In, 3);
      else if (c == ':') emit(Tok::Colon, 1);
      else if (starts("->")) emit(Tok::Arrow, 2);
      else if (starts("|^|")) emit(Tok::Demon, 3);
      else if (starts("<=")) emit(Tok::Le, 2);
      else if (starts(">=")) emit(Tok::Ge, 2);
      else if (starts("!=")) emit(Tok::Ne, 2);
      else if (starts("..")) emit(Tok::Range, 2);
      else if (c == '[' && box_follows()) {
        out.push_back({Tok::Box, "[]", line, col});
        advance(1);
        skip_blanks();
        advance(1);
      } else {
        switch (c) {
          case '<': emit(Tok::Lt, 1); break;
          case '>': emit(Tok::Gt, 1); break;
          case '=': emit(Tok::Eq, 1); break;
          case '&': emit(Tok::And, 1); break;
          case '|': emit(Tok::Or, 1); break;
          case '!': emit(Tok::Not, 1); break;
          case '+': emit(Tok::Plus, 1); break;
          case '-': emit(Tok::Minus, 1); break;
          case '*': emit(Tok::Star, 1); break;
          case '/': emit(Tok::Slash, 1); break;
          case '(': emit(Tok::LParen, 1); break;
          case ')': emit(Tok::RParen, 1); break;
          case '[': ++depth; emit(Tok::LBracket, 1); break;
          case ']': depth = depth > 0 ? depth - 1 : 0; emit(Tok::RBracket, 1); break;
          case '{': ++depth; emit(Tok::LBrace, 1); break;
          case '}': depth = depth > 0 ? depth - 1 : 0; emit(Tok::RBrace, 1); break;
          case ',': emit(Tok::Comma, 1); break;
          case ';': emit(Tok::Semicolon, 1); break;
          default:
            throw ParseError(std::string("unexpected character '") + c + "'", line, col);
        }
      }
    }
  }

 private:
  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i, ++pos_) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
    }
  }

  void skip_blanks() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r') {
        advance(1);
      } else if (c == '#' || (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/')) {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance(1);
      } else {
        break;
      }
    }
  }

  bool box_follows() const {
    std::size_t p = pos_ + 1;
    while (p < src_.size() && (src_[p] == ' ' || src_[p] == '\t')) ++p;
    return p < src_.size() && src_[p] == ']';
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

const std::set<std::string>& keywords() {
  static const std::set<std::string> k{"SKIP", "ABORT", "IF",    "THEN", "ELSE", "FI",    "WHILE", "DO",
                                       "OD",   "var",   "param", "in",   "true", "false", "min",   "max"};
  return k;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, StateSpace space, ParamMap params)
      : toks_(std::move(tokens)), space_(std::move(space)), params_(std::move(params)) {
    index_tokens();
  }

  // --- header ---------------------------------------------------------------

  static std::pair<StateSpace, ParamMap> header(Parser& p, const ParamMap& overrides) {
    std::vector<VarDomain> domains;
    ParamMap params;
    while (true) {
      p.skip_separators();
      if (p.is_word("var")) {
        const Token& kw = p.next();
        const Token& name = p.expect(Tok::Ident, "variable name");
        check_name(name);
        p.expect_word("in");
        domains.push_back({name.text, p.domain_values()});
        (void)kw;
      } else if (p.is_word("param")) {
        p.next();
        const Token& name = p.expect(Tok::Ident, "parameter name");
        check_name(name);
        p.expect(Tok::Eq, "'='");
        params[name.text] = p.signed_literal();
      } else {
        break;
      }
    }
    for (const auto& [k, v] : overrides) params[k] = v;
    StateSpace space;
    try {
      space = StateSpace(std::move(domains));
    } catch (const Error& e) {
      throw ParseError(e.what(), 1, 1);
    }
    for (const auto& [k, v] : params)
      if (space.index_of(k)) throw ParseError("'" + k + "' declared both as parameter and variable", 1, 1);
    return {std::move(space), std::move(params)};
  }

  void reset_context(StateSpace space, ParamMap params) {
    space_ = std::move(space);
    params_ = std::move(params);
    index_tokens();
  }

  // --- programs -------------------------------------------------------------

  Program whole_program() {
    skip_separators();
    Program p = sequence();
    skip_separators();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return p;
  }

  Expr whole_expr() {
    Expr e = bool_expr();
    skip_separators();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "' after expression");
    return e;
  }

  bool at_end() {
    skip_separators();
    return peek().kind == Tok::End;
  }

 private:
  // --- token helpers --------------------------------------------------------

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool is(Tok k) const { return peek().kind == k; }
  bool is_word(std::string_view w) const { return peek().kind == Tok::Ident && peek().text == w; }
  bool accept(Tok k) {
    if (!is(k)) return false;
    next();
    return true;
  }
  [[noreturn]] void fail(const std::string& msg) const { fail_at(peek(), msg); }
  [[noreturn]] static void fail_at(const Token& t, const std::string& msg) {
    throw ParseError(msg, t.line, t.column);
  }
  const Token& expect(Tok k, const std::string& what) {
    if (!is(k)) fail("expected " + what + ", found '" + describe(peek()) + "'");
    return next();
  }
  void expect_word(std::string_view w) {
    if (!is_word(w)) fail("expected '" + std::string(w) + "', found '" + describe(peek()) + "'");
    next();
  }
  static std::string describe(const Token& t) {
    if (t.kind == Tok::End) return "end of input";
    if (t.kind == Tok::Newline) return "end of line";
    return t.text;
  }
  void skip_newlines() {
    while (is(Tok::Newline)) next();
  }
  void skip_separators() {
    while (is(Tok::Newline) || is(Tok::Semicolon)) next();
  }
  static void check_name(const Token& t) {
    if (keywords().count(t.text)) fail_at(t, "'" + t.text + "' is a reserved word");
  }

  void index_tokens() {
    known_tokens_.clear();
    for (const auto& d : space_.domains())
      for (const auto& v : d.values)
        if (const auto* t = std::get_if<pgcl::Token>(&v)) known_tokens_.insert(t->name);
  }

  // --- declarations ---------------------------------------------------------

  Rational signed_literal() {
    bool negative = accept(Tok::Minus);
    const Token& t = expect(Tok::Number, "number");
    Rational r = literal_value(t);
    if (is(Tok::Slash) && peek(1).kind == Tok::Number) {
      next();
      const Token& d = next();
      Rational den = literal_value(d);
      if (!r.is_integer() || !den.is_integer() || den.is_zero()) fail_at(d, "malformed rational literal");
      r /= den;
    }
    return negative ? -r : r;
  }

  static Rational literal_value(const Token& t) {
    try {
      return Rational::parse(t.text);
    } catch (const std::exception&) {
      fail_at(t, "malformed numeric literal '" + t.text + "'");
    }
  }

  std::vector<Value> domain_values() {
    expect(Tok::LBrace, "'{'");
    std::vector<Value> values;
    while (true) {
      if (is(Tok::Ident)) {
        const Token& t = next();
        check_name(t);
        values.push_back(pgcl::Token{t.text});
      } else {
        Rational lo = signed_literal();
        if (accept(Tok::Range)) {
          Rational hi = signed_literal();
          if (!lo.is_integer() || !hi.is_integer() || hi < lo) fail("range bounds must be integers, low <= high");
          for (Rational v = lo; v <= hi; v += 1) values.push_back(v);
        } else {
          values.push_back(lo);
        }
      }
      if (accept(Tok::Comma)) continue;
      expect(Tok::RBrace, "',' or '}'");
      return values;
    }
  }

  // --- statements -----------------------------------------------------------

  bool at_terminator() const {
    switch (peek().kind) {
      case Tok::End:
      case Tok::Box:
      case Tok::RParen:
        return true;
      case Tok::Ident:
        return peek().text == "FI" || peek().text == "OD" || peek().text == "ELSE";
      default:
        return false;
    }
  }

  Program sequence() {
    skip_separators();
    if (at_terminator()) fail("expected a statement, found '" + describe(peek()) + "'");
    Program first = choice();
    if (is(Tok::Semicolon) || is(Tok::Newline)) {
      skip_separators();
      if (at_terminator()) return first;
      Program rest = sequence();
      return make_program(Seq{first, rest});
    }
    return first;
  }

  // x := a <p> x := b reads as x :in a <p> b; likewise for |^|.
  static const Assign* single_assign(const Program& p) {
    const auto* a = as<Assign>(p);
    return a && a->targets.size() == 1 ? a : nullptr;
  }

  Program choice() {
    Program left = statement();
    while (true) {
      if (is(Tok::Lt)) {
        next();
        Expr p = probability_between_angles();
        skip_newlines();
        Program right = statement();
        const auto* a = single_assign(left);
        const auto* b = single_assign(right);
        if (a && b && a->targets[0] == b->targets[0])
          left = make_program(ProbAssign{a->targets[0], a->values[0], p, b->values[0]});
        else
          left = make_program(ProbChoice{p, left, right});
      } else if (accept(Tok::Demon)) {
        skip_newlines();
        Program right = statement();
        const auto* a = single_assign(left);
        const auto* b = single_assign(right);
        if (a && b && a->targets[0] == b->targets[0])
          left = make_program(DemonAssign{a->targets[0], a->values[0], b->values[0]});
        else
          left = make_program(DemonChoice{left, right});
      } else {
        return left;
      }
    }
  }

  // After '<': additive expression, then '>'.
  Expr probability_between_angles() {
    const Token& start = peek();
    in_probability_ = true;
    Expr p = additive();
    in_probability_ = false;
    expect(Tok::Gt, "'>' closing the probability");
    check_probability(p, start);
    return p;
  }

  void check_probability(const Expr& p, const Token& at) const {
    if (!p.is_constant()) return;
    Rational v;
    try {
      v = eval_number(p, {});
    } catch (const EvalError&) {
      fail_at(at, "malformed probability literal '" + to_text(p) + "'");
    }
    if (v.is_negative() || Rational(1) < v)
      fail_at(at, "malformed probability literal '" + to_text(p) + "': outside [0,1]");
  }

  Program statement() {
    const Token& t = peek();
    if (t.kind == Tok::LParen) {
      next();
      Program body = sequence();
      skip_separators();
      expect(Tok::RParen, "')'");
      return body;
    }
    if (t.kind == Tok::LBrace) {
      next();
      Expr pred = bool_expr();
      expect(Tok::RBrace, "'}'");
      return make_program(Assert{pred});
    }
    if (t.kind != Tok::Ident) fail("expected a statement, found '" + describe(t) + "'");
    if (t.text == "SKIP") return next(), make_program(Skip{});
    if (t.text == "ABORT") return next(), make_program(Abort{});
    if (t.text == "IF") return if_statement();
    if (t.text == "WHILE") return while_statement();
    return assignment_like();
  }

  Program if_statement() {
    next();
    const Token& cond_tok = peek();
    Expr cond = bool_expr();
    if (is(Tok::Arrow)) return guarded_if(cond);
    skip_newlines();
    expect_word("THEN");
    Program then_branch = sequence();
    skip_separators();
    Program else_branch;
    if (is_word("ELSE")) {
      next();
      else_branch = sequence();
      skip_separators();
    }
    if (is_word("FI")) next();
    if (cond.is_boolean()) return make_program(IfBool{cond, then_branch, else_branch});
    check_probability(cond, cond_tok);
    return make_program(IfProb{cond, then_branch, else_branch});
  }

  Program guarded_if(Expr first_guard) {
    std::vector<GuardedBranch> branches;
    Expr guard = std::move(first_guard);
    while (true) {
      expect(Tok::Arrow, "'->'");
      Program body = sequence();
      branches.push_back({guard, body});
      skip_separators();
      if (accept(Tok::Box)) {
        skip_newlines();
        guard = bool_expr();
        continue;
      }
      expect_word("FI");
      return make_program(GuardedIf{std::move(branches)});
    }
  }

  Program while_statement() {
    next();
    const Token& guard_tok = peek();
    Expr guard = bool_expr();
    if (!guard.is_boolean()) check_probability(guard, guard_tok);
    skip_newlines();
    expect_word("DO");
    Program body = sequence();
    skip_separators();
    expect_word("OD");
    return make_program(While{guard, body});
  }

  VarRef target() {
    const Token& t = expect(Tok::Ident, "variable");
    if (keywords().count(t.text)) fail_at(t, "unexpected '" + t.text + "'");
    auto idx = space_.index_of(t.text);
    if (!idx) fail_at(t, "undeclared variable '" + t.text + "'");
    return {t.text, *idx};
  }

  Program assignment_like() {
    const Token& first = peek();
    std::vector<VarRef> targets{target()};
    while (accept(Tok::Comma)) targets.push_back(target());
    for (std::size_t i = 0; i < targets.size(); ++i)
      for (std::size_t j = i + 1; j < targets.size(); ++j)
        if (targets[i].name == targets[j].name) fail_at(first, "variable '" + targets[i].name + "' assigned twice");

    if (accept(Tok::Assign)) {
      std::vector<Expr> values{additive()};
      while (accept(Tok::Comma)) values.push_back(additive());
      if (values.size() != targets.size())
        fail_at(first, "assignment has " + std::to_string(targets.size()) + " targets but " +
                           std::to_string(values.size()) + " values");
      return make_program(Assign{std::move(targets), std::move(values)});
    }
    if (accept(Tok::SuchThat)) return make_program(SuchThat{std::move(targets), bool_expr()});
    if (targets.size() != 1) fail("expected ':=' or ':suchthat' after variable list");
    if (accept(Tok::In)) {
      if (accept(Tok::LBrace)) {
        std::vector<Expr> elems{additive()};
        while (accept(Tok::Comma)) elems.push_back(additive());
        expect(Tok::RBrace, "'}'");
        return make_program(ChooseFromSet{targets[0], std::move(elems)});
      }
      Expr left = additive();
      if (accept(Tok::Lt)) {
        Expr p = probability_between_angles();
        Expr right = additive();
        return make_program(ProbAssign{targets[0], left, p, right});
      }
      if (accept(Tok::Demon)) return make_program(DemonAssign{targets[0], left, additive()});
      fail("expected '<p>' or '|^|' in ':in' assignment");
    }
    if (accept(Tok::Dist)) {
      const Token& open = expect(Tok::LBracket, "'['");
      std::vector<DistEntry> entries;
      bool all_constant = true;
      Rational total;
      do {
        Expr value = additive();
        expect(Tok::Colon, "':'");
        const Token& ptok = peek();
        Expr prob = additive();
        check_probability(prob, ptok);
        if (prob.is_constant()) total += eval_number(prob, {});
        else all_constant = false;
        entries.push_back({value, prob});
      } while (accept(Tok::Comma));
      expect(Tok::RBracket, "']'");
      if (all_constant && total != Rational(1))
        fail_at(open, "distribution probabilities sum to " + total.str() + ", not 1");
      return make_program(ChooseFromDist{targets[0], std::move(entries)});
    }
    fail("expected ':=', ':in', ':suchthat' or ':dist', found '" + describe(peek()) + "'");
  }

  // --- expressions ----------------------------------------------------------

  Expr bool_expr() { return disjunction(); }

  Expr disjunction() {
    Expr e = conjunction();
    while (accept(Tok::Or)) e = Expr::binary(Op::Or, e, conjunction());
    return e;
  }

  Expr conjunction() {
    Expr e = negation();
    while (accept(Tok::And)) e = Expr::binary(Op::And, e, negation());
    return e;
  }

  Expr negation() {
    if (accept(Tok::Not)) return Expr::unary(Op::Not, negation());
    return comparison();
  }

  static std::optional<Op> comparator(Tok k) {
    switch (k) {
      case Tok::Eq: return Op::Eq;
      case Tok::Ne: return Op::Ne;
      case Tok::Lt: return Op::Lt;
      case Tok::Le: return Op::Le;
      case Tok::Gt: return Op::Gt;
      case Tok::Ge: return Op::Ge;
      default: return std::nullopt;
    }
  }

  // a < b <= c is read as a < b & b <= c.
  Expr comparison() {
    Expr lhs = additive();
    if (is_word("in")) {
      next();
      expect(Tok::LBrace, "'{'");
      std::vector<Expr> args{lhs, additive()};
      while (accept(Tok::Comma)) args.push_back(additive());
      expect(Tok::RBrace, "'}'");
      return Expr::nary(Op::InSet, std::move(args));
    }
    std::optional<Expr> result;
    while (auto op = comparator(peek().kind)) {
      next();
      Expr rhs = additive();
      Expr link = Expr::binary(*op, lhs, rhs);
      result = result ? Expr::binary(Op::And, *result, link) : link;
      lhs = rhs;
    }
    return result ? *result : lhs;
  }

  Expr additive() {
    Expr e = multiplicative();
    while (true) {
      if (accept(Tok::Plus)) e = Expr::binary(Op::Add, e, multiplicative());
      else if (accept(Tok::Minus)) e = Expr::binary(Op::Sub, e, multiplicative());
      else return e;
    }
  }

  Expr multiplicative() {
    Expr e = unary();
    while (true) {
      if (accept(Tok::Star)) e = Expr::binary(Op::Mul, e, unary());
      else if (accept(Tok::Slash)) e = Expr::binary(Op::Div, e, unary());
      else return e;
    }
  }

  Expr unary() {
    if (accept(Tok::Minus)) {
      if (is(Tok::Number)) return Expr::number(-literal());
      return Expr::unary(Op::Neg, unary());
    }
    return primary();
  }

  // A numeric literal; "a/b" with integer a and b is a single rational literal.
  Rational literal() {
    const Token& t = next();
    Rational r = literal_value(t);
    if (r.is_integer() && is(Tok::Slash) && peek(1).kind == Tok::Number &&
        peek(1).text.find('.') == std::string::npos) {
      next();
      const Token& d = next();
      Rational den = literal_value(d);
      if (den.is_zero())
        fail_at(d, in_probability_ ? "malformed probability literal '" + t.text + "/" + d.text + "'"
                                   : "malformed rational literal: zero denominator");
      r /= den;
    }
    return r;
  }

  Expr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number:
        return Expr::number(literal());
      case Tok::LParen: {
        next();
        Expr e = bool_expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::LBracket: {
        next();
        Expr e = bool_expr();
        expect(Tok::RBracket, "']'");
        return Expr::unary(Op::Iverson, e);
      }
      case Tok::Ident:
        return identifier();
      default:
        fail("expected an expression, found '" + describe(t) + "'");
    }
  }

  Expr identifier() {
    const Token& t = next();
    if (t.text == "true" || t.text == "True") return Expr::boolean(true);
    if (t.text == "false" || t.text == "False") return Expr::boolean(false);
    if ((t.text == "min" || t.text == "max") && is(Tok::LParen)) {
      next();
      std::vector<Expr> args{additive()};
      while (accept(Tok::Comma)) args.push_back(additive());
      expect(Tok::RParen, "')'");
      return Expr::nary(t.text == "min" ? Op::Min : Op::Max, std::move(args));
    }
    if (keywords().count(t.text)) fail_at(t, "unexpected '" + t.text + "'");
    if (auto idx = space_.index_of(t.text)) return Expr::var(t.text, *idx);
    if (auto it = params_.find(t.text); it != params_.end()) return Expr::number(it->second);
    if (known_tokens_.count(t.text)) return Expr::token(t.text);
    fail_at(t, "undeclared variable '" + t.text + "'");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  StateSpace space_;
  ParamMap params_;
  std::set<std::string> known_tokens_;
  bool in_probability_ = false;
};

}  // namespace

SourceUnit parse_unit(std::string_view text, const ParamMap& overrides) {
  Parser p(Lexer(text).run(), StateSpace(), {});
  auto [space, params] = Parser::header(p, overrides);
  p.reset_context(space, params);
  Program program = p.whole_program();
  return {std::move(space), std::move(params), std::move(program)};
}

Program parse_program(std::string_view text, const StateSpace& space, const ParamMap& params) {
  Parser p(Lexer(text).run(), space, params);
  return p.whole_program();
}

Expr parse_expr(std::string_view text, const StateSpace& space, const ParamMap& params) {
  Parser p(Lexer(text).run(), space, params);
  return p.whole_expr();
}

StateSpace parse_space(std::string_view text) {
  Parser p(Lexer(text).run(), StateSpace(), {});
  auto [space, params] = Parser::header(p, {});
  if (!p.at_end()) throw ParseError("unexpected program text after declarations", 1, 1);
  return space;
}

}  // namespace pgcl
