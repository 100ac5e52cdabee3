#pragma once

#include <map>
#include <string>
#include <string_view>

#include "pgcl/expr.hpp"
#include "pgcl/program.hpp"
#include "pgcl/state_space.hpp"

namespace pgcl {

// Specification parameters, substituted as rational literals at parse time.
using ParamMap = std::map<std::string, Rational>;

// A source file: `var`/`param` declaration header followed by a program.
//
//   var c1 in {H, T}
//   var n in {0 .. 3}
//   param p = 1/3
//   c1 := H <p> c1 := T
struct SourceUnit {
  StateSpace space;
  ParamMap params;
  Program program;
};

// All parse functions throw ParseError carrying line and column.
SourceUnit parse_unit(std::string_view text, const ParamMap& overrides = {});
Program parse_program(std::string_view text, const StateSpace& space, const ParamMap& params = {});
Expr parse_expr(std::string_view text, const StateSpace& space, const ParamMap& params = {});
// Header lines only (no program body).
StateSpace parse_space(std::string_view text);

}  // namespace pgcl
