#pragma once

#include "starpde/system.hpp"

#include <optional>
#include <string>

namespace starpde {

/// Expression grammar (whitespace-insensitive, # line comments):
///   expr   := term (('+' | '-') term)*
///   term   := factor (('*' | '/') factor)*
///   factor := '-' factor | power
///   power  := atom ('^' nat)?
///   atom   := nat | ident | '(' expr ')'
/// "mu" is the reserved parameter name; rational literals appear as p/q.
/// Syntax errors carry line and column.
MuPoly parse_mu_expression(const std::string& text, const VarsPtr& coords);

/// Same grammar, but a result that still contains mu is rejected
/// ("mu in a coefficient position").
RationalFunction parse_rf_expression(const std::string& text, const VarsPtr& coords);

/// System document:
///   system := header? coords zdecl adecl+
///   header := "system" ident ";"
///   coords := "coords" ':' ident (',' ident)* ';'
///   zdecl  := "Z" ':' expr ';'
///   adecl  := "A" nat ':' '[' row (',' row)* ']' ';'
///   row    := '[' expr (',' expr)* ']'
struct SystemDocument {
    std::string name; // empty when the header is omitted
    SystemSpec sys;
};

SystemDocument parse_system(const std::string& text);

std::string print_system(const SystemSpec& sys, const std::string& name = "");
std::string print_solution(const SolutionVec& v);

} // namespace starpde
