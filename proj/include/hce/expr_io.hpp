#pragma once

#include <stdexcept>
#include <string>

#include "hce/expr.hpp"

namespace hce {

// Pinned infix grammar used by golden files and the JSON output:
//   expr    := term (('+'|'-') term)*
//   term    := unary (('*'|'/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' ('-')? digits)?
//   primary := digits | ident ['(' expr {',' expr} ')'] | '(' expr ')'
// `exp` and `ln` are builtin function tokens; identifiers may end in primes
// (Phi', Psi''). Printing always produces a string this parser accepts, and
// parse(print(e)) == e for canonical e.

std::string to_text(const Expr& e);

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Expr parse_expr(std::string_view text);

// LaTeX rendering used by `--format latex`.
std::string to_latex(const Expr& e);

} // namespace hce
