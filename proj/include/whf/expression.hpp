// Parser for the entry expressions of user matrix specs.
//
// Grammar (whitespace ignored):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' ['-'] integer)?
//   primary := number | 'x' | 'i' | 'eps' | 'pi' | '(' expr ')'
//            | ('exp' | 'sin' | 'cos') '(' expr ')'
//
// exp() needs an argument a + i w x (affine in x with imaginary slope); sin()
// and cos() need a real slope. Divisors and negative powers must be free of
// oscillating factors. The result keeps the exp(i w x) factors as separate
// harmonic terms.
#pragma once

#include <string>

#include "whf/funcspace.hpp"

namespace whf {

/// Parses `text` with eps bound to `eps`; throws ConfigError on bad input.
BoundaryFunction parse_expression(const std::string& text, double eps);

}  // namespace whf
