#pragma once

#include "structid/expr.hpp"
#include "structid/poly.hpp"

#include <string>
#include <vector>

namespace structid {

/// Expands `e` into a rational function over Q in the variables `vars`
/// (matched by symbol name). Unlisted symbols raise std::out_of_range.
RationalFunction<Rational> to_rational_function(const Expr& e, const std::vector<std::string>& vars);

/// True when `e` simplifies to the zero rational function.
bool is_identically_zero(const Expr& e);

/// Exact value of a symbol-free expression.
Rational evaluate_constant(const Expr& e);

}  // namespace structid
