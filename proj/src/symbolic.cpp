#include "structid/symbolic.hpp"

#include "structid/eval.hpp"

#include <algorithm>
#include <stdexcept>

namespace structid {

RationalFunction<Rational> to_rational_function(const Expr& e, const std::vector<std::string>& vars) {
  using RF = RationalFunction<Rational>;
  const std::size_t n = vars.size();
  return eval_expr<RF>(
      e,
      [&](const Expr& s) {
        auto it = std::find(vars.begin(), vars.end(), s.name());
        if (it == vars.end()) throw std::out_of_range("symbol '" + s.name() + "' is not a polynomial variable");
        return RF(SparsePoly<Rational>::variable(n, static_cast<std::size_t>(it - vars.begin())));
      },
      [&](const Rational& c) { return RF::constant(n, c); });
}

bool is_identically_zero(const Expr& e) {
  const auto names = e.symbol_names();
  const std::vector<std::string> vars(names.begin(), names.end());
  try {
    return to_rational_function(e, vars).is_zero();
  } catch (const ZeroDivisor&) {
    // Contains a division by zero itself; that is reported where it occurs.
    return false;
  }
}

Rational evaluate_constant(const Expr& e) {
  return eval_expr<Rational>(
      e, [](const Expr& s) -> Rational { throw std::invalid_argument("symbol '" + s.name() + "' in a constant"); },
      [](const Rational& c) {
        return c;
      });
}

}  // namespace structid
