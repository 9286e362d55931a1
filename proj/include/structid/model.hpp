#pragma once

#include "structid/expr.hpp"
#include "structid/rational.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace structid {

/// Any failure to turn model text into a ModelIR. Always carries the 1-based
/// line and column of the offending token.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& message);
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  int line_;
  int column_;
  std::string message_;
};

/// Validated rational ODE system
///   x' = f(x, u, theta),  y = g(x, u, theta),  x(0) partially known.
struct ModelIR {
  std::vector<std::string> states;
  std::vector<std::string> params;
  std::vector<std::string> inputs;
  std::vector<Expr> state_rhs;  // aligned with `states`
  std::vector<std::pair<std::string, Expr>> outputs;
  std::map<std::string, Rational> known_ics;

  const Expr& rhs(std::string_view state) const;
  std::optional<std::size_t> state_index(std::string_view name) const;
  bool is_known_ic(std::string_view state) const { return known_ics.count(std::string(state)) > 0; }

  friend bool operator==(const ModelIR& a, const ModelIR& b);
  friend bool operator!=(const ModelIR& a, const ModelIR& b) { return !(a == b); }
};

struct ParseOptions {
  /// Require every parameter and input to be declared with `params:` /
  /// `inputs:`; undeclared symbols become an error instead of a parameter.
  bool strict = false;
};

ModelIR parse_model(std::string_view text, const ParseOptions& options = {});

/// Parses a standalone expression against an existing model's symbol
/// classification (used for user-supplied functions of the unknowns).
/// Bare names must be parameters; `x(0)` denotes the initial value of state x
/// and is returned as a State symbol.
Expr parse_function(std::string_view text, const ModelIR& model);

/// Comma-separated list of functions, e.g. "a01 + a12, a01*a12".
std::vector<Expr> parse_function_list(std::string_view text, const ModelIR& model);

/// Deterministic serialization; parse_model(canonical_text(m)) == m.
std::string canonical_text(const ModelIR& model);

/// Copy of `model` with every input replaced by the constant `value`
/// and the input list emptied.
ModelIR fix_inputs(const ModelIR& model, const Rational& value);

}  // namespace structid
