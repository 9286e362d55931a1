#pragma once

#include "structid/rational.hpp"

#include <memory>
#include <set>
#include <string>

namespace structid {

enum class SymbolKind { State, Parameter, Input };

/// Immutable expression tree over exact rational constants, symbols, the four
/// field operations, negation and integer powers with literal exponents.
/// Copies share structure; equality is structural.
class Expr {
 public:
  enum class Op { Const, Symbol, Add, Sub, Mul, Div, Neg, Pow };

  Expr();  // the constant 0

  static Expr constant(Rational value);
  static Expr symbol(std::string name, SymbolKind kind);
  static Expr binary(Op op, Expr lhs, Expr rhs);
  static Expr negate(Expr operand);
  static Expr power(Expr base, unsigned exponent);

  Op op() const;
  const Rational& value() const;      // Const only
  const std::string& name() const;    // Symbol only
  SymbolKind kind() const;            // Symbol only
  unsigned exponent() const;          // Pow only
  const Expr& lhs() const;            // binary ops; Neg/Pow operand
  const Expr& rhs() const;            // binary ops

  bool is_constant() const { return op() == Op::Const; }

  /// Every symbol referenced, as (kind, name) pairs.
  void collect_symbols(std::set<std::pair<SymbolKind, std::string>>& out) const;
  std::set<std::string> symbol_names() const;

  /// Minimal-parenthesis rendering in the model-file syntax. Parsing the
  /// result yields a structurally identical tree.
  std::string to_string() const;

  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

  friend Expr operator+(Expr a, Expr b) { return binary(Op::Add, std::move(a), std::move(b)); }
  friend Expr operator-(Expr a, Expr b) { return binary(Op::Sub, std::move(a), std::move(b)); }
  friend Expr operator*(Expr a, Expr b) { return binary(Op::Mul, std::move(a), std::move(b)); }
  friend Expr operator/(Expr a, Expr b) { return binary(Op::Div, std::move(a), std::move(b)); }
  friend Expr operator-(Expr a) { return negate(std::move(a)); }

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Replaces every symbol for which `replace(name, kind)` returns a value.
template <class Fn>
Expr substitute(const Expr& e, const Fn& replace) {
  switch (e.op()) {
    case Expr::Op::Const:
      return e;
    case Expr::Op::Symbol: {
      if (auto r = replace(e.name(), e.kind())) return *r;
      return e;
    }
    case Expr::Op::Neg:
      return Expr::negate(substitute(e.lhs(), replace));
    case Expr::Op::Pow:
      return Expr::power(substitute(e.lhs(), replace), e.exponent());
    default:
      return Expr::binary(e.op(), substitute(e.lhs(), replace), substitute(e.rhs(), replace));
  }
}

}  // namespace structid
