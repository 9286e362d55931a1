#pragma once

#include "structid/expr.hpp"
#include "structid/modint.hpp"

#include <map>
#include <stdexcept>
#include <string>

namespace structid {

/// Evaluates `e` in any ring R providing + - * / and unary -.
///   lookup(const Expr& symbol) -> R   binds symbols
///   make_const(const Rational&) -> R  embeds constants
/// Division by a non-invertible element propagates ZeroDivisor from R.
template <class R, class Lookup, class MakeConst>
R eval_expr(const Expr& e, const Lookup& lookup, const MakeConst& make_const) {
  switch (e.op()) {
    case Expr::Op::Const:
      return make_const(e.value());
    case Expr::Op::Symbol:
      return lookup(e);
    case Expr::Op::Add:
      return eval_expr<R>(e.lhs(), lookup, make_const) + eval_expr<R>(e.rhs(), lookup, make_const);
    case Expr::Op::Sub:
      return eval_expr<R>(e.lhs(), lookup, make_const) - eval_expr<R>(e.rhs(), lookup, make_const);
    case Expr::Op::Mul:
      return eval_expr<R>(e.lhs(), lookup, make_const) * eval_expr<R>(e.rhs(), lookup, make_const);
    case Expr::Op::Div:
      return eval_expr<R>(e.lhs(), lookup, make_const) / eval_expr<R>(e.rhs(), lookup, make_const);
    case Expr::Op::Neg:
      return -eval_expr<R>(e.lhs(), lookup, make_const);
    case Expr::Op::Pow: {
      R base = eval_expr<R>(e.lhs(), lookup, make_const);
      R acc = make_const(Rational(1));
      for (unsigned k = e.exponent(); k; k >>= 1) {
        if (k & 1) acc = acc * base;
        if (k > 1) base = base * base;
      }
      return acc;
    }
  }
  throw std::logic_error("eval_expr: corrupt expression");
}

/// Map-environment form; every symbol must be bound by name.
template <class R, class MakeConst>
R eval_expr(const Expr& e, const std::map<std::string, R>& env, const MakeConst& make_const) {
  return eval_expr<R>(
      e,
      [&](const Expr& s) -> R {
        auto it = env.find(s.name());
        if (it == env.end()) throw std::out_of_range("unbound symbol '" + s.name() + "'");
        return it->second;
      },
      make_const);
}

/// Prime-field evaluation, the common case.
inline Fp eval_expr(const Expr& e, const std::map<std::string, Fp>& env) {
  return eval_expr<Fp>(e, env, [](const Rational& r) { return Fp::from_rational(r); });
}

}  // namespace structid
