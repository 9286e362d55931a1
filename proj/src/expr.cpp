#include "structid/expr.hpp"

#include <stdexcept>
#include <vector>

namespace structid {

struct Expr::Node {
  Op op = Op::Const;
  Rational value;
  std::string name;
  SymbolKind kind = SymbolKind::Parameter;
  unsigned exponent = 0;
  std::vector<Expr> children;
};

Expr::Expr() : Expr(constant(Rational(0))) {}

Expr Expr::constant(Rational value) {
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->value = std::move(value);
  return Expr(std::move(n));
}

Expr Expr::symbol(std::string name, SymbolKind kind) {
  auto n = std::make_shared<Node>();
  n->op = Op::Symbol;
  n->name = std::move(name);
  n->kind = kind;
  return Expr(std::move(n));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
  if (op != Op::Add && op != Op::Sub && op != Op::Mul && op != Op::Div)
    throw std::invalid_argument("Expr::binary: not a binary operator");
  auto n = std::make_shared<Node>();
  n->op = op;
  n->children = {std::move(lhs), std::move(rhs)};
  return Expr(std::move(n));
}

Expr Expr::negate(Expr operand) {
  auto n = std::make_shared<Node>();
  n->op = Op::Neg;
  n->children = {std::move(operand)};
  return Expr(std::move(n));
}

Expr Expr::power(Expr base, unsigned exponent) {
  auto n = std::make_shared<Node>();
  n->op = Op::Pow;
  n->exponent = exponent;
  n->children = {std::move(base)};
  return Expr(std::move(n));
}

Expr::Op Expr::op() const { return node_->op; }
const Rational& Expr::value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
SymbolKind Expr::kind() const { return node_->kind; }
unsigned Expr::exponent() const { return node_->exponent; }
const Expr& Expr::lhs() const { return node_->children.at(0); }
const Expr& Expr::rhs() const { return node_->children.at(1); }

void Expr::collect_symbols(std::set<std::pair<SymbolKind, std::string>>& out) const {
  if (op() == Op::Symbol) {
    out.emplace(kind(), name());
    return;
  }
  for (const auto& c : node_->children) c.collect_symbols(out);
}

std::set<std::string> Expr::symbol_names() const {
  std::set<std::pair<SymbolKind, std::string>> tagged;
  collect_symbols(tagged);
  std::set<std::string> names;
  for (auto& [kind, name] : tagged) names.insert(name);
  return names;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.op != y.op) return false;
  switch (x.op) {
    case Expr::Op::Const:
      return x.value == y.value;
    case Expr::Op::Symbol:
      return x.name == y.name && x.kind == y.kind;
    case Expr::Op::Pow:
      if (x.exponent != y.exponent) return false;
      break;
    default:
      break;
  }
  if (x.children.size() != y.children.size()) return false;
  for (std::size_t i = 0; i < x.children.size(); ++i)
    if (x.children[i] != y.children[i]) return false;
  return true;
}

namespace {

int precedence(const Expr& e) {
  switch (e.op()) {
    case Expr::Op::Add:
    case Expr::Op::Sub:
      return 1;
    case Expr::Op::Mul:
    case Expr::Op::Div:
      return 2;
    case Expr::Op::Neg:
      return 3;
    case Expr::Op::Pow:
      return 4;
    default:
      return 5;
  }
}

void render(const Expr& e, std::string& out);

void render_wrapped(const Expr& e, bool wrap, std::string& out) {
  if (wrap) out += '(';
  render(e, out);
  if (wrap) out += ')';
}

void render(const Expr& e, std::string& out) {
  switch (e.op()) {
    case Expr::Op::Const:
      if (denominator(e.value()) == 1) {
        out += to_string(e.value());
      } else {
        out += '(';
        out += to_string(e.value());
        out += ')';
      }
      return;
    case Expr::Op::Symbol:
      out += e.name();
      if (e.kind() != SymbolKind::Parameter) out += "(t)";
      return;
    case Expr::Op::Neg:
      out += '-';
      render_wrapped(e.lhs(), precedence(e.lhs()) < 3, out);
      return;
    case Expr::Op::Pow:
      render_wrapped(e.lhs(), precedence(e.lhs()) < 5, out);
      out += '^';
      out += std::to_string(e.exponent());
      return;
    default:
      break;
  }
  const int p = precedence(e);
  render_wrapped(e.lhs(), precedence(e.lhs()) < p, out);
  switch (e.op()) {
    case Expr::Op::Add: out += " + "; break;
    case Expr::Op::Sub: out += " - "; break;
    case Expr::Op::Mul: out += '*'; break;
    default: out += '/'; break;
  }
  render_wrapped(e.rhs(), precedence(e.rhs()) <= p, out);
}

}  // namespace

std::string Expr::to_string() const {
  std::string out;
  render(*this, out);
  return out;
}

}  // namespace structid
