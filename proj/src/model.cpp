#include "structid/model.hpp"

#include "structid/symbolic.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <unordered_map>

namespace structid {

ParseError::ParseError(int line, int column, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column),
      message_(message) {}

const Expr& ModelIR::rhs(std::string_view state) const {
  auto idx = state_index(state);
  if (!idx) throw std::out_of_range("unknown state: " + std::string(state));
  return state_rhs[*idx];
}

std::optional<std::size_t> ModelIR::state_index(std::string_view name) const {
  auto it = std::find(states.begin(), states.end(), name);
  if (it == states.end()) return std::nullopt;
  return static_cast<std::size_t>(it - states.begin());
}

bool operator==(const ModelIR& a, const ModelIR& b) {
  return a.states == b.states && a.params == b.params && a.inputs == b.inputs &&
         a.state_rhs == b.state_rhs && a.outputs == b.outputs && a.known_ics == b.known_ics;
}

namespace {

enum class Tok { Ident, Number, LParen, RParen, Plus, Minus, Star, Slash, Caret, Equals, Prime, Comma, Colon, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int column = 0;
};

std::vector<Token> lex(std::string_view line, int line_no) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const unsigned char c = static_cast<unsigned char>(line[i]);
    const int col = static_cast<int>(i) + 1;
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (std::isalpha(c) || c == '_') {
      std::size_t j = i;
      while (j < line.size() && (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_')) ++j;
      out.push_back({Tok::Ident, std::string(line.substr(i, j - i)), col});
      i = j;
      continue;
    }
    if (std::isdigit(c) || (c == '.' && i + 1 < line.size() && std::isdigit(static_cast<unsigned char>(line[i + 1])))) {
      std::size_t j = i;
      while (j < line.size() && (std::isdigit(static_cast<unsigned char>(line[j])) || line[j] == '.')) ++j;
      if (j < line.size() && (line[j] == 'e' || line[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < line.size() && (line[k] == '+' || line[k] == '-')) ++k;
        if (k < line.size() && std::isdigit(static_cast<unsigned char>(line[k]))) {
          j = k;
          while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
        }
      }
      out.push_back({Tok::Number, std::string(line.substr(i, j - i)), col});
      i = j;
      continue;
    }
    Tok kind;
    switch (c) {
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      case '+': kind = Tok::Plus; break;
      case '-': kind = Tok::Minus; break;
      case '*': kind = Tok::Star; break;
      case '/': kind = Tok::Slash; break;
      case '^': kind = Tok::Caret; break;
      case '=': kind = Tok::Equals; break;
      case '\'': kind = Tok::Prime; break;
      case ',': kind = Tok::Comma; break;
      case ':': kind = Tok::Colon; break;
      default: {
        std::string shown = c < 0x80 && std::isprint(c) ? std::string(1, static_cast<char>(c)) : "non-ASCII byte";
        throw ParseError(line_no, col, "unexpected character '" + shown + "'");
      }
    }
    out.push_back({kind, std::string(1, static_cast<char>(c)), col});
    ++i;
  }
  out.push_back({Tok::End, "", static_cast<int>(line.size()) + 1});
  return out;
}

struct Position {
  int line;
  int column;
};

// How a symbol reference was written.
enum class RefStyle { Bare, TimeDependent, Initial };

struct SymbolUse {
  std::string name;
  RefStyle style;
  Position where;
};

/// Recursive-descent expression parser over one line's tokens.
///   expr  := term { ('+'|'-') term }
///   term  := unary { ('*'|'/') unary }
///   unary := ('+'|'-') unary | power
///   power := primary [ '^' integer ]
class ExprParser {
 public:
  ExprParser(const std::vector<Token>& toks, std::size_t pos, int line_no, std::vector<SymbolUse>& uses,
             bool allow_initial)
      : toks_(toks), pos_(pos), line_(line_no), uses_(uses), allow_initial_(allow_initial) {}

  Expr parse_expr() {
    Expr lhs = parse_term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const bool add = next().kind == Tok::Plus;
      Expr rhs = parse_term();
      lhs = add ? lhs + rhs : lhs - rhs;
    }
    return lhs;
  }

  std::size_t position() const { return pos_; }
  const Token& peek() const { return toks_[pos_]; }

 private:
  const Token& next() { return toks_[pos_++]; }

  [[noreturn]] void fail(const Token& t, const std::string& msg) const { throw ParseError(line_, t.column, msg); }

  Expr parse_term() {
    Expr lhs = parse_unary();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      const Token op = next();
      Expr rhs = parse_unary();
      if (op.kind == Tok::Star) {
        lhs = lhs * rhs;
        continue;
      }
      if (is_identically_zero(rhs)) fail(op, "division by the zero polynomial");
      if (lhs.is_constant() && rhs.is_constant())
        lhs = Expr::constant(lhs.value() / rhs.value());
      else
        lhs = lhs / rhs;
    }
    return lhs;
  }

  Expr parse_unary() {
    if (peek().kind == Tok::Minus) {
      next();
      return -parse_unary();
    }
    if (peek().kind == Tok::Plus) {
      next();
      return parse_unary();
    }
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (peek().kind != Tok::Caret) return base;
    next();
    bool paren = false;
    if (peek().kind == Tok::LParen) {
      paren = true;
      next();
    }
    const Token& t = peek();
    if (t.kind == Tok::Minus) fail(t, "negative exponent; exponents must be non-negative integer literals");
    if (t.kind != Tok::Number) fail(t, "exponent must be a non-negative integer literal");
    const bool integral = std::all_of(t.text.begin(), t.text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
    if (!integral) fail(t, "non-integer exponent '" + t.text + "'");
    if (t.text.size() > 4) fail(t, "exponent too large");
    next();
    if (paren) {
      if (peek().kind != Tok::RParen) fail(peek(), "expected ')' after exponent");
      next();
    }
    if (peek().kind == Tok::Caret) fail(peek(), "chained '^' is ambiguous; parenthesize the base");
    return Expr::power(std::move(base), static_cast<unsigned>(std::stoul(t.text)));
  }

  Expr parse_primary() {
    const Token t = peek();
    switch (t.kind) {
      case Tok::Number: {
        next();
        Rational v;
        if (!parse_decimal(t.text, v)) fail(t, "malformed number '" + t.text + "'");
        return Expr::constant(v);
      }
      case Tok::LParen: {
        next();
        Expr inner = parse_expr();
        if (peek().kind != Tok::RParen) fail(peek(), "expected ')'");
        next();
        return inner;
      }
      case Tok::Ident: {
        next();
        if (peek().kind == Tok::LParen && pos_ + 2 < toks_.size() && toks_[pos_ + 2].kind == Tok::RParen) {
          const Token& arg = toks_[pos_ + 1];
          if (arg.kind == Tok::Ident && arg.text == "t") {
            pos_ += 3;
            uses_.push_back({t.text, RefStyle::TimeDependent, {line_, t.column}});
            return Expr::symbol(t.text, SymbolKind::State);
          }
          if (arg.kind == Tok::Number && arg.text == "0" && allow_initial_) {
            pos_ += 3;
            uses_.push_back({t.text, RefStyle::Initial, {line_, t.column}});
            return Expr::symbol(t.text, SymbolKind::State);
          }
        }
        if (peek().kind == Tok::LParen) fail(peek(), "only '(t)' may follow a symbol name");
        if (t.text == "t") fail(t, "explicit time dependence is not supported");
        uses_.push_back({t.text, RefStyle::Bare, {line_, t.column}});
        return Expr::symbol(t.text, SymbolKind::Parameter);
      }
      case Tok::End:
        fail(t, "unexpected end of line");
      default:
        fail(t, "unexpected '" + t.text + "'");
    }
  }

  const std::vector<Token>& toks_;
  std::size_t pos_;
  int line_;
  std::vector<SymbolUse>& uses_;
  bool allow_initial_;
};

std::string_view strip_comment(std::string_view line) {
  auto hash = line.find('#');
  if (hash != std::string_view::npos) line = line.substr(0, hash);
  return line;
}

struct Equation {
  std::string lhs;
  Position where;
  Expr rhs;
};

bool is_ident(const Token& t, std::string_view text) { return t.kind == Tok::Ident && t.text == text; }

}  // namespace

ModelIR parse_model(std::string_view text, const ParseOptions& options) {
  std::vector<Equation> state_eqs;
  std::vector<Equation> output_eqs;
  std::vector<std::pair<Position, std::string>> declared_params;
  std::vector<std::pair<Position, std::string>> declared_inputs;
  std::vector<std::tuple<Position, std::string, Rational>> ics;
  std::vector<SymbolUse> uses;

  enum class Section { Equations, InitialConditions } section = Section::Equations;

  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    auto toks = lex(strip_comment(raw), line_no);
    if (toks.front().kind == Tok::End) {
      if (end == text.size()) break;
      continue;
    }

    // Section headers and declarations: `ic:`, `equations:`, `params: a, b`.
    if (toks.size() >= 3 && toks[0].kind == Tok::Ident && toks[1].kind == Tok::Colon) {
      const std::string& head = toks[0].text;
      if (head == "ic" || head == "equations") {
        if (toks[2].kind != Tok::End) throw ParseError(line_no, toks[2].column, "unexpected text after section header");
        section = head == "ic" ? Section::InitialConditions : Section::Equations;
        continue;
      }
      if (head == "params" || head == "inputs") {
        auto& target = head == "params" ? declared_params : declared_inputs;
        std::size_t i = 2;
        while (toks[i].kind != Tok::End) {
          if (toks[i].kind != Tok::Ident) throw ParseError(line_no, toks[i].column, "expected a symbol name in declaration");
          if (toks[i].text == "t") throw ParseError(line_no, toks[i].column, "'t' is reserved for time");
          target.push_back({{line_no, toks[i].column}, toks[i].text});
          ++i;
          if (toks[i].kind == Tok::Comma) {
            ++i;
            if (toks[i].kind == Tok::End) throw ParseError(line_no, toks[i].column, "trailing ',' in declaration");
          } else if (toks[i].kind != Tok::End) {
            throw ParseError(line_no, toks[i].column, "expected ',' between declared names");
          }
        }
        continue;
      }
      throw ParseError(line_no, toks[0].column, "unknown section '" + head + "'");
    }

    if (toks[0].kind != Tok::Ident) throw ParseError(line_no, toks[0].column, "expected an equation");
    const Token& name = toks[0];
    std::size_t i = 1;
    const bool differentiated = toks[i].kind == Tok::Prime;
    if (differentiated) ++i;
    if (toks[i].kind != Tok::LParen) throw ParseError(line_no, toks[i].column, "expected '(' after '" + name.text + "'");
    ++i;
    const Token& arg = toks[i];
    const bool is_initial = arg.kind == Tok::Number && arg.text == "0";
    if (!is_initial && !is_ident(arg, "t")) throw ParseError(line_no, arg.column, "expected '(t)' or '(0)'");
    ++i;
    if (toks[i].kind != Tok::RParen) throw ParseError(line_no, toks[i].column, "expected ')'");
    ++i;
    if (toks[i].kind != Tok::Equals) throw ParseError(line_no, toks[i].column, "expected '='");
    ++i;

    if (is_initial) {
      if (differentiated) throw ParseError(line_no, toks[1].column, "initial conditions are not differentiated");
      if (section != Section::InitialConditions)
        throw ParseError(line_no, name.column, "initial condition outside the 'ic:' section");
      std::vector<SymbolUse> ic_uses;
      ExprParser p(toks, i, line_no, ic_uses, false);
      Expr value = p.parse_expr();
      if (p.peek().kind != Tok::End) throw ParseError(line_no, p.peek().column, "unexpected '" + p.peek().text + "'");
      if (!ic_uses.empty()) throw ParseError(line_no, ic_uses.front().where.column, "initial condition must be a numeric constant");
      ics.emplace_back(Position{line_no, name.column}, name.text, evaluate_constant(value));
      continue;
    }
    if (section == Section::InitialConditions)
      throw ParseError(line_no, name.column, "equation inside the 'ic:' section");
    if (name.text == "t") throw ParseError(line_no, name.column, "'t' is reserved for time");

    ExprParser p(toks, i, line_no, uses, false);
    Expr rhs = p.parse_expr();
    if (p.peek().kind != Tok::End) {
      const Token& extra = p.peek();
      throw ParseError(line_no, extra.column,
                       extra.kind == Tok::Ident || extra.kind == Tok::Number || extra.kind == Tok::LParen
                           ? "expected an operator (implicit multiplication is not supported)"
                           : "unexpected '" + extra.text + "'");
    }
    (differentiated ? state_eqs : output_eqs).push_back({name.text, {line_no, name.column}, std::move(rhs)});
  }

  ModelIR m;
  std::set<std::string> state_set;
  for (auto& eq : state_eqs) {
    if (!state_set.insert(eq.lhs).second)
      throw ParseError(eq.where.line, eq.where.column, "duplicate equation for state '" + eq.lhs + "'");
    m.states.push_back(eq.lhs);
  }
  std::set<std::string> output_set;
  for (auto& eq : output_eqs) {
    if (state_set.count(eq.lhs))
      throw ParseError(eq.where.line, eq.where.column, "output '" + eq.lhs + "' collides with a state");
    if (!output_set.insert(eq.lhs).second)
      throw ParseError(eq.where.line, eq.where.column, "duplicate output '" + eq.lhs + "'");
  }
  if (m.states.empty()) throw ParseError(line_no, 1, "model declares no state equations");
  if (output_eqs.empty()) throw ParseError(line_no, 1, "model declares no outputs");

  std::set<std::string> param_set;
  std::set<std::string> input_set;
  auto declare = [&](const std::vector<std::pair<Position, std::string>>& decls, std::set<std::string>& set,
                     std::vector<std::string>& order, const char* what) {
    for (auto& [pos, name] : decls) {
      if (state_set.count(name) || output_set.count(name))
        throw ParseError(pos.line, pos.column, std::string(what) + " '" + name + "' collides with a state or output");
      if (param_set.count(name) || input_set.count(name))
        throw ParseError(pos.line, pos.column, "'" + name + "' declared twice");
      set.insert(name);
      order.push_back(name);
    }
  };
  declare(declared_params, param_set, m.params, "parameter");
  declare(declared_inputs, input_set, m.inputs, "input");

  // Classify references in source order.
  for (const auto& use : uses) {
    const auto& n = use.name;
    if (output_set.count(n))
      throw ParseError(use.where.line, use.where.column, "output '" + n + "' cannot appear in an expression");
    if (use.style == RefStyle::TimeDependent) {
      if (state_set.count(n)) continue;
      if (param_set.count(n))
        throw ParseError(use.where.line, use.where.column, "parameter '" + n + "' written as time-dependent");
      if (!input_set.count(n)) {
        if (options.strict)
          throw ParseError(use.where.line, use.where.column,
                           "unknown symbol '" + n + "(t)': not a state and not a declared input");
        input_set.insert(n);
        m.inputs.push_back(n);
      }
    } else {
      if (state_set.count(n))
        throw ParseError(use.where.line, use.where.column, "state '" + n + "' used without '(t)'");
      if (input_set.count(n))
        throw ParseError(use.where.line, use.where.column, "input '" + n + "' used without '(t)'");
      if (!param_set.count(n)) {
        if (options.strict)
          throw ParseError(use.where.line, use.where.column, "unknown symbol '" + n + "': not a declared parameter");
        param_set.insert(n);
        m.params.push_back(n);
      }
    }
  }

  auto resolve = [&](const Expr& e) {
    return substitute(e, [&](const std::string& name, SymbolKind kind) -> std::optional<Expr> {
      if (kind == SymbolKind::State && input_set.count(name)) return Expr::symbol(name, SymbolKind::Input);
      return std::nullopt;
    });
  };
  for (auto& eq : state_eqs) m.state_rhs.push_back(resolve(eq.rhs));
  for (auto& eq : output_eqs) m.outputs.emplace_back(eq.lhs, resolve(eq.rhs));

  for (auto& [pos, name, value] : ics) {
    if (!state_set.count(name))
      throw ParseError(pos.line, pos.column, "initial condition for '" + name + "', which is not a state");
    if (!m.known_ics.emplace(name, value).second)
      throw ParseError(pos.line, pos.column, "duplicate initial condition for '" + name + "'");
  }
  return m;
}

Expr parse_function(std::string_view text, const ModelIR& model) {
  if (text.find('\n') != std::string_view::npos) throw ParseError(1, 1, "function must be a single line");
  auto toks = lex(text, 1);
  std::vector<SymbolUse> uses;
  ExprParser p(toks, 0, 1, uses, true);
  Expr e = p.parse_expr();
  if (p.peek().kind != Tok::End) throw ParseError(1, p.peek().column, "unexpected '" + p.peek().text + "'");
  for (const auto& use : uses) {
    const bool is_param = std::find(model.params.begin(), model.params.end(), use.name) != model.params.end();
    const bool is_state = model.state_index(use.name).has_value();
    if (use.style == RefStyle::Bare && is_param) continue;
    if ((use.style == RefStyle::Initial || use.style == RefStyle::Bare) && is_state) continue;
    throw ParseError(1, use.where.column, "'" + use.name + "' is not a parameter or initial state of the model");
  }
  // Bare state names denote the initial value, like `x(0)`.
  return substitute(e, [&](const std::string& name, SymbolKind) -> std::optional<Expr> {
    if (model.state_index(name)) return Expr::symbol(name, SymbolKind::State);
    return std::nullopt;
  });
}

std::vector<Expr> parse_function_list(std::string_view text, const ModelIR& model) {
  std::vector<Expr> out;
  int depth = 0;
  std::size_t begin = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i < text.size() && text[i] == '(') ++depth;
    if (i < text.size() && text[i] == ')') --depth;
    if (i == text.size() || (text[i] == ',' && depth == 0)) {
      std::string_view piece = text.substr(begin, i - begin);
      try {
        out.push_back(parse_function(piece, model));
      } catch (const ParseError& e) {
        throw ParseError(1, static_cast<int>(begin) + e.column(), e.message());
      }
      begin = i + 1;
    }
  }
  return out;
}

std::string canonical_text(const ModelIR& model) {
  std::ostringstream out;
  auto join = [&](const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i) out << (i ? ", " : "") << names[i];
  };
  if (!model.params.empty()) {
    out << "params: ";
    join(model.params);
    out << '\n';
  }
  if (!model.inputs.empty()) {
    out << "inputs: ";
    join(model.inputs);
    out << '\n';
  }
  for (std::size_t i = 0; i < model.states.size(); ++i)
    out << model.states[i] << "'(t) = " << model.state_rhs[i].to_string() << '\n';
  for (const auto& [name, e] : model.outputs) out << name << "(t) = " << e.to_string() << '\n';
  if (!model.known_ics.empty()) {
    out << "ic:\n";
    // States order, not map order, so the text reads like the equations.
    for (const auto& s : model.states) {
      auto it = model.known_ics.find(s);
      if (it == model.known_ics.end()) continue;
      const Rational& v = it->second;
      out << s << "(0) = " << (v < 0 ? "-" : "") << to_string(v < 0 ? Rational(-v) : v) << '\n';
    }
  }
  return out.str();
}

ModelIR fix_inputs(const ModelIR& model, const Rational& value) {
  ModelIR out = model;
  auto replace = [&](const std::string&, SymbolKind kind) -> std::optional<Expr> {
    if (kind == SymbolKind::Input) return Expr::constant(value);
    return std::nullopt;
  };
  for (auto& e : out.state_rhs) e = substitute(e, replace);
  for (auto& [name, e] : out.outputs) e = substitute(e, replace);
  out.inputs.clear();
  return out;
}

}  // namespace structid
