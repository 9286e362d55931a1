#pragma once

#include "structid/modint.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace structid {

/// Exponent vector with cached total degree.
class Monomial {
 public:
  using Exponent = std::uint16_t;

  Monomial() = default;
  explicit Monomial(std::size_t nvars) : e_(nvars, 0) {}
  explicit Monomial(std::vector<Exponent> e) : e_(std::move(e)) {
    for (auto x : e_) degree_ += x;
  }

  static Monomial variable(std::size_t nvars, std::size_t var, unsigned power = 1) {
    Monomial m(nvars);
    m.e_[var] = static_cast<Exponent>(power);
    m.degree_ = power;
    return m;
  }

  std::size_t size() const { return e_.size(); }
  Exponent operator[](std::size_t i) const { return e_[i]; }
  unsigned degree() const { return degree_; }
  std::span<const Exponent> exponents() const { return e_; }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial r(a.e_.size());
    for (std::size_t i = 0; i < a.e_.size(); ++i) {
      const unsigned s = unsigned{a.e_[i]} + b.e_[i];
      if (s > 0xFFFF) throw std::overflow_error("monomial exponent overflow");
      r.e_[i] = static_cast<Exponent>(s);
    }
    r.degree_ = a.degree_ + b.degree_;
    return r;
  }

  /// a / b; requires b | a.
  friend Monomial operator/(const Monomial& a, const Monomial& b) {
    Monomial r(a.e_.size());
    for (std::size_t i = 0; i < a.e_.size(); ++i) r.e_[i] = static_cast<Exponent>(a.e_[i] - b.e_[i]);
    r.degree_ = a.degree_ - b.degree_;
    return r;
  }

  bool divides(const Monomial& other) const {
    if (degree_ > other.degree_) return false;
    for (std::size_t i = 0; i < e_.size(); ++i)
      if (e_[i] > other.e_[i]) return false;
    return true;
  }

  static Monomial lcm(const Monomial& a, const Monomial& b) {
    Monomial r(a.e_.size());
    for (std::size_t i = 0; i < a.e_.size(); ++i) {
      r.e_[i] = std::max(a.e_[i], b.e_[i]);
      r.degree_ += r.e_[i];
    }
    return r;
  }

  bool coprime(const Monomial& other) const {
    for (std::size_t i = 0; i < e_.size(); ++i)
      if (e_[i] && other.e_[i]) return false;
    return true;
  }

  /// Index of the single variable if this is a pure power x_i^k (k >= 1).
  std::optional<std::size_t> pure_power_of() const {
    std::optional<std::size_t> var;
    for (std::size_t i = 0; i < e_.size(); ++i) {
      if (!e_[i]) continue;
      if (var) return std::nullopt;
      var = i;
    }
    return var;
  }

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.e_ == b.e_; }
  friend bool operator!=(const Monomial& a, const Monomial& b) { return a.e_ != b.e_; }

  /// Graded reverse lexicographic comparison: >0 if a > b.
  friend int compare(const Monomial& a, const Monomial& b) {
    if (a.degree_ != b.degree_) return a.degree_ > b.degree_ ? 1 : -1;
    for (std::size_t i = a.e_.size(); i-- > 0;)
      if (a.e_[i] != b.e_[i]) return a.e_[i] < b.e_[i] ? 1 : -1;
    return 0;
  }

  std::size_t hash() const {
    std::size_t h = degree_;
    for (auto x : e_) h = h * 1000003u ^ x;
    return h;
  }

 private:
  std::vector<Exponent> e_;
  unsigned degree_ = 0;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

/// Sparse multivariate polynomial over a field C, terms kept sorted by
/// decreasing degrevlex order with no zero coefficients.
template <class C>
class SparsePoly {
 public:
  struct Term {
    Monomial mono;
    C coeff;
  };

  SparsePoly() = default;
  explicit SparsePoly(std::size_t nvars) : nvars_(nvars) {}

  static SparsePoly constant(std::size_t nvars, const C& c) {
    SparsePoly p(nvars);
    if (c != C(0)) p.terms_.push_back({Monomial(nvars), c});
    return p;
  }
  static SparsePoly variable(std::size_t nvars, std::size_t var) {
    SparsePoly p(nvars);
    p.terms_.push_back({Monomial::variable(nvars, var), C(1)});
    return p;
  }
  static SparsePoly term(const Monomial& m, const C& c) {
    SparsePoly p(m.size());
    if (c != C(0)) p.terms_.push_back({m, c});
    return p;
  }
  /// Builds from arbitrary (possibly repeated, unsorted) terms.
  static SparsePoly from_terms(std::size_t nvars, std::vector<Term> terms) {
    SparsePoly p(nvars);
    p.terms_ = std::move(terms);
    p.canonicalize();
    return p;
  }

  std::size_t nvars() const { return nvars_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.degree() == 0); }
  C constant_value() const { return is_zero() ? C(0) : terms_.back().mono.degree() == 0 ? terms_.back().coeff : C(0); }
  const std::vector<Term>& terms() const { return terms_; }

  const Monomial& leading_monomial() const { return terms_.front().mono; }
  const C& leading_coeff() const { return terms_.front().coeff; }
  unsigned total_degree() const {
    unsigned d = 0;
    for (const auto& t : terms_) d = std::max(d, t.mono.degree());
    return d;
  }

  SparsePoly monic() const {
    if (is_zero()) return *this;
    const C inv = C(1) / leading_coeff();
    return scaled(inv);
  }

  SparsePoly scaled(const C& c) const {
    if (c == C(0)) return SparsePoly(nvars_);
    SparsePoly r = *this;
    for (auto& t : r.terms_) t.coeff = t.coeff * c;
    return r;
  }

  /// c * m * this
  SparsePoly times_term(const C& c, const Monomial& m) const {
    SparsePoly r(nvars_);
    if (c == C(0)) return r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back({t.mono * m, t.coeff * c});
    return r;
  }

  /// this - c * m * g, by a single merge pass.
  SparsePoly minus_term_times(const C& c, const Monomial& m, const SparsePoly& g) const {
    SparsePoly r(nvars_);
    r.terms_.reserve(terms_.size() + g.terms_.size());
    std::size_t i = 0, j = 0;
    Monomial shifted;
    bool have = false;
    while (i < terms_.size() || j < g.terms_.size()) {
      if (j < g.terms_.size() && !have) {
        shifted = g.terms_[j].mono * m;
        have = true;
      }
      int cmp;
      if (i == terms_.size()) cmp = -1;
      else if (j == g.terms_.size()) cmp = 1;
      else cmp = compare(terms_[i].mono, shifted);
      if (cmp > 0) {
        r.terms_.push_back(terms_[i++]);
      } else if (cmp < 0) {
        r.terms_.push_back({shifted, -(c * g.terms_[j].coeff)});
        ++j;
        have = false;
      } else {
        C v = terms_[i].coeff - c * g.terms_[j].coeff;
        if (v != C(0)) r.terms_.push_back({terms_[i].mono, v});
        ++i;
        ++j;
        have = false;
      }
    }
    return r;
  }

  SparsePoly derivative(std::size_t var) const {
    std::vector<Term> out;
    for (const auto& t : terms_) {
      const auto e = t.mono[var];
      if (!e) continue;
      std::vector<Monomial::Exponent> ex(t.mono.exponents().begin(), t.mono.exponents().end());
      ex[var] = static_cast<Monomial::Exponent>(e - 1);
      out.push_back({Monomial(std::move(ex)), t.coeff * C(e)});
    }
    return from_terms(nvars_, std::move(out));
  }

  C evaluate(std::span<const C> point) const {
    C acc(0);
    for (const auto& t : terms_) {
      C v = t.coeff;
      for (std::size_t i = 0; i < nvars_; ++i)
        for (unsigned k = 0; k < t.mono[i]; ++k) v = v * point[i];
      acc = acc + v;
    }
    return acc;
  }

  SparsePoly pow(unsigned e) const {
    SparsePoly acc = constant(nvars_, C(1));
    SparsePoly base = *this;
    while (e) {
      if (e & 1) acc = acc * base;
      e >>= 1;
      if (e) base = base * base;
    }
    return acc;
  }

  friend SparsePoly operator+(const SparsePoly& a, const SparsePoly& b) { return a.combine(b, false); }
  friend SparsePoly operator-(const SparsePoly& a, const SparsePoly& b) { return a.combine(b, true); }
  friend SparsePoly operator-(const SparsePoly& a) { return a.scaled(C(0) - C(1)); }

  friend SparsePoly operator*(const SparsePoly& a, const SparsePoly& b) {
    if (a.is_zero() || b.is_zero()) return SparsePoly(std::max(a.nvars_, b.nvars_));
    const SparsePoly& small = a.size() <= b.size() ? a : b;
    const SparsePoly& large = a.size() <= b.size() ? b : a;
    std::vector<Term> acc;
    acc.reserve(small.size() * large.size());
    for (const auto& s : small.terms_)
      for (const auto& l : large.terms_) acc.push_back({s.mono * l.mono, s.coeff * l.coeff});
    return from_terms(a.nvars_, std::move(acc));
  }

  friend bool operator==(const SparsePoly& a, const SparsePoly& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (a.terms_[i].mono != b.terms_[i].mono || a.terms_[i].coeff != b.terms_[i].coeff) return false;
    return true;
  }
  friend bool operator!=(const SparsePoly& a, const SparsePoly& b) { return !(a == b); }

  /// Human-readable rendering with the given variable names.
  std::string to_string(const std::vector<std::string>& names) const;

 private:
  SparsePoly combine(const SparsePoly& b, bool subtract) const {
    SparsePoly r(std::max(nvars_, b.nvars_));
    r.terms_.reserve(terms_.size() + b.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < terms_.size() || j < b.terms_.size()) {
      int cmp;
      if (i == terms_.size()) cmp = -1;
      else if (j == b.terms_.size()) cmp = 1;
      else cmp = compare(terms_[i].mono, b.terms_[j].mono);
      if (cmp > 0) {
        r.terms_.push_back(terms_[i++]);
      } else if (cmp < 0) {
        r.terms_.push_back({b.terms_[j].mono, subtract ? -b.terms_[j].coeff : b.terms_[j].coeff});
        ++j;
      } else {
        C v = subtract ? terms_[i].coeff - b.terms_[j].coeff : terms_[i].coeff + b.terms_[j].coeff;
        if (v != C(0)) r.terms_.push_back({terms_[i].mono, v});
        ++i;
        ++j;
      }
    }
    return r;
  }

  void canonicalize() {
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return compare(a.mono, b.mono) > 0; });
    std::vector<Term> merged;
    merged.reserve(terms_.size());
    for (auto& t : terms_) {
      if (!merged.empty() && merged.back().mono == t.mono)
        merged.back().coeff = merged.back().coeff + t.coeff;
      else
        merged.push_back(std::move(t));
    }
    std::erase_if(merged, [](const Term& t) { return t.coeff == C(0); });
    terms_ = std::move(merged);
  }

  std::size_t nvars_ = 0;
  std::vector<Term> terms_;
};

/// Quotient of two polynomials; the denominator is never zero and is kept
/// monic. No gcd cancellation is attempted beyond folding constant
/// denominators into the numerator.
template <class C>
class RationalFunction {
 public:
  using Poly = SparsePoly<C>;

  RationalFunction() = default;
  explicit RationalFunction(Poly num) : num_(std::move(num)), den_(Poly::constant(num_.nvars(), C(1))) {}
  RationalFunction(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw ZeroDivisor("rational function with zero denominator");
    normalize();
  }

  static RationalFunction constant(std::size_t nvars, const C& c) { return RationalFunction(Poly::constant(nvars, c)); }

  const Poly& numerator() const { return num_; }
  const Poly& denominator() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }

  C evaluate(std::span<const C> point) const {
    const C d = den_.evaluate(point);
    if (d == C(0)) throw ZeroDivisor("denominator vanishes at the evaluation point");
    return num_.evaluate(point) / d;
  }

  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    if (a.den_ == b.den_) return RationalFunction(a.num_ + b.num_, a.den_);
    return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
    if (a.den_ == b.den_) return RationalFunction(a.num_ - b.num_, a.den_);
    return RationalFunction(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RationalFunction operator-(const RationalFunction& a) { return RationalFunction(-a.num_, a.den_); }
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    if (b.is_zero()) throw ZeroDivisor("division by the zero rational function");
    return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
  }
  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ * b.den_ == b.num_ * a.den_;
  }
  friend bool operator!=(const RationalFunction& a, const RationalFunction& b) { return !(a == b); }

 private:
  void normalize() {
    if (num_.is_zero()) {
      den_ = Poly::constant(num_.nvars(), C(1));
      return;
    }
    if (den_.is_constant()) {
      num_ = num_.scaled(C(1) / den_.constant_value());
      den_ = Poly::constant(num_.nvars(), C(1));
      return;
    }
    const C lc = den_.leading_coeff();
    if (lc != C(1)) {
      const C inv = C(1) / lc;
      num_ = num_.scaled(inv);
      den_ = den_.scaled(inv);
    }
  }

  Poly num_;
  Poly den_;
};

template <class C>
std::string SparsePoly<C>::to_string(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::string out;
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    const auto& t = terms_[k];
    std::string c;
    if constexpr (requires { t.coeff.value(); }) {
      c = std::to_string(t.coeff.value());
    } else {
      c = structid::to_string(t.coeff);
    }
    if (k) out += " + ";
    const bool unit = c == "1" && t.mono.degree() > 0;
    if (!unit) out += c;
    bool first = unit;
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (!t.mono[i]) continue;
      if (!first) out += '*';
      first = false;
      out += i < names.size() ? names[i] : "v" + std::to_string(i);
      if (t.mono[i] > 1) out += "^" + std::to_string(t.mono[i]);
    }
  }
  return out;
}

}  // namespace structid
