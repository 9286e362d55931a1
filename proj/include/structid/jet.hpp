#pragma once

#include "structid/modint.hpp"

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace structid {

/// First-order jet: a value and its gradient with respect to L unknowns.
/// An empty gradient stands for the zero vector, so constants cost nothing.
template <class F>
struct JetScalar {
  F val{};
  std::vector<F> grad;

  JetScalar() = default;
  explicit JetScalar(F v) : val(v) {}
  JetScalar(F v, std::vector<F> g) : val(v), grad(std::move(g)) {}

  /// The i-th coordinate function evaluated at `v`.
  static JetScalar seed(F v, std::size_t i, std::size_t L) {
    JetScalar j(v, std::vector<F>(L, F(0)));
    j.grad[i] = F(1);
    return j;
  }

  F partial(std::size_t i) const { return i < grad.size() ? grad[i] : F(0); }

  friend JetScalar operator+(const JetScalar& a, const JetScalar& b) {
    return {a.val + b.val, combine(a.grad, F(1), b.grad, F(1))};
  }
  friend JetScalar operator-(const JetScalar& a, const JetScalar& b) {
    return {a.val - b.val, combine(a.grad, F(1), b.grad, F(0) - F(1))};
  }
  friend JetScalar operator-(const JetScalar& a) {
    JetScalar r(F(0) - a.val, a.grad);
    for (auto& g : r.grad) g = F(0) - g;
    return r;
  }
  // (ab)' = a'b + ab'
  friend JetScalar operator*(const JetScalar& a, const JetScalar& b) {
    return {a.val * b.val, combine(a.grad, b.val, b.grad, a.val)};
  }
  // (a/b)' = (a'b - ab') / b^2
  friend JetScalar operator/(const JetScalar& a, const JetScalar& b) {
    if (b.val == F(0)) throw ZeroDivisor("jet division by a zero value");
    const F inv = F(1) / b.val;
    const F q = a.val * inv;
    return {q, combine(a.grad, inv, b.grad, F(0) - q * inv)};
  }
  friend bool operator==(const JetScalar& a, const JetScalar& b) {
    if (a.val != b.val) return false;
    const std::size_t n = std::max(a.grad.size(), b.grad.size());
    for (std::size_t i = 0; i < n; ++i)
      if (a.partial(i) != b.partial(i)) return false;
    return true;
  }

 private:
  // x*ga + y*gb with empty vectors treated as zero.
  static std::vector<F> combine(const std::vector<F>& ga, F x, const std::vector<F>& gb, F y) {
    if (ga.empty() && gb.empty()) return {};
    const std::size_t n = std::max(ga.size(), gb.size());
    std::vector<F> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      F v(0);
      if (i < ga.size()) v = ga[i] * x;
      if (i < gb.size()) v = v + gb[i] * y;
      out[i] = v;
    }
    return out;
  }
};

/// Truncated power series c_0 + c_1 t + ... + c_{order-1} t^{order-1} over a
/// ring T. Binary operations truncate to the smaller order.
template <class T>
class Series {
 public:
  Series() = default;
  explicit Series(std::vector<T> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) throw std::invalid_argument("series needs order >= 1");
  }

  /// c + 0 t + ... with `order` coefficients.
  static Series constant(const T& c, std::size_t order) {
    std::vector<T> v(order, c - c);
    v[0] = c;
    return Series(std::move(v));
  }

  std::size_t order() const { return c_.size(); }
  const T& operator[](std::size_t k) const { return c_[k]; }
  T& operator[](std::size_t k) { return c_[k]; }
  const std::vector<T>& coefficients() const { return c_; }

  Series truncated(std::size_t order) const {
    return Series(std::vector<T>(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(std::min(order, c_.size()))));
  }

  friend Series operator+(const Series& a, const Series& b) {
    const std::size_t n = std::min(a.order(), b.order());
    std::vector<T> v;
    v.reserve(n);
    for (std::size_t k = 0; k < n; ++k) v.push_back(a.c_[k] + b.c_[k]);
    return Series(std::move(v));
  }
  friend Series operator-(const Series& a, const Series& b) {
    const std::size_t n = std::min(a.order(), b.order());
    std::vector<T> v;
    v.reserve(n);
    for (std::size_t k = 0; k < n; ++k) v.push_back(a.c_[k] - b.c_[k]);
    return Series(std::move(v));
  }
  friend Series operator-(const Series& a) {
    std::vector<T> v;
    v.reserve(a.order());
    for (const auto& x : a.c_) v.push_back(-x);
    return Series(std::move(v));
  }
  /// Cauchy product.
  friend Series operator*(const Series& a, const Series& b) {
    const std::size_t n = std::min(a.order(), b.order());
    std::vector<T> v;
    v.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
      T acc = a.c_[0] * b.c_[k];
      for (std::size_t i = 1; i <= k; ++i) acc = acc + a.c_[i] * b.c_[k - i];
      v.push_back(std::move(acc));
    }
    return Series(std::move(v));
  }
  /// q with q*b = a: q_k = (a_k - sum_{i<k} q_i b_{k-i}) / b_0.
  /// Throws ZeroDivisor when b_0 is not invertible.
  friend Series operator/(const Series& a, const Series& b) {
    const std::size_t n = std::min(a.order(), b.order());
    std::vector<T> q;
    q.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
      T acc = a.c_[k];
      for (std::size_t i = 0; i < k; ++i) acc = acc - q[i] * b.c_[k - i];
      q.push_back(acc / b.c_[0]);
    }
    return Series(std::move(q));
  }
  friend bool operator==(const Series& a, const Series& b) { return a.c_ == b.c_; }

 private:
  std::vector<T> c_;
};

using JetSeries = Series<JetScalar<Fp>>;

}  // namespace structid
