#pragma once

#include "structid/linalg.hpp"
#include "structid/poly.hpp"

#include <chrono>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace structid {

/// Thrown when a Groebner computation exceeds its monomial budget or
/// deadline. Callers turn it into an Undetermined verdict.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, bool timed_out) : std::runtime_error(what), timed_out_(timed_out) {}
  bool timed_out() const { return timed_out_; }

 private:
  bool timed_out_;
};

struct GroebnerBudget {
  std::size_t max_monomials = 200000;
  std::chrono::steady_clock::time_point deadline = std::chrono::steady_clock::time_point::max();

  void check_time() const {
    if (std::chrono::steady_clock::now() >= deadline) throw BudgetExceeded("wall-clock budget exhausted", true);
  }
};

/// Reduced Groebner basis under degrevlex (x_0 > x_1 > ...), monic, sorted
/// by increasing leading monomial.
template <class F>
class GroebnerBasis {
 public:
  using Poly = SparsePoly<F>;

  GroebnerBasis() = default;
  GroebnerBasis(std::size_t nvars, std::vector<Poly> polys) : nvars_(nvars), polys_(std::move(polys)) {}

  std::size_t nvars() const { return nvars_; }
  const std::vector<Poly>& polys() const { return polys_; }
  std::size_t size() const { return polys_.size(); }
  bool is_unit() const { return polys_.size() == 1 && polys_[0].is_constant() && !polys_[0].is_zero(); }

  /// Leading monomials; their multiples are exactly the non-standard monomials.
  std::vector<Monomial> staircase() const {
    std::vector<Monomial> out;
    for (const auto& p : polys_) out.push_back(p.leading_monomial());
    return out;
  }

  /// Fully reduced remainder of f modulo the basis.
  Poly normal_form(const Poly& f) const { return reduce(f, polys_, nullptr); }

  /// Full reduction of f by `divisors` (leading monomials only are matched).
  static Poly reduce(Poly f, const std::vector<Poly>& divisors, const GroebnerBudget* budget,
                     const std::vector<bool>* active = nullptr) {
    const std::size_t n = f.nvars();
    std::vector<typename Poly::Term> rem;
    std::size_t steps = 0;
    while (!f.is_zero()) {
      const auto& lt = f.terms().front();
      const Poly* div = nullptr;
      for (std::size_t i = 0; i < divisors.size(); ++i) {
        if (active && !(*active)[i]) continue;
        if (divisors[i].leading_monomial().divides(lt.mono)) {
          div = &divisors[i];
          break;
        }
      }
      if (!div) {
        rem.push_back(lt);
        f = f.minus_term_times(lt.coeff, lt.mono, Poly::constant(n, F(1)));
        continue;
      }
      const F c = lt.coeff / div->leading_coeff();
      f = f.minus_term_times(c, lt.mono / div->leading_monomial(), *div);
      if (budget && (++steps & 63) == 0) {
        budget->check_time();
        if (f.size() > budget->max_monomials)
          throw BudgetExceeded("intermediate polynomial exceeded the monomial budget", false);
      }
    }
    return Poly::from_terms(n, std::move(rem));
  }

 private:
  std::size_t nvars_ = 0;
  std::vector<Poly> polys_;
};

template <class F>
SparsePoly<F> s_polynomial(const SparsePoly<F>& f, const SparsePoly<F>& g) {
  const Monomial l = Monomial::lcm(f.leading_monomial(), g.leading_monomial());
  const SparsePoly<F> a = f.times_term(F(1) / f.leading_coeff(), l / f.leading_monomial());
  return a.minus_term_times(F(1) / g.leading_coeff(), l / g.leading_monomial(), g);
}

/// Buchberger's algorithm with the Gebauer-Moeller installation of the
/// product and chain criteria and the normal selection strategy (smallest
/// lcm first). Deterministic for a given generator order.
template <class F>
GroebnerBasis<F> buchberger(std::vector<SparsePoly<F>> generators, std::size_t nvars,
                            const GroebnerBudget& budget = {}) {
  using Poly = SparsePoly<F>;
  struct Pair {
    std::size_t i, j;
    Monomial lcm;
  };

  std::vector<Poly> store;
  std::vector<bool> active;
  std::vector<Pair> pairs;
  std::size_t live_terms = 0;

  auto install = [&](Poly h) {
    h = h.monic();
    const std::size_t hi = store.size();
    const Monomial lh = h.leading_monomial();
    live_terms += h.size();
    if (live_terms > budget.max_monomials)
      throw BudgetExceeded("basis exceeded the monomial budget of " + std::to_string(budget.max_monomials), false);
    store.push_back(std::move(h));
    active.push_back(true);

    // New pairs (h, g), pruned by the chain criterion among themselves.
    std::vector<Pair> fresh;
    for (std::size_t g = 0; g < hi; ++g)
      if (active[g]) fresh.push_back({g, hi, Monomial::lcm(store[g].leading_monomial(), lh)});
    std::vector<Pair> kept;
    for (std::size_t a = 0; a < fresh.size(); ++a) {
      const bool coprime = store[fresh[a].i].leading_monomial().coprime(lh);
      bool dominated = false;
      if (!coprime) {
        for (std::size_t b = 0; b < fresh.size() && !dominated; ++b) {
          if (a == b) continue;
          if (fresh[b].lcm.divides(fresh[a].lcm) &&
              (fresh[b].lcm != fresh[a].lcm || b < a))
            dominated = true;
        }
      }
      if (!dominated) kept.push_back(fresh[a]);
    }
    // Product criterion: coprime leading monomials reduce to zero.
    std::erase_if(kept, [&](const Pair& p) { return store[p.i].leading_monomial().coprime(lh); });

    // Chain criterion on the old pairs.
    std::erase_if(pairs, [&](const Pair& p) {
      if (!lh.divides(p.lcm)) return false;
      const Monomial li = Monomial::lcm(store[p.i].leading_monomial(), lh);
      const Monomial lj = Monomial::lcm(store[p.j].leading_monomial(), lh);
      return li != p.lcm && lj != p.lcm;
    });
    pairs.insert(pairs.end(), kept.begin(), kept.end());

    for (std::size_t g = 0; g < hi; ++g) {
      if (active[g] && lh.divides(store[g].leading_monomial())) {
        active[g] = false;
        live_terms -= store[g].size();
      }
    }
  };

  for (auto& g : generators) {
    budget.check_time();
    Poly h = GroebnerBasis<F>::reduce(std::move(g), store, &budget, &active);
    if (!h.is_zero()) install(std::move(h));
  }

  while (!pairs.empty()) {
    budget.check_time();
    auto best = pairs.begin();
    for (auto it = pairs.begin(); it != pairs.end(); ++it) {
      if (it->lcm.degree() < best->lcm.degree() ||
          (it->lcm.degree() == best->lcm.degree() && compare(it->lcm, best->lcm) < 0))
        best = it;
    }
    const Pair p = *best;
    pairs.erase(best);
    Poly h = GroebnerBasis<F>::reduce(s_polynomial(store[p.i], store[p.j]), store, &budget, &active);
    if (!h.is_zero()) install(std::move(h));
  }

  // Minimal basis, then inter-reduce.
  std::vector<Poly> minimal;
  for (std::size_t i = 0; i < store.size(); ++i)
    if (active[i]) minimal.push_back(store[i]);
  std::vector<Poly> reduced;
  for (std::size_t i = 0; i < minimal.size(); ++i) {
    std::vector<Poly> others;
    for (std::size_t j = 0; j < minimal.size(); ++j)
      if (j != i) others.push_back(minimal[j]);
    Poly lead = Poly::term(minimal[i].leading_monomial(), minimal[i].leading_coeff());
    Poly tail = minimal[i] - lead;
    reduced.push_back((lead + GroebnerBasis<F>::reduce(tail, others, &budget)).monic());
  }
  std::sort(reduced.begin(), reduced.end(),
            [](const Poly& a, const Poly& b) { return compare(a.leading_monomial(), b.leading_monomial()) < 0; });
  return GroebnerBasis<F>(nvars, std::move(reduced));
}

/// Outcome of a minimal-polynomial search for one variable in the quotient
/// ring k[x]/I.
template <class F>
struct MinimalPolynomial {
  enum class Kind { Finite, Infinite, BudgetExceeded };
  Kind kind = Kind::Infinite;
  std::vector<F> coefficients;  // monic, lowest degree first (Finite only)
  unsigned degree = 0;          // number of distinct roots (square-free degree)

  bool finite() const { return kind == Kind::Finite; }
};

/// gcd of two univariate polynomials (coefficients lowest degree first).
template <class F>
std::vector<F> univariate_gcd(std::vector<F> a, std::vector<F> b) {
  auto trim = [](std::vector<F>& p) {
    while (!p.empty() && p.back() == F(0)) p.pop_back();
  };
  trim(a);
  trim(b);
  while (!b.empty()) {
    // a mod b
    while (a.size() >= b.size() && !a.empty()) {
      const F c = a.back() / b.back();
      const std::size_t shift = a.size() - b.size();
      for (std::size_t k = 0; k < b.size(); ++k) a[k + shift] = a[k + shift] - c * b[k];
      trim(a);
    }
    std::swap(a, b);
  }
  if (!a.empty()) {
    const F inv = F(1) / a.back();
    for (auto& x : a) x = x * inv;
  }
  return a;
}

/// Minimal polynomial of variable `var` modulo the ideal of `gb`, found as
/// the first linear dependence among the normal forms of 1, v, v^2, ...
/// If no leading monomial is a pure power of v, every power of v is a
/// standard monomial and v is transcendental over the ideal (Infinite).
/// `max_degree` bounds the search (BudgetExceeded when reached).
template <class F>
MinimalPolynomial<F> minimal_polynomial(const GroebnerBasis<F>& gb, std::size_t var, std::size_t max_degree,
                                        const GroebnerBudget& budget = {}) {
  using Poly = SparsePoly<F>;
  MinimalPolynomial<F> out;
  const std::size_t n = gb.nvars();
  if (gb.is_unit()) {
    // Empty variety: no admissible value at all.
    out.kind = MinimalPolynomial<F>::Kind::Finite;
    out.coefficients = {F(1)};
    out.degree = 0;
    return out;
  }
  bool pure = false;
  for (const auto& m : gb.staircase())
    if (auto v = m.pure_power_of(); v && *v == var) pure = true;
  if (!pure) {
    out.kind = MinimalPolynomial<F>::Kind::Infinite;
    return out;
  }

  // Echelon rows over the monomial coordinates, each tagged with the
  // combination of powers of v that produced it.
  struct Row {
    std::map<std::vector<Monomial::Exponent>, F> coords;  // sparse vector
    std::vector<F> combo;                                 // coefficients of v^0..v^k
  };
  std::vector<Row> echelon;
  std::vector<std::vector<Monomial::Exponent>> pivot_of;  // pivot coordinate of each row

  auto to_coords = [](const Poly& p) {
    std::map<std::vector<Monomial::Exponent>, F> c;
    for (const auto& t : p.terms())
      c.emplace(std::vector<Monomial::Exponent>(t.mono.exponents().begin(), t.mono.exponents().end()), t.coeff);
    return c;
  };

  const Poly v = Poly::variable(n, var);
  Poly power = gb.normal_form(Poly::constant(n, F(1)));
  for (std::size_t k = 0; k <= max_degree; ++k) {
    budget.check_time();
    if (k > 0) power = gb.normal_form(power * v);
    Row row{to_coords(power), std::vector<F>(k + 1, F(0))};
    row.combo[k] = F(1);
    for (std::size_t r = 0; r < echelon.size(); ++r) {
      auto it = row.coords.find(pivot_of[r]);
      if (it == row.coords.end()) continue;
      const F f = it->second;  // echelon rows have pivot coefficient 1
      for (const auto& [mono, c] : echelon[r].coords) {
        F& slot = row.coords[mono];
        slot = slot - f * c;
      }
      std::erase_if(row.coords, [](const auto& kv) { return kv.second == F(0); });
      for (std::size_t i = 0; i < echelon[r].combo.size(); ++i) row.combo[i] = row.combo[i] - f * echelon[r].combo[i];
    }
    if (row.coords.empty()) {
      // combo is a polynomial in v lying in the ideal; monic, degree k.
      out.kind = MinimalPolynomial<F>::Kind::Finite;
      const F lead = row.combo[k];
      for (auto& c : row.combo) c = c / lead;
      out.coefficients = row.combo;
      std::vector<F> deriv;
      for (std::size_t i = 1; i < out.coefficients.size(); ++i)
        deriv.push_back(out.coefficients[i] * F(static_cast<std::uint64_t>(i)));
      const auto g = univariate_gcd(out.coefficients, deriv);
      const std::size_t gdeg = g.empty() ? 0 : g.size() - 1;
      out.degree = static_cast<unsigned>(k - (deriv.empty() || g.empty() ? 0 : gdeg));
      return out;
    }
    // Normalize on the largest coordinate (deterministic pivot choice).
    auto pivot = row.coords.rbegin();
    const F inv = F(1) / pivot->second;
    for (auto& [mono, c] : row.coords) c = c * inv;
    for (auto& c : row.combo) c = c * inv;
    pivot_of.push_back(pivot->first);
    // Keep earlier rows reduced against the new pivot so pivots stay unique.
    for (auto& e : echelon) {
      auto it = e.coords.find(pivot->first);
      if (it == e.coords.end()) continue;
      const F f = it->second;
      for (const auto& [mono, c] : row.coords) {
        F& slot = e.coords[mono];
        slot = slot - f * c;
      }
      std::erase_if(e.coords, [](const auto& kv) { return kv.second == F(0); });
      e.combo.resize(std::max(e.combo.size(), row.combo.size()), F(0));
      for (std::size_t i = 0; i < row.combo.size(); ++i) e.combo[i] = e.combo[i] - f * row.combo[i];
    }
    echelon.push_back(std::move(row));
  }
  out.kind = MinimalPolynomial<F>::Kind::BudgetExceeded;
  return out;
}

}  // namespace structid
