#pragma once

// Exact reference computations shared by the unit suites and the acceptance
// binary. None of them touch the modular rank or Taylor machinery.

#include "structid/groebner.hpp"
#include "structid/modint.hpp"
#include "structid/rational.hpp"

#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace structid::oracle {

/// Fraction-free Gaussian elimination over the integers.
inline std::size_t exact_rank(std::vector<std::vector<BigInt>> a) {
  const std::size_t rows = a.size(), cols = a.empty() ? 0 : a[0].size();
  BigInt prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t k = c + 1; k < cols; ++k) a[i][k] = (a[r][c] * a[i][k] - a[i][c] * a[r][k]) / prev;
      a[i][c] = 0;
    }
    prev = a[r][c];
    ++r;
  }
  return r;
}

/// Every generator and every S-polynomial reduce to zero, elements are
/// monic, and no term of one element is divisible by another's leading
/// monomial.
template <class F>
bool is_reduced_groebner(const GroebnerBasis<F>& gb, const std::vector<SparsePoly<F>>& generators) {
  for (const auto& g : generators)
    if (!gb.normal_form(g).is_zero()) return false;
  const auto& ps = gb.polys();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (ps[i].leading_coeff() != F(1)) return false;
    for (std::size_t j = 0; j < ps.size(); ++j) {
      if (i == j) continue;
      if (i < j && !gb.normal_form(s_polynomial(ps[i], ps[j])).is_zero()) return false;
      for (const auto& t : ps[j].terms())
        if (ps[i].leading_monomial().divides(t.mono)) return false;
    }
  }
  return true;
}

/// x' = A x, y = C x with small integer entries, written in the model
/// language, and which initial values the observability matrix pins down.
struct LinearSystem {
  std::string source;
  std::size_t n = 0;
  std::size_t observability_rank = 0;
  std::vector<bool> identifiable;  // x_i(0) iff e_i lies in the row space
};

inline LinearSystem random_linear_system(std::mt19937& rng) {
  LinearSystem s;
  const std::size_t n = 1 + rng() % 4, outputs = 1 + rng() % 2;
  s.n = n;
  auto draw = [&] { return rng() % 3 == 0 ? 0LL : static_cast<long long>(rng() % 5) - 2; };
  std::vector<std::vector<long long>> A(n, std::vector<long long>(n)), C(outputs, std::vector<long long>(n));
  for (auto& r : A)
    for (auto& v : r) v = draw();
  for (auto& r : C)
    for (auto& v : r) v = draw();
  auto term = [](long long c, std::size_t j) { return " + (" + std::to_string(c) + ")*x" + std::to_string(j) + "(t)"; };
  std::ostringstream src;
  for (std::size_t i = 0; i < n; ++i) {
    src << "x" << i << "'(t) = 0";
    for (std::size_t j = 0; j < n; ++j)
      if (A[i][j]) src << term(A[i][j], j);
    src << '\n';
  }
  for (std::size_t o = 0; o < outputs; ++o) {
    src << "y" << o << "(t) = 0";
    for (std::size_t j = 0; j < n; ++j)
      if (C[o][j]) src << term(C[o][j], j);
    src << '\n';
  }
  s.source = src.str();

  std::vector<std::vector<BigInt>> obs;
  std::vector<std::vector<long long>> block = C;
  for (std::size_t k = 0; k < n; ++k) {
    for (const auto& r : block) obs.emplace_back(r.begin(), r.end());
    std::vector<std::vector<long long>> next(outputs, std::vector<long long>(n, 0));
    for (std::size_t o = 0; o < outputs; ++o)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l < n; ++l) next[o][j] += block[o][l] * A[l][j];
    block = std::move(next);
  }
  s.observability_rank = exact_rank(obs);
  for (std::size_t i = 0; i < n; ++i) {
    auto reduced = obs;
    for (auto& row : reduced) row.erase(row.begin() + static_cast<std::ptrdiff_t>(i));
    s.identifiable.push_back(exact_rank(reduced) + 1 == s.observability_rank);
  }
  return s;
}

using F31 = ModInt<31>;

/// A zero-dimensional system in x, y, z over F31: a triangular set mixed by
/// a random invertible matrix, with the number of distinct values each
/// coordinate takes on the solution set, found by enumerating F31^3.
struct SmallSystem {
  std::vector<SparsePoly<F31>> generators;
  std::vector<std::size_t> distinct;
};

inline SmallSystem random_small_system(std::mt19937& rng) {
  const std::size_t n = 3;
  auto rnd = [&](int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<unsigned>(hi - lo + 1)); };
  auto cst = [&](long long c) { return SparsePoly<F31>::constant(n, F31::from_signed(c)); };
  const auto x = SparsePoly<F31>::variable(n, 0), y = SparsePoly<F31>::variable(n, 1),
             z = SparsePoly<F31>::variable(n, 2);
  auto affine = [&](const SparsePoly<F31>& v) { return v.scaled(F31(rnd(0, 30))) + cst(rnd(0, 30)); };
  SparsePoly<F31> f1 = cst(1);
  for (int k = rnd(1, 3); k > 0; --k) f1 = f1 * (x - cst(rnd(0, 30)));
  SparsePoly<F31> f2 = cst(1);
  for (int k = rnd(1, 2); k > 0; --k) f2 = f2 * (y - affine(x));
  SparsePoly<F31> f3 = z - affine(x) - affine(y);
  if (rng() % 2) f3 = f3 * (z - affine(y));
  const std::vector<SparsePoly<F31>> tri{f1, f2, f3};

  SmallSystem s;
  for (;;) {
    int m[3][3];
    for (auto& r : m)
      for (auto& v : r) v = rnd(0, 30);
    const long long det = (static_cast<long long>(m[0][0]) * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                           static_cast<long long>(m[0][1]) * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                           static_cast<long long>(m[0][2]) * (m[1][0] * m[2][1] - m[1][1] * m[2][0])) %
                          31;
    if (det == 0) continue;
    for (auto& r : m) s.generators.push_back(tri[0].scaled(F31(r[0])) + tri[1].scaled(F31(r[1])) + tri[2].scaled(F31(r[2])));
    break;
  }
  std::set<std::uint64_t> seen[3];
  std::vector<F31> pt(3);
  for (std::uint64_t a = 0; a < 31; ++a)
    for (std::uint64_t b = 0; b < 31; ++b)
      for (std::uint64_t c = 0; c < 31; ++c) {
        pt = {F31(a), F31(b), F31(c)};
        bool on = true;
        for (const auto& g : s.generators) on = on && g.evaluate(pt).is_zero();
        if (!on) continue;
        seen[0].insert(a);
        seen[1].insert(b);
        seen[2].insert(c);
      }
  for (const auto& v : seen) s.distinct.push_back(v.size());
  return s;
}

}  // namespace structid::oracle
