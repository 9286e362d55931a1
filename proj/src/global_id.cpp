#include "structid/global_id.hpp"

#include <algorithm>

namespace structid {

namespace {

using RF = RationalFunction<Fp>;
using Poly = SparsePoly<Fp>;
using Clock = std::chrono::steady_clock;

Poly widen(const Poly& p, std::size_t nvars) {
  std::vector<Poly::Term> terms;
  terms.reserve(p.size());
  for (const auto& t : p.terms()) {
    std::vector<Monomial::Exponent> e(t.mono.exponents().begin(), t.mono.exponents().end());
    e.resize(nvars, 0);
    terms.push_back({Monomial(std::move(e)), t.coeff});
  }
  return Poly::from_terms(nvars, std::move(terms));
}

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

PolySystem build_at(const ModelIR& model, const UnknownSet& unknowns, std::uint64_t seed, std::size_t order,
                    unsigned attempt, const GroebnerBudget& budget) {
  const std::size_t L = unknowns.size();
  PolySystem sys;
  sys.unknowns = unknowns;
  sys.order = order;
  sys.point = sample_point(model, unknowns, seed, order, attempt);

  std::vector<RF> x0;
  for (const auto& s : model.states) {
    if (auto it = model.known_ics.find(s); it != model.known_ics.end())
      x0.push_back(RF::constant(L, Fp::from_rational(it->second)));
    else
      x0.emplace_back(Poly::variable(L, *unknowns.index_of(s)));
  }
  std::map<std::string, RF> params;
  for (const auto& p : model.params) params.emplace(p, RF(Poly::variable(L, *unknowns.index_of(p))));
  std::map<std::string, Series<RF>> inputs;
  for (const auto& u : model.inputs) {
    std::vector<RF> c;
    for (std::size_t k = 0; k < order; ++k) c.push_back(RF::constant(L, sys.point.inputs.at(u)[k]));
    inputs.emplace(u, Series<RF>(std::move(c)));
  }

  std::size_t calls = 0;
  const auto series = taylor_outputs<RF>(model, std::span<const RF>(x0), params, inputs, order,
                                         [&](const Rational& r) {
                                           if ((++calls & 255) == 0) budget.check_time();
                                           return RF::constant(L, Fp::from_rational(r));
                                         });

  std::vector<Poly> dens;
  std::vector<std::pair<Poly, Poly>> eqs;  // (numerator - value * denominator, denominator)
  std::size_t total = 0;
  for (const auto& s : series) {
    for (std::size_t k = 0; k < order; ++k) {
      const RF& c = s[k];
      const Fp v = c.evaluate(sys.point.values);  // ZeroDivisor -> resample
      Poly g = c.numerator() - c.denominator().scaled(v);
      total += g.size();
      if (total > budget.max_monomials)
        throw BudgetExceeded("output expansion exceeded the monomial budget of " +
                                 std::to_string(budget.max_monomials),
                             false);
      if (!c.denominator().is_constant() &&
          std::find(dens.begin(), dens.end(), c.denominator()) == dens.end())
        dens.push_back(c.denominator());
      if (!g.is_zero()) eqs.emplace_back(std::move(g), c.denominator());
    }
  }

  sys.variables = unknowns.names();
  sys.saturation_vars = dens.size();
  for (std::size_t i = 0; i < dens.size(); ++i) sys.variables.push_back("_z" + std::to_string(i + 1));
  const std::size_t n = sys.variables.size();
  for (auto& [g, d] : eqs) sys.generators.push_back(widen(g, n));
  for (std::size_t i = 0; i < dens.size(); ++i) {
    Poly z = Poly::variable(n, L + i);
    sys.generators.push_back(z * widen(dens[i], n) - Poly::constant(n, Fp(1)));
  }
  return sys;
}

}  // namespace

std::vector<Fp> PolySystem::ground_truth() const {
  std::vector<Fp> pt = point.values;
  const std::size_t L = unknowns.size();
  // z_i = 1 / den_i, read back from the saturation generators z*den - 1.
  for (std::size_t i = 0; i < saturation_vars; ++i) {
    const Poly& g = generators[generators.size() - saturation_vars + i];
    std::vector<Fp> probe = pt;
    probe.resize(nvars(), Fp(0));
    probe[L + i] = Fp(1);
    const Fp den = g.evaluate(probe) + Fp(1);
    pt.push_back(Fp(1) / den);
  }
  return pt;
}

PolySystem build_identifiability_system(const ModelIR& model, std::uint64_t seed, std::size_t order,
                                        const GroebnerBudget& budget) {
  const UnknownSet unknowns(model);
  if (unknowns.size() == 0) throw AnalysisError("model has no unknowns");
  for (unsigned attempt = 0; attempt <= kMaxResamples; ++attempt) {
    try {
      return build_at(model, unknowns, seed, order, attempt, budget);
    } catch (const ZeroDivisor&) {
    }
  }
  throw AnalysisError("a denominator vanished at every resampled point");
}

const char* to_string(GlobalKind k) {
  switch (k) {
    case GlobalKind::GloballyIdentifiable: return "globally";
    case GlobalKind::LocallyOnly: return "locally";
    case GlobalKind::NonIdentifiable: return "nonidentifiable";
    case GlobalKind::Undetermined: return "undetermined";
  }
  return "undetermined";
}

const GlobalVerdict& GlobalReport::verdict(std::string_view name) const {
  auto i = unknowns.index_of(name);
  if (!i) throw std::out_of_range("not an unknown: " + std::string(name));
  return verdicts[*i];
}

GlobalReport assess_global(const ModelIR& model, const GlobalOptions& options) {
  GlobalReport rep;
  rep.unknowns = UnknownSet(model);
  rep.seed = options.seed;
  rep.order = options.order.value_or(default_order(model));
  rep.local = assess_local(model, {options.seed, rep.order, Execution::Parallel});
  const std::size_t L = rep.unknowns.size();

  GroebnerBudget budget;
  budget.max_monomials = options.max_monomials;
  budget.deadline = Clock::now() + options.timeout;

  auto fallback = [&](std::size_t j) {
    return rep.local.verdicts[j] == LocalVerdict::NonIdentifiable ? GlobalVerdict{GlobalKind::NonIdentifiable, {}}
                                                                   : GlobalVerdict{GlobalKind::Undetermined, {}};
  };

  rep.verdicts.assign(L, GlobalVerdict{});
  GroebnerBasis<Fp> gb;
  try {
    budget.check_time();
    auto t0 = Clock::now();
    PolySystem sys = build_identifiability_system(model, options.seed, rep.order, budget);
    rep.system_ms = ms_since(t0);
    rep.generators = sys.generators.size();
    t0 = Clock::now();
    gb = buchberger(sys.generators, sys.nvars(), budget);
    rep.basis_ms = ms_since(t0);
    rep.basis_size = gb.size();
    rep.basis_computed = true;
  } catch (const BudgetExceeded& e) {
    rep.timed_out = e.timed_out();
    rep.undetermined_reason = e.what();
    for (std::size_t j = 0; j < L; ++j) rep.verdicts[j] = fallback(j);
    return rep;
  }

  const auto t0 = Clock::now();
  for (std::size_t j = 0; j < L; ++j) {
    try {
      const auto mp = minimal_polynomial(gb, j, options.max_minpoly_degree, budget);
      switch (mp.kind) {
        case MinimalPolynomial<Fp>::Kind::Infinite:
          rep.verdicts[j] = {GlobalKind::NonIdentifiable, {}};
          break;
        case MinimalPolynomial<Fp>::Kind::BudgetExceeded:
          rep.verdicts[j] = fallback(j);
          if (rep.verdicts[j].kind == GlobalKind::Undetermined && !rep.undetermined_reason)
            rep.undetermined_reason = "minimal polynomial search exceeded degree " +
                                      std::to_string(options.max_minpoly_degree);
          break;
        case MinimalPolynomial<Fp>::Kind::Finite:
          if (mp.degree == 0)
            throw AnalysisError("the identifiability system is inconsistent at the sampled point");
          rep.verdicts[j] = {mp.degree == 1 ? GlobalKind::GloballyIdentifiable : GlobalKind::LocallyOnly, mp.degree};
          break;
      }
    } catch (const BudgetExceeded& e) {
      rep.timed_out = rep.timed_out || e.timed_out();
      if (!rep.undetermined_reason) rep.undetermined_reason = e.what();
      for (std::size_t k = j; k < L; ++k) rep.verdicts[k] = fallback(k);
      break;
    }
  }
  rep.minpoly_ms = ms_since(t0);
  return rep;
}

}  // namespace structid
