#include "structid/local_id.hpp"

#include <algorithm>

namespace structid {

namespace {

SensitivityMatrix build_at(const ModelIR& model, const UnknownSet& unknowns, std::uint64_t seed,
                           std::size_t order, unsigned attempt) {
  SensitivityMatrix sm;
  sm.unknowns = unknowns;
  sm.order = order;
  sm.point = sample_point(model, unknowns, seed, order, attempt);
  const auto series = picard_expand(model, unknowns, sm.point, order);
  const std::size_t L = unknowns.size();
  sm.entries = Matrix<Fp>(0, L);
  std::vector<Fp> row(L);
  for (const auto& [name, s] : series) {
    for (std::size_t k = 0; k < order; ++k) {
      for (std::size_t j = 0; j < L; ++j) row[j] = s[k].partial(j);
      sm.entries.append_row(row);
      sm.rows.emplace_back(name, k);
    }
  }
  return sm;
}

}  // namespace

SensitivityMatrix build_sensitivity_matrix(const ModelIR& model, std::uint64_t seed, std::size_t order) {
  const UnknownSet unknowns(model);
  if (unknowns.size() == 0) throw AnalysisError("model has no unknowns: every initial state is known and there are no parameters");
  for (unsigned attempt = 0; attempt <= kMaxResamples; ++attempt) {
    try {
      return build_at(model, unknowns, seed, order, attempt);
    } catch (const ZeroDivisor&) {
      // denominator vanished at this point; draw another
    }
  }
  throw AnalysisError("a denominator vanished at " + std::to_string(kMaxResamples + 1) +
                      " consecutive random points; the model's right-hand side may be undefined generically");
}

LocalVerdict LocalReport::verdict(std::string_view name) const {
  auto i = unknowns.index_of(name);
  if (!i) throw std::out_of_range("not an unknown: " + std::string(name));
  return verdicts[*i];
}

LocalReport classify_columns(const SensitivityMatrix& m, Execution execution) {
  LocalReport rep;
  rep.unknowns = m.unknowns;
  rep.seed = m.point.seed;
  rep.resamples = m.point.attempt;
  rep.order = m.order;
  const std::size_t L = m.unknowns.size();
  rep.verdicts.assign(L, LocalVerdict::NonIdentifiable);
  std::vector<std::size_t> reduced(L, 0);
  if (execution == Execution::Serial) {
    rep.rank = rank(m.entries);
    for (std::size_t j = 0; j < L; ++j) reduced[j] = rank(m.entries.without_column(j));
  } else {
    std::size_t full = 0;
    const auto n = static_cast<std::ptrdiff_t>(L);
    // Column L is the full matrix; the others are the L deletions.
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t j = 0; j <= n; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      if (uj == L)
        full = rank(m.entries);
      else
        reduced[uj] = rank(m.entries.without_column(uj));
    }
    rep.rank = full;
  }
  for (std::size_t j = 0; j < L; ++j)
    if (reduced[j] + 1 == rep.rank) rep.verdicts[j] = LocalVerdict::LocallyIdentifiable;
  return rep;
}

LocalReport assess_local(const ModelIR& model, const LocalOptions& options) {
  const std::size_t order = options.order.value_or(default_order(model));
  return classify_columns(build_sensitivity_matrix(model, options.seed, order), options.execution);
}

std::vector<Fp> function_gradient(const SensitivityMatrix& m, const Expr& phi) {
  using J = JetScalar<Fp>;
  const std::size_t L = m.unknowns.size();
  const J value = eval_expr<J>(
      phi,
      [&](const Expr& s) {
        auto i = m.unknowns.index_of(s.name());
        if (!i || s.kind() == SymbolKind::Input || m.unknowns[*i].is_state != (s.kind() == SymbolKind::State))
          throw std::invalid_argument("'" + s.name() + "' is not an unknown of the model");
        return J::seed(m.point.values[*i], *i, L);
      },
      [](const Rational& r) { return J(Fp::from_rational(r)); });
  std::vector<Fp> g(L);
  for (std::size_t j = 0; j < L; ++j) g[j] = value.partial(j);
  return g;
}

FunctionVerdict check_function_local(const SensitivityMatrix& m, const Expr& phi) {
  const auto g = function_gradient(m, phi);
  Matrix<Fp> augmented = m.entries;
  augmented.append_row(g);
  return rank(augmented) == rank(m.entries) ? FunctionVerdict::Identifiable : FunctionVerdict::NonIdentifiable;
}

FunctionVerdict check_function_local(const ModelIR& model, const Expr& phi, std::uint64_t seed,
                                     std::optional<std::size_t> order) {
  const std::size_t nu = order.value_or(default_order(model));
  const UnknownSet unknowns(model);
  for (unsigned attempt = 0; attempt <= kMaxResamples; ++attempt) {
    try {
      SensitivityMatrix m = build_at(model, unknowns, seed, nu, attempt);
      return check_function_local(m, phi);
    } catch (const ZeroDivisor&) {
    }
  }
  throw AnalysisError("function or model denominator vanished at every resampled point");
}

const char* to_string(LocalVerdict v) {
  return v == LocalVerdict::LocallyIdentifiable ? "locally" : "nonidentifiable";
}

const char* to_string(FunctionVerdict v) {
  return v == FunctionVerdict::Identifiable ? "identifiable" : "nonidentifiable";
}

}  // namespace structid
