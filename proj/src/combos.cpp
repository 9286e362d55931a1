#include "structid/combos.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace structid {

namespace {

struct Candidate {
  Expr expr;
  std::string text;
  std::string family;
};

std::vector<Candidate> candidate_family(const ModelIR& model, const CombosOptions& options) {
  std::vector<Candidate> out;
  std::set<std::string> seen;
  auto add = [&](Expr e, const char* family) {
    std::string text = e.to_string();
    if (seen.insert(text).second) out.push_back({std::move(e), std::move(text), family});
  };
  std::vector<Expr> theta;
  for (const auto& p : model.params) theta.push_back(Expr::symbol(p, SymbolKind::Parameter));
  const std::size_t n = theta.size();

  for (const auto& t : theta) add(t, "parameter");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) add(theta[i] + theta[j], "sum");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) add(theta[i] * theta[j], "product");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) add(theta[i] / theta[j], "ratio");

  // Monomials of total degree 2..degree_bound, graded then lexicographic.
  std::vector<unsigned> exps(n, 0);
  std::function<void(std::size_t, unsigned)> emit = [&](std::size_t var, unsigned left) {
    if (var == n) {
      if (left != 0) return;
      std::optional<Expr> m;
      for (std::size_t i = 0; i < n; ++i) {
        if (exps[i] == 0) continue;
        Expr f = exps[i] == 1 ? theta[i] : Expr::power(theta[i], exps[i]);
        m = m ? *m * f : f;
      }
      add(*m, "monomial");
      return;
    }
    for (unsigned e = left + 1; e-- > 0;) {
      exps[var] = e;
      emit(var + 1, left - e);
    }
    exps[var] = 0;
  };
  if (n > 0)
    for (unsigned d = 2; d <= options.degree_bound; ++d) emit(0, d);

  for (const auto& e : options.extra) add(e, "user");
  return out;
}

bool passes(const SensitivityMatrix& m, const Expr& phi) {
  try {
    return check_function_local(m, phi) == FunctionVerdict::Identifiable;
  } catch (const ZeroDivisor&) {
    return false;
  }
}

}  // namespace

KernelBasis kernel_basis(const SensitivityMatrix& m) { return {m.unknowns, null_space(m.entries)}; }

std::vector<std::uint64_t> certification_seeds(std::uint64_t base, unsigned count) {
  std::vector<std::uint64_t> s;
  for (unsigned i = 0; i < count; ++i) s.push_back(base + i);
  return s;
}

bool CombosReport::contains(std::string_view text) const {
  return std::any_of(certified.begin(), certified.end(), [&](const CertifiedFunction& f) { return f.text == text; });
}

CombosReport find_identifiable_combinations(const ModelIR& model, const CombosOptions& options) {
  if (options.seeds.empty()) throw std::invalid_argument("at least one certification seed is required");
  CombosReport rep;
  rep.seeds = options.seeds;
  rep.family = "parameters, pairwise sums, products and ratios, monomials of degree <= " +
               std::to_string(options.degree_bound) + (options.extra.empty() ? "" : ", user expressions");

  const std::size_t order = options.order.value_or(default_order(model));
  std::vector<SensitivityMatrix> mats;
  for (auto s : options.seeds) mats.push_back(build_sensitivity_matrix(model, s, order));

  const SensitivityMatrix& m0 = mats.front();
  const std::size_t L = m0.unknowns.size();
  rep.kernel_dimension = L - rank(m0.entries);
  {
    // Row space restricted to parameter coordinates: rank(M) - rank(M_states).
    std::size_t nstates = 0;
    while (nstates < L && m0.unknowns[nstates].is_state) ++nstates;
    Matrix<Fp> states(m0.entries.rows(), nstates);
    for (std::size_t i = 0; i < m0.entries.rows(); ++i)
      for (std::size_t j = 0; j < nstates; ++j) states(i, j) = m0.entries(i, j);
    rep.target = rank(m0.entries) - rank(states);
  }

  const auto cands = candidate_family(model, options);
  rep.candidates_tested = cands.size();
  std::vector<char> ok(cands.size(), 1);
  const auto n = static_cast<std::ptrdiff_t>(cands.size());
  if (options.execution == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t c = 0; c < n; ++c)
      for (const auto& m : mats)
        if (!passes(m, cands[static_cast<std::size_t>(c)].expr)) {
          ok[static_cast<std::size_t>(c)] = 0;
          break;
        }
  } else {
    for (std::ptrdiff_t c = 0; c < n; ++c)
      for (const auto& m : mats)
        if (!passes(m, cands[static_cast<std::size_t>(c)].expr)) {
          ok[static_cast<std::size_t>(c)] = 0;
          break;
        }
  }

  Matrix<Fp> span(0, L);
  for (std::size_t c = 0; c < cands.size(); ++c) {
    if (!ok[c]) continue;
    rep.certified.push_back({cands[c].expr, cands[c].text, cands[c].family, options.seeds});
    const auto g = function_gradient(m0, cands[c].expr);
    if (std::all_of(g.begin(), g.end(), [](Fp x) { return x.is_zero(); })) continue;
    Matrix<Fp> trial = span;
    trial.append_row(g);
    if (rank(trial) == trial.rows()) {  // span rows stay independent
      span = std::move(trial);
      rep.generators.push_back(rep.certified.size() - 1);
    }
  }
  return rep;
}

std::vector<FunctionVerdict> check_functions(const ModelIR& model, const std::vector<Expr>& phis,
                                             const std::vector<std::uint64_t>& seeds,
                                             std::optional<std::size_t> order) {
  if (seeds.empty()) throw std::invalid_argument("at least one seed is required");
  std::vector<FunctionVerdict> out(phis.size(), FunctionVerdict::Identifiable);
  for (auto s : seeds)
    for (std::size_t i = 0; i < phis.size(); ++i)
      if (out[i] == FunctionVerdict::Identifiable &&
          check_function_local(model, phis[i], s, order) == FunctionVerdict::NonIdentifiable)
        out[i] = FunctionVerdict::NonIdentifiable;
  return out;
}

}  // namespace structid
