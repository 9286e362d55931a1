#pragma once

#include "structid/groebner.hpp"
#include "structid/local_id.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace structid {

/// Polynomial equations tying the unknowns to sampled output Taylor
/// coefficients. Variables are the unknowns (UnknownSet order) followed by
/// one saturation variable per distinct non-constant denominator.
struct PolySystem {
  UnknownSet unknowns;
  std::vector<std::string> variables;
  std::vector<SparsePoly<Fp>> generators;
  SamplePoint point;
  std::size_t order = 0;
  std::size_t saturation_vars = 0;

  std::size_t nvars() const { return variables.size(); }
  /// Ground truth extended with the saturation variables' values.
  std::vector<Fp> ground_truth() const;
};

/// Expands the outputs symbolically over the unknowns and samples them at
/// the point drawn from `seed`. Throws BudgetExceeded on expression swell
/// or timeout, AnalysisError if every resample hits a vanishing denominator.
PolySystem build_identifiability_system(const ModelIR& model, std::uint64_t seed, std::size_t order,
                                        const GroebnerBudget& budget = {});

enum class GlobalKind { GloballyIdentifiable, LocallyOnly, NonIdentifiable, Undetermined };

struct GlobalVerdict {
  GlobalKind kind = GlobalKind::Undetermined;
  std::optional<unsigned> degree;  // minimal-polynomial degree when finite

  friend bool operator==(const GlobalVerdict&, const GlobalVerdict&) = default;
};

/// "globally", "locally", "nonidentifiable", "undetermined".
const char* to_string(GlobalKind k);

struct GlobalOptions {
  std::uint64_t seed = kDefaultSeed;
  std::optional<std::size_t> order;
  std::size_t max_monomials = 200000;
  std::chrono::milliseconds timeout{60000};
  std::size_t max_minpoly_degree = 64;
};

struct GlobalReport {
  UnknownSet unknowns;
  std::vector<GlobalVerdict> verdicts;
  LocalReport local;
  std::uint64_t seed = 0;
  std::size_t order = 0;
  bool timed_out = false;
  bool basis_computed = false;
  std::optional<std::string> undetermined_reason;
  std::size_t generators = 0;
  std::size_t basis_size = 0;
  double system_ms = 0, basis_ms = 0, minpoly_ms = 0;

  const GlobalVerdict& verdict(std::string_view name) const;
};

/// Local pass, polynomial system, reduced basis, then one minimal
/// polynomial per unknown. Budget breaches yield Undetermined, except that
/// an unknown already non-identifiable locally stays NonIdentifiable.
GlobalReport assess_global(const ModelIR& model, const GlobalOptions& options = {});

}  // namespace structid
