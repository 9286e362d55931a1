#pragma once

#include "structid/local_id.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace structid {

/// Null space of a sensitivity matrix: tangent directions of the fibre of
/// the parameter-to-output map at the sample point.
struct KernelBasis {
  UnknownSet unknowns;
  std::vector<std::vector<Fp>> vectors;  // each of length unknowns.size()

  std::size_t dimension() const { return vectors.size(); }
};

KernelBasis kernel_basis(const SensitivityMatrix& m);

/// Seeds used for multi-point certification: base, base+1, ...
std::vector<std::uint64_t> certification_seeds(std::uint64_t base, unsigned count = 3);

struct CertifiedFunction {
  Expr expr;
  std::string text;
  std::string family;  // "parameter", "sum", "product", "ratio", "monomial", "user"
  std::vector<std::uint64_t> seeds;
};

struct CombosOptions {
  unsigned degree_bound = 2;
  std::vector<std::uint64_t> seeds = certification_seeds(kDefaultSeed);
  std::vector<Expr> extra;  // user-supplied candidates
  std::optional<std::size_t> order;
  Execution execution = Execution::Parallel;
};

struct CombosReport {
  std::vector<CertifiedFunction> certified;  // every surviving candidate, family order
  std::vector<std::size_t> generators;       // indices into `certified`, gradient-independent
  std::size_t target = 0;                    // dim(row space within the parameter coordinates)
  std::size_t candidates_tested = 0;
  std::size_t kernel_dimension = 0;
  std::string family;
  std::vector<std::uint64_t> seeds;

  bool shortfall() const { return generators.size() < target; }
  static constexpr const char* completeness = "heuristic";
  bool contains(std::string_view text) const;
};

/// Generate-and-test over parameters: singletons, pairwise sums, products
/// and ratios, monomials up to `degree_bound`, and user expressions. A
/// candidate survives if it passes check_function_local at every seed.
CombosReport find_identifiable_combinations(const ModelIR& model, const CombosOptions& options = {});

/// Identifiable iff identifiable at every seed.
std::vector<FunctionVerdict> check_functions(const ModelIR& model, const std::vector<Expr>& phis,
                                             const std::vector<std::uint64_t>& seeds = certification_seeds(kDefaultSeed),
                                             std::optional<std::size_t> order = std::nullopt);

}  // namespace structid
