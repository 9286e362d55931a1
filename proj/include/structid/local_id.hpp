#pragma once

#include "structid/linalg.hpp"
#include "structid/taylor.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace structid {

inline constexpr std::uint64_t kDefaultSeed = 20240917;
inline constexpr unsigned kMaxResamples = 5;
inline constexpr double kStatedProbability = 0.99;

enum class Execution { Serial, Parallel };

/// Jacobian of output Taylor coefficients 0..order-1 with respect to the
/// unknowns, at a random point of the prime field.
struct SensitivityMatrix {
  Matrix<Fp> entries;
  std::vector<std::pair<std::string, std::size_t>> rows;  // (output, coefficient index)
  UnknownSet unknowns;
  SamplePoint point;
  std::size_t order = 0;
};

/// Builds the matrix at the point drawn from `seed`, resampling up to
/// kMaxResamples times when a denominator vanishes there.
SensitivityMatrix build_sensitivity_matrix(const ModelIR& model, std::uint64_t seed, std::size_t order);

enum class LocalVerdict { LocallyIdentifiable, NonIdentifiable };

struct LocalReport {
  UnknownSet unknowns;
  std::vector<LocalVerdict> verdicts;  // aligned with unknowns
  std::size_t rank = 0;
  std::uint64_t seed = 0;
  unsigned resamples = 0;
  std::size_t order = 0;
  double probability = kStatedProbability;

  std::size_t size() const { return unknowns.size(); }
  LocalVerdict verdict(std::string_view name) const;
};

struct LocalOptions {
  std::uint64_t seed = kDefaultSeed;
  std::optional<std::size_t> order;  // default_order(model) when unset
  Execution execution = Execution::Parallel;
};

/// Unknown j is locally identifiable iff deleting column j drops the rank.
LocalReport assess_local(const ModelIR& model, const LocalOptions& options = {});

/// Per-unknown verdicts from an existing matrix.
LocalReport classify_columns(const SensitivityMatrix& m, Execution execution = Execution::Parallel);

enum class FunctionVerdict { Identifiable, NonIdentifiable };

/// Gradient of `phi` (a function of the unknowns) at the matrix's point.
/// Throws std::invalid_argument for symbols that are not unknowns and
/// ZeroDivisor if phi's denominator vanishes at the point.
std::vector<Fp> function_gradient(const SensitivityMatrix& m, const Expr& phi);

/// Identifiable iff grad(phi) lies in the row space of the matrix.
FunctionVerdict check_function_local(const SensitivityMatrix& m, const Expr& phi);

/// Builds the matrix for `seed` (resampling if phi's denominator vanishes)
/// and checks phi.
FunctionVerdict check_function_local(const ModelIR& model, const Expr& phi, std::uint64_t seed,
                                     std::optional<std::size_t> order = std::nullopt);

const char* to_string(LocalVerdict v);
const char* to_string(FunctionVerdict v);

}  // namespace structid
