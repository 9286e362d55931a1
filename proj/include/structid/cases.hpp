#pragma once

#include "structid/combos.hpp"
#include "structid/global_id.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace structid {

enum class CaseLevel { Local, Global, Combos };

const char* to_string(CaseLevel l);
std::optional<CaseLevel> parse_case_level(std::string_view s);

/// Expected verdict for one unknown; `kind` empty means unconstrained.
struct ExpectedVerdict {
  std::string unknown;
  std::optional<GlobalKind> kind;
  std::optional<unsigned> degree;  // only for LocallyOnly

  /// "globally", "locally 2", "nonidentifiable", "unconstrained".
  std::string to_string() const;
};

/// A corpus model with its expected outcomes. The `.expect` grammar is
/// documented in data/cases/FORMAT.md.
struct CaseSpec {
  std::string name;
  std::string source;  // model text
  std::string variant;
  std::string anchor;
  CaseLevel level = CaseLevel::Local;
  std::vector<ExpectedVerdict> verdicts;
  std::vector<std::string> combinations;

  bool global_feasible() const { return level == CaseLevel::Global; }
  ModelIR model() const { return parse_model(source); }
};

/// Throws ParseError (line numbers refer to the expect text).
CaseSpec parse_case(std::string name, std::string source, std::string_view expect);

/// The embedded corpus, sorted by name.
const std::vector<CaseSpec>& corpus();
const CaseSpec& corpus_case(std::string_view name);

struct RegressionBudgets {
  GlobalOptions global;
  CombosOptions combos;
};

struct CheckResult {
  std::string case_name;
  std::string check;  // "local a01", "global a01", "combination a01 + a12"
  std::string expected;
  std::string actual;
  std::string anchor;
  bool pass = false;
  bool downgraded = false;  // global Undetermined accepted at a lower level
};

struct RegressionReport {
  CaseLevel level = CaseLevel::Local;
  std::vector<CheckResult> checks;
  std::vector<std::string> errors;  // per-case analysis failures

  std::size_t failures() const;
  bool passed() const { return failures() == 0; }
  void print(std::ostream& os, bool failures_only = false) const;
};

/// Runs local, then global (feasible cases, at level Global), then combos
/// (at level Combos) and compares every stated expectation. Local checks
/// project globally/locally onto locally identifiable.
RegressionReport run_regression(const std::vector<CaseSpec>& cases, CaseLevel level,
                                const RegressionBudgets& budgets = {});

/// Exact equality of two rational expressions over the given symbols.
bool equivalent(const Expr& a, const Expr& b, const std::vector<std::string>& symbols);

}  // namespace structid
