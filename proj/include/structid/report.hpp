#pragma once

#include "structid/combos.hpp"
#include "structid/global_id.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace structid {

inline constexpr int kSchemaVersion = 1;

/// Hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

enum class AnalysisLevel { Local, Global, Full };

struct AnalyzeOptions {
  AnalysisLevel level = AnalysisLevel::Local;
  std::uint64_t seed = kDefaultSeed;
  std::optional<std::size_t> order;
  std::optional<std::size_t> global_order;
  std::chrono::milliseconds timeout{60000};
  std::size_t max_monomials = 200000;
  unsigned certification_seeds = 3;
};

struct UnknownEntry {
  std::string name;   // x(0) for states
  std::string role;   // "state" | "parameter"
  std::string local;  // "locally" | "nonidentifiable"
  std::optional<std::string> global;
  std::optional<unsigned> degree;

  friend bool operator==(const UnknownEntry&, const UnknownEntry&) = default;
};

struct CombinationEntry {
  std::string expression;
  std::string family;
  bool generator = false;

  friend bool operator==(const CombinationEntry&, const CombinationEntry&) = default;
};

struct CombinationsSection {
  std::vector<CombinationEntry> certified;
  std::vector<std::uint64_t> seeds;
  std::size_t target = 0;
  bool shortfall = false;
  std::string family;
  std::string completeness = CombosReport::completeness;

  friend bool operator==(const CombinationsSection&, const CombinationsSection&) = default;
};

struct GlobalSection {
  std::size_t order = 0;
  bool basis_computed = false;
  bool timed_out = false;
  std::optional<std::string> note;  // why verdicts are undetermined or downgraded

  friend bool operator==(const GlobalSection&, const GlobalSection&) = default;
};

/// Everything one `analyze` run produces.
struct AnalysisReport {
  int schema_version = kSchemaVersion;
  std::string tool_version;
  std::string model_digest;
  std::string level;
  std::uint64_t seed = 0;
  std::size_t order = 0;
  std::vector<UnknownEntry> unknowns;
  std::optional<GlobalSection> global;
  std::optional<CombinationsSection> combinations;
  std::string probability;
  std::map<std::string, double> timings_ms;

  friend bool operator==(const AnalysisReport&, const AnalysisReport&) = default;
};

const char* tool_version();

/// Runs the requested stages in order: local, global, combinations.
AnalysisReport analyze(const ModelIR& model, const AnalyzeOptions& options);

/// The global stage ran out of time before producing a basis.
bool global_timed_out_without_result(const AnalysisReport& report);

nlohmann::json to_json(const AnalysisReport& r);
AnalysisReport report_from_json(const nlohmann::json& j);

/// Human-readable table.
void print_report(std::ostream& os, const AnalysisReport& r);

}  // namespace structid
