#include "doctest.h"

#include "structid/cases.hpp"
#include "structid/report.hpp"

#include <sstream>

using namespace structid;

namespace {

AnalysisReport run(const char* name, AnalysisLevel level) {
  AnalyzeOptions o;
  o.level = level;
  return analyze(corpus_case(name).model(), o);
}

nlohmann::json without_timings(nlohmann::json j) {
  j.erase("timings_ms");
  return j;
}

}  // namespace

TEST_CASE("SHA-256 test vectors") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("model digest is the hash of the canonical text") {
  const ModelIR sir = corpus_case("sir").model();
  // Frozen from an external SHA-256 of the canonical text.
  CHECK(sha256_hex(canonical_text(sir)) == "6ab244da533c5ba722e94fb4293fa813084815805d2164335f8c05b1ceb43859");
  const auto r = run("sir", AnalysisLevel::Local);
  CHECK(r.model_digest == sha256_hex(canonical_text(sir)));
  CHECK(r.model_digest.size() == 64);
  // Whitespace and comments do not change the digest.
  const ModelIR spaced = parse_model(
      "# SIR\nparams:  beta , gamma\nS'(t)=-beta*S(t)*I(t)\nI'(t) = beta*S(t)*I(t) - gamma*I(t)\n"
      "R'(t) = gamma*I(t)\ny(t) = beta * S(t) * I(t)\n");
  CHECK(sha256_hex(canonical_text(spaced)) == r.model_digest);
  CHECK(run("exp_decay", AnalysisLevel::Local).model_digest != r.model_digest);
}

TEST_CASE("JSON round trip") {
  for (const char* name : {"bilinear", "pk", "sir", "exp_decay"}) {
    CAPTURE(name);
    const auto r = run(name, AnalysisLevel::Full);
    const auto j = to_json(r);
    CHECK(report_from_json(j) == r);
    CHECK(report_from_json(nlohmann::json::parse(j.dump())) == r);
  }
  const auto local = run("viral", AnalysisLevel::Local);
  CHECK_FALSE(to_json(local).contains("global"));
  CHECK_FALSE(to_json(local).contains("combinations"));
  CHECK(report_from_json(to_json(local)) == local);
}

TEST_CASE("repeated runs are identical apart from timings") {
  for (const char* name : {"bilinear", "sir"}) {
    CAPTURE(name);
    const auto a = to_json(run(name, AnalysisLevel::Full));
    const auto b = to_json(run(name, AnalysisLevel::Full));
    CHECK(without_timings(a).dump() == without_timings(b).dump());
  }
}

TEST_CASE("report contents") {
  const auto r = run("bilinear", AnalysisLevel::Full);
  CHECK(r.schema_version == kSchemaVersion);
  CHECK(r.tool_version == std::string(tool_version()));
  REQUIRE(r.unknowns.size() == 3);
  for (const auto& u : r.unknowns) {
    CAPTURE(u.name);
    CHECK((u.role == "state") == (u.name == "x(0)"));
    CHECK(u.global.has_value());
  }
  REQUIRE(r.combinations.has_value());
  CHECK(r.combinations->completeness == "heuristic");
  CHECK(r.combinations->seeds == std::vector<std::uint64_t>{kDefaultSeed, kDefaultSeed + 1, kDefaultSeed + 2});
  CHECK(r.timings_ms.count("local"));
  CHECK(r.timings_ms.count("global"));
  CHECK(r.timings_ms.count("combinations"));
  std::ostringstream os;
  print_report(os, r);
  CHECK(os.str().find("p*q") != std::string::npos);
  CHECK(os.str().find("heuristic") != std::string::npos);
}

TEST_CASE("unsupported schema versions are rejected") {
  auto j = to_json(run("exp_decay", AnalysisLevel::Local));
  j["schema_version"] = kSchemaVersion + 1;
  CHECK_THROWS_AS(report_from_json(j), std::invalid_argument);
  j.erase("schema_version");
  CHECK_THROWS(report_from_json(j));
}

TEST_CASE("a global timeout without a basis is flagged") {
  AnalyzeOptions o;
  o.level = AnalysisLevel::Global;
  o.timeout = std::chrono::milliseconds(0);
  const auto r = analyze(corpus_case("sir").model(), o);
  REQUIRE(r.global.has_value());
  CHECK(global_timed_out_without_result(r));
  CHECK(r.global->note.has_value());
  CHECK_FALSE(global_timed_out_without_result(run("sir", AnalysisLevel::Global)));
  CHECK_FALSE(global_timed_out_without_result(run("sir", AnalysisLevel::Local)));
  // A monomial cap is not a timeout.
  o.timeout = std::chrono::milliseconds(60000);
  o.max_monomials = 3;
  const auto capped = analyze(corpus_case("sir").model(), o);
  CHECK_FALSE(global_timed_out_without_result(capped));
  CHECK(capped.global->note.has_value());
}
