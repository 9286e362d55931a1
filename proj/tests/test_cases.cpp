#include "doctest.h"

#include "structid/cases.hpp"

#include <set>
#include <sstream>

using namespace structid;

namespace {

std::set<std::string> failing(const RegressionReport& r) {
  std::set<std::string> out;
  for (const auto& c : r.checks)
    if (!c.pass) out.insert(c.case_name + " " + c.check);
  return out;
}

}  // namespace

TEST_CASE("corpus contents") {
  const auto& cs = corpus();
  REQUIRE(cs.size() == 10);
  std::vector<std::string> names;
  for (const auto& c : cs) names.push_back(c.name);
  CHECK(names == std::vector<std::string>{"bilinear", "exp_decay", "pk", "seirh", "seirh_both", "sir", "siwr",
                                          "siwr_w", "viral", "viral_vt"});
  std::size_t feasible = 0;
  for (const auto& c : cs) {
    CAPTURE(c.name);
    CHECK_FALSE(c.anchor.empty());
    CHECK_FALSE(c.variant.empty());
    CHECK_FALSE(c.verdicts.empty());
    CHECK_NOTHROW(c.model());
    feasible += c.global_feasible();
  }
  CHECK(feasible == 4);
  CHECK(corpus_case("sir").level == CaseLevel::Global);
  CHECK(corpus_case("viral").level == CaseLevel::Combos);
  CHECK_THROWS(corpus_case("nope"));
}

TEST_CASE("expectation files") {
  const std::string src = "x'(t) = -k*x(t)\ny(t) = x(t)\n";
  const CaseSpec c = parse_case("demo", src,
                                "# comment\n"
                                "variant: y = x\n"
                                "anchor: demo anchor\n"
                                "level: global\n"
                                "verdict k: globally\n"
                                "verdict x: locally 3   # trailing comment\n"
                                "combination: k\n");
  CHECK(c.anchor == "demo anchor");
  CHECK(c.level == CaseLevel::Global);
  REQUIRE(c.verdicts.size() == 2);
  CHECK(c.verdicts[0].kind == GlobalKind::GloballyIdentifiable);
  CHECK(c.verdicts[1].degree == 3u);
  CHECK(c.verdicts[1].to_string() == "locally 3");
  CHECK(c.combinations == std::vector<std::string>{"k"});

  const auto bad = [&](const char* expect, int line) {
    CAPTURE(expect);
    try {
      parse_case("demo", src, expect);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == line);
    }
  };
  bad("level: global\nverdict k: globally\n", 2);  // missing anchor, reported at the last line
  bad("anchor: a\nverdict k: sometimes\n", 2);
  bad("anchor: a\nverdict k: locally 1\n", 2);
  bad("anchor: a\nlevel: extreme\n", 2);
  bad("anchor: a\nfoo: bar\n", 2);
  bad("anchor: a\nverdict z: globally\n", 2);
  bad("anchor: a\ncombination: k +\n", 2);
}

TEST_CASE("local regression disagrees exactly where the models do") {
  const auto r = run_regression(corpus(), CaseLevel::Local);
  CHECK(r.errors.empty());
  CHECK(r.checks.size() == 43);
  CHECK(failing(r) == std::set<std::string>{"pk local x2", "pk local b", "seirh local eta", "seirh local rho",
                                            "seirh local sigma", "seirh_both local rho", "siwr local mu",
                                            "viral local beta"});
  for (const auto& c : r.checks) CHECK_FALSE(c.anchor.empty());
}

TEST_CASE("combination-level regression") {
  const auto r = run_regression(corpus(), CaseLevel::Combos);
  CHECK(r.errors.empty());
  CHECK(r.checks.size() == 89);
  const std::set<std::string> expected{
      "pk local x2",
      "pk local b",
      "pk global x2",
      "pk global a01",
      "pk global a12",
      "pk global b",
      "seirh local eta",
      "seirh local rho",
      "seirh local sigma",
      "seirh combination eta",
      "seirh combination rho",
      "seirh_both local rho",
      "seirh_both combination rho",
      "siwr local mu",
      "siwr combination beta_W/mu",
      "viral local beta",
      "viral combination beta*p",
  };
  CHECK(failing(r) == expected);
  // Checks are reported sorted by case.
  for (std::size_t i = 1; i < r.checks.size(); ++i) CHECK(r.checks[i - 1].case_name <= r.checks[i].case_name);
}

TEST_CASE("tampering with one expectation adds exactly one failure") {
  auto cases = corpus();
  const auto before = run_regression(cases, CaseLevel::Local).failures();
  for (auto& c : cases)
    if (c.name == "sir")
      for (auto& v : c.verdicts)
        if (v.unknown == "gamma") v.kind = GlobalKind::NonIdentifiable;
  const auto after = run_regression(cases, CaseLevel::Local);
  CHECK(after.failures() == before + 1);
  std::ostringstream os;
  after.print(os, true);
  CHECK(os.str().find("sir") != std::string::npos);
  CHECK(os.str().find("SIR case study") != std::string::npos);
}

TEST_CASE("undetermined global results fail and are flagged") {
  RegressionBudgets b;
  b.global.timeout = std::chrono::milliseconds(0);
  const std::vector<CaseSpec> cases{corpus_case("sir"), corpus_case("exp_decay")};
  const auto r = run_regression(cases, CaseLevel::Global, b);
  std::size_t undetermined = 0;
  for (const auto& c : r.checks) {
    if (c.check.rfind("global", 0) != 0) continue;
    if (c.actual.rfind("undetermined", 0) == 0) {
      CHECK_FALSE(c.pass);
      CHECK(c.downgraded);
      ++undetermined;
    }
  }
  CHECK(undetermined == 4);  // k, x, beta, gamma; R stays non-identifiable
  std::ostringstream os;
  r.print(os);
  CHECK(os.str().find("UNDT") != std::string::npos);
  // The local level never runs the global stage.
  CHECK(run_regression(cases, CaseLevel::Local, b).passed());
}

TEST_CASE("rational equivalence of combinations") {
  const ModelIR m = corpus_case("pk").model();
  const std::vector<std::string> vars{"a01", "a12"};
  CHECK(equivalent(parse_function("a01 + a12", m), parse_function("a12 + a01", m), vars));
  CHECK(equivalent(parse_function("a01*a12", m), parse_function("(a12*a01^2)/a01", m), vars));
  CHECK_FALSE(equivalent(parse_function("a01/a12", m), parse_function("a12/a01", m), vars));
}

TEST_CASE("level names") {
  CHECK(parse_case_level("combos") == CaseLevel::Combos);
  CHECK_FALSE(parse_case_level("full").has_value());
  CHECK(std::string(to_string(CaseLevel::Global)) == "global");
}
