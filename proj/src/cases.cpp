#include "structid/cases.hpp"

#include "structid/symbolic.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

namespace structid {

namespace detail {
struct EmbeddedCase {
  const char* name;
  const char* ode;
  const char* expect;
};
extern const EmbeddedCase kEmbeddedCases[];
extern const std::size_t kEmbeddedCaseCount;
}  // namespace detail

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<GlobalKind> parse_kind(const std::string& word) {
  if (word == "globally") return GlobalKind::GloballyIdentifiable;
  if (word == "locally") return GlobalKind::LocallyOnly;
  if (word == "nonidentifiable") return GlobalKind::NonIdentifiable;
  if (word == "undetermined") return GlobalKind::Undetermined;
  return std::nullopt;
}

bool locally_identifiable(GlobalKind k) {
  return k == GlobalKind::GloballyIdentifiable || k == GlobalKind::LocallyOnly;
}

std::string describe(const GlobalVerdict& v) {
  std::string s = structid::to_string(v.kind);
  if (v.kind == GlobalKind::LocallyOnly && v.degree) s += " " + std::to_string(*v.degree);
  return s;
}

struct CaseOutcome {
  std::vector<CheckResult> checks;
  std::optional<std::string> error;
};

CaseOutcome run_case(const CaseSpec& c, CaseLevel level, const RegressionBudgets& budgets) {
  CaseOutcome out;
  auto record = [&](std::string check, std::string expected, std::string actual, bool pass, bool downgraded = false) {
    out.checks.push_back({c.name, std::move(check), std::move(expected), std::move(actual), c.anchor, pass, downgraded});
  };
  try {
    const ModelIR m = c.model();
    const UnknownSet unknowns(m);

    LocalOptions lo;
    lo.seed = budgets.global.seed;
    lo.order = budgets.global.order;
    const LocalReport local = assess_local(m, lo);

    std::optional<GlobalReport> global;
    if (level != CaseLevel::Local && c.global_feasible()) global = assess_global(m, budgets.global);

    for (const auto& ev : c.verdicts) {
      if (!ev.kind) continue;
      const auto j = unknowns.index_of(ev.unknown);
      if (!j) {
        record("local " + ev.unknown, ev.to_string(), "not an unknown of the model", false);
        continue;
      }
      const bool want_local = locally_identifiable(*ev.kind);
      const bool got_local = local.verdicts[*j] == LocalVerdict::LocallyIdentifiable;
      if (*ev.kind != GlobalKind::Undetermined)
        record("local " + ev.unknown, want_local ? "locally" : "nonidentifiable", to_string(local.verdicts[*j]),
               want_local == got_local);
      if (!global) continue;
      const GlobalVerdict& gv = global->verdicts[*j];
      if (gv.kind == GlobalKind::Undetermined) {
        record("global " + ev.unknown, ev.to_string(),
               "undetermined (" + global->undetermined_reason.value_or("budget") + ")", false, true);
        continue;
      }
      bool pass = gv.kind == *ev.kind;
      if (pass && ev.degree) pass = gv.degree == ev.degree;
      record("global " + ev.unknown, ev.to_string(), describe(gv), pass);
    }

    if (level == CaseLevel::Combos && !c.combinations.empty()) {
      const CombosReport rep = find_identifiable_combinations(m, budgets.combos);
      std::vector<std::string> symbols = m.params;
      for (const auto& s : m.states) symbols.push_back(s);
      for (const auto& text : c.combinations) {
        const Expr want = parse_function(text, m);
        const auto hit = std::find_if(rep.certified.begin(), rep.certified.end(), [&](const CertifiedFunction& f) {
          return equivalent(f.expr, want, symbols);
        });
        record("combination " + text, "certified", hit != rep.certified.end() ? "certified" : "not found",
               hit != rep.certified.end());
      }
    }
  } catch (const std::exception& e) {
    out.error = c.name + ": " + e.what();
  }
  return out;
}

}  // namespace

const char* to_string(CaseLevel l) {
  switch (l) {
    case CaseLevel::Local: return "local";
    case CaseLevel::Global: return "global";
    case CaseLevel::Combos: return "combos";
  }
  return "local";
}

std::optional<CaseLevel> parse_case_level(std::string_view s) {
  if (s == "local") return CaseLevel::Local;
  if (s == "global") return CaseLevel::Global;
  if (s == "combos") return CaseLevel::Combos;
  return std::nullopt;
}

std::string ExpectedVerdict::to_string() const {
  if (!kind) return "unconstrained";
  std::string s = structid::to_string(*kind);
  if (degree) s += " " + std::to_string(*degree);
  return s;
}

CaseSpec parse_case(std::string name, std::string source, std::string_view expect) {
  CaseSpec c;
  c.name = std::move(name);
  c.source = std::move(source);
  bool have_level = false;
  std::size_t lineno = 0;
  std::istringstream in{std::string(expect)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw.substr(0, raw.find('#'));
    line = trim(line);
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw ParseError(lineno, 1, "expected 'key: value'");
    const std::string key = trim(line.substr(0, colon));
    const std::string value = trim(line.substr(colon + 1));
    if (key == "variant") {
      c.variant = value;
    } else if (key == "anchor") {
      c.anchor = value;
    } else if (key == "level") {
      auto l = parse_case_level(value);
      if (!l) throw ParseError(lineno, colon + 2, "level must be local, global or combos");
      c.level = *l;
      have_level = true;
    } else if (key == "combination") {
      if (value.empty()) throw ParseError(lineno, colon + 2, "empty combination");
      c.combinations.push_back(value);
    } else if (key.rfind("verdict ", 0) == 0) {
      ExpectedVerdict ev;
      ev.unknown = trim(key.substr(8));
      std::istringstream words(value);
      std::string word;
      words >> word;
      if (word != "unconstrained") {
        ev.kind = parse_kind(word);
        if (!ev.kind) throw ParseError(lineno, colon + 2, "unknown verdict '" + word + "'");
        unsigned d = 0;
        if (words >> d) {
          if (*ev.kind != GlobalKind::LocallyOnly || d < 2)
            throw ParseError(lineno, colon + 2, "a degree is only allowed after 'locally' and must be >= 2");
          ev.degree = d;
        }
      }
      c.verdicts.push_back(std::move(ev));
    } else {
      throw ParseError(lineno, 1, "unknown key '" + key + "'");
    }
  }
  if (c.anchor.empty()) throw ParseError(lineno, 1, "missing 'anchor'");
  if (!have_level) throw ParseError(lineno, 1, "missing 'level'");
  return c;
}

const std::vector<CaseSpec>& corpus() {
  static const std::vector<CaseSpec> cases = [] {
    std::vector<CaseSpec> v;
    for (std::size_t i = 0; i < detail::kEmbeddedCaseCount; ++i) {
      const auto& e = detail::kEmbeddedCases[i];
      v.push_back(parse_case(e.name, e.ode, e.expect));
    }
    std::sort(v.begin(), v.end(), [](const CaseSpec& a, const CaseSpec& b) { return a.name < b.name; });
    return v;
  }();
  return cases;
}

const CaseSpec& corpus_case(std::string_view name) {
  for (const auto& c : corpus())
    if (c.name == name) return c;
  throw std::out_of_range("no corpus case named '" + std::string(name) + "'");
}

bool equivalent(const Expr& a, const Expr& b, const std::vector<std::string>& symbols) {
  return to_rational_function(a, symbols) == to_rational_function(b, symbols);
}

std::size_t RegressionReport::failures() const {
  return errors.size() +
         static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const CheckResult& c) { return !c.pass; }));
}

void RegressionReport::print(std::ostream& os, bool failures_only) const {
  for (const auto& c : checks) {
    if (failures_only && c.pass) continue;
    os << (c.pass ? "pass " : c.downgraded ? "UNDT " : "FAIL ") << std::left << std::setw(11) << c.case_name << ' '
       << std::setw(28) << c.check << " expected " << c.expected << ", got " << c.actual;
    if (!c.pass) os << "  [" << c.anchor << "]";
    os << '\n';
  }
  for (const auto& e : errors) os << "ERROR " << e << '\n';
  os << failures() << " failure(s) in " << checks.size() << " check(s) at level " << to_string(level) << '\n';
}

RegressionReport run_regression(const std::vector<CaseSpec>& cases, CaseLevel level, const RegressionBudgets& budgets) {
  std::vector<CaseOutcome> outcomes(cases.size());
  const auto n = static_cast<std::ptrdiff_t>(cases.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    outcomes[static_cast<std::size_t>(i)] = run_case(cases[static_cast<std::size_t>(i)], level, budgets);

  RegressionReport rep;
  rep.level = level;
  std::vector<std::size_t> order(cases.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cases[a].name < cases[b].name; });
  for (auto i : order) {
    auto& o = outcomes[i];
    rep.checks.insert(rep.checks.end(), o.checks.begin(), o.checks.end());
    if (o.error) rep.errors.push_back(*o.error);
  }
  return rep;
}

}  // namespace structid
