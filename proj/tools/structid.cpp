// structid: structural identifiability analysis of rational ODE models.

#include "structid/cases.hpp"
#include "structid/numeric.hpp"
#include "structid/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace structid;

enum Exit { kOk = 0, kFailed = 1, kParse = 2, kAnalysis = 3, kTimeout = 4 };

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ModelIR load_model(const std::string& path, bool strict) {
  const std::string text = read_file(path);
  try {
    return parse_model(text, {strict});
  } catch (const ParseError& e) {
    throw InputError(path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " + e.message());
  }
}

// Budgets may come from the environment; explicit flags win.
void apply_env(double& timeout_s, std::size_t& max_monomials) {
  if (const char* t = std::getenv("STRUCTID_TIMEOUT")) timeout_s = std::stod(t);
  if (const char* m = std::getenv("STRUCTID_MAX_MONOMIALS")) max_monomials = std::stoull(m);
}

std::chrono::milliseconds to_ms(double seconds) {
  return std::chrono::milliseconds(static_cast<long long>(seconds * 1000.0));
}

std::map<std::string, double> parse_bindings(const std::vector<std::string>& items, const char* what) {
  std::map<std::string, double> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (part.empty()) continue;
      const auto eq = part.find('=');
      if (eq == std::string::npos || eq == 0) throw InputError(std::string("malformed ") + what + " binding '" + part + "'");
      std::string name = part.substr(0, eq);
      if (name.size() > 3 && name.ends_with("(0)")) name.resize(name.size() - 3);
      try {
        std::size_t used = 0;
        const double v = std::stod(part.substr(eq + 1), &used);
        if (used != part.size() - eq - 1) throw std::invalid_argument("trailing characters");
        out[name] = v;
      } catch (const std::exception&) {
        throw InputError(std::string("non-numeric value in ") + what + " binding '" + part + "'");
      }
    }
  }
  return out;
}

int cmd_analyze(const std::string& path, const std::string& level, std::uint64_t seed, std::optional<std::size_t> order,
                std::optional<std::size_t> global_order, std::optional<double> timeout,
                std::optional<std::size_t> max_monomials, bool json, bool strict) {
  const ModelIR m = load_model(path, strict);
  AnalyzeOptions o;
  o.level = level == "global" ? AnalysisLevel::Global : level == "full" ? AnalysisLevel::Full : AnalysisLevel::Local;
  o.seed = seed;
  o.order = order;
  o.global_order = global_order;
  double t = 60;
  std::size_t mm = o.max_monomials;
  apply_env(t, mm);
  if (timeout) t = *timeout;
  if (max_monomials) mm = *max_monomials;
  o.timeout = to_ms(t);
  o.max_monomials = mm;
  const AnalysisReport r = analyze(m, o);
  if (json)
    std::cout << to_json(r).dump(2) << '\n';
  else
    print_report(std::cout, r);
  if (global_timed_out_without_result(r)) {
    std::cerr << "global stage timed out before producing a result\n";
    return kTimeout;
  }
  return kOk;
}

int cmd_funcs(const std::string& path, const std::string& check, std::uint64_t seed, unsigned seeds, bool json,
              bool strict) {
  const ModelIR m = load_model(path, strict);
  nlohmann::json out;
  out["schema_version"] = kSchemaVersion;
  out["seeds"] = certification_seeds(seed, seeds);
  if (!check.empty()) {
    std::vector<Expr> phis;
    try {
      phis = parse_function_list(check, m);
    } catch (const ParseError& e) {
      throw InputError("--check:" + std::to_string(e.column()) + ": " + e.message());
    }
    const auto verdicts = check_functions(m, phis, certification_seeds(seed, seeds));
    out["functions"] = nlohmann::json::array();
    for (std::size_t i = 0; i < phis.size(); ++i) {
      out["functions"].push_back({{"expression", phis[i].to_string()}, {"verdict", to_string(verdicts[i])}});
      if (!json) std::cout << std::left << std::setw(24) << phis[i].to_string() << ' ' << to_string(verdicts[i]) << '\n';
    }
  } else {
    CombosOptions co;
    co.seeds = certification_seeds(seed, seeds);
    const CombosReport rep = find_identifiable_combinations(m, co);
    out["certified"] = nlohmann::json::array();
    for (std::size_t i = 0; i < rep.certified.size(); ++i) {
      const bool gen = std::find(rep.generators.begin(), rep.generators.end(), i) != rep.generators.end();
      out["certified"].push_back(
          {{"expression", rep.certified[i].text}, {"family", rep.certified[i].family}, {"generator", gen}});
      if (!json && gen) std::cout << rep.certified[i].text << '\n';
    }
    out["target"] = rep.target;
    out["shortfall"] = rep.shortfall();
    out["completeness"] = CombosReport::completeness;
    if (!json && rep.shortfall())
      std::cout << "shortfall: " << rep.generators.size() << " of " << rep.target << " independent combinations found\n";
  }
  if (json) std::cout << out.dump(2) << '\n';
  return kOk;
}

int cmd_simulate(const std::string& path, const std::vector<std::string>& params, const std::vector<std::string>& ics,
                 const std::vector<std::string>& inputs, const std::string& tspan, std::size_t points, double rtol,
                 double atol, const std::string& out, bool strict) {
  const ModelIR m = load_model(path, strict);
  ParameterSet set;
  set.params = parse_bindings(params, "parameter");
  set.ics = parse_bindings(ics, "initial value");
  for (const auto& [u, v] : parse_bindings(inputs, "input")) {
    const double c = v;
    set.inputs[u] = [c](double) { return c; };
  }
  for (const auto& p : m.params)
    if (!set.params.count(p)) throw InputError("parameter '" + p + "' has no value (use --params " + p + "=...)");
  for (const auto& u : m.inputs)
    if (!set.inputs.count(u)) throw InputError("input '" + u + "' has no value (use --input " + u + "=...)");
  for (const auto& s : m.states)
    if (!set.ics.count(s) && !m.is_known_ic(s))
      throw InputError("state '" + s + "' has no initial value (use --ic " + s + "=...)");
  for (const auto& [name, v] : set.params)
    if (std::find(m.params.begin(), m.params.end(), name) == m.params.end())
      throw InputError("'" + name + "' is not a parameter of the model");
  for (const auto& [name, v] : set.ics)
    if (!m.state_index(name)) throw InputError("'" + name + "' is not a state of the model");

  const auto colon = tspan.find(':');
  if (colon == std::string::npos) throw InputError("--tspan must be a:b");
  double t0 = 0, t1 = 0;
  try {
    t0 = std::stod(tspan.substr(0, colon));
    t1 = std::stod(tspan.substr(colon + 1));
  } catch (const std::exception&) {
    throw InputError("--tspan must be a:b with numeric endpoints");
  }
  if (!(t1 > t0)) throw InputError("--tspan end must exceed its start");

  const Trajectory tr = integrate(m, set, uniform_grid(t0, t1, points), {rtol, atol});
  if (out.empty() || out == "-") {
    write_csv(std::cout, tr);
  } else {
    std::ofstream os(out, std::ios::binary);
    if (!os) throw InputError("cannot write '" + out + "'");
    write_csv(os, tr);
  }
  std::cerr << tr.steps << " steps, " << tr.rejected << " rejected\n";
  return kOk;
}

int cmd_cases(const std::string& level, std::uint64_t seed, std::optional<double> timeout, bool json, bool all) {
  RegressionBudgets b;
  double t = 60;
  std::size_t mm = b.global.max_monomials;
  apply_env(t, mm);
  if (timeout) t = *timeout;
  b.global.timeout = to_ms(t);
  b.global.max_monomials = mm;
  b.global.seed = seed;
  b.combos.seeds = certification_seeds(seed);
  const RegressionReport rep = run_regression(corpus(), *parse_case_level(level), b);
  if (json) {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["level"] = to_string(rep.level);
    j["failures"] = rep.failures();
    j["checks"] = nlohmann::json::array();
    for (const auto& c : rep.checks)
      j["checks"].push_back({{"case", c.case_name},
                             {"check", c.check},
                             {"expected", c.expected},
                             {"actual", c.actual},
                             {"anchor", c.anchor},
                             {"pass", c.pass},
                             {"downgraded", c.downgraded}});
    j["errors"] = rep.errors;
    std::cout << j.dump(2) << '\n';
  } else {
    rep.print(std::cout, !all);
  }
  return rep.passed() ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structural identifiability analysis for rational ODE models"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tool_version()));

  std::string path, level = "local", check, tspan = "0:10", out, case_level = "local";
  std::uint64_t seed = kDefaultSeed;
  std::optional<std::size_t> order, global_order, max_monomials;
  std::optional<double> timeout;
  bool json = false, strict = false, all = false;
  unsigned seeds = 3;
  std::vector<std::string> params, ics, inputs;
  std::size_t points = 201;
  double rtol = 1e-8, atol = 1e-8;

  auto* analyze_cmd = app.add_subcommand("analyze", "local / global identifiability and combinations");
  analyze_cmd->add_option("model", path, "model file (.ode)")->required();
  analyze_cmd->add_option("--level", level, "local | global | full")
      ->check(CLI::IsMember({"local", "global", "full"}));
  analyze_cmd->add_option("--seed", seed, "random seed (printed in every report)");
  analyze_cmd->add_option("--order", order, "number of output Taylor coefficients");
  analyze_cmd->add_option("--global-order", global_order, "coefficients for the polynomial system");
  analyze_cmd->add_option("--timeout", timeout, "global-stage wall clock budget in seconds (env STRUCTID_TIMEOUT)");
  analyze_cmd->add_option("--max-monomials", max_monomials, "basis size budget (env STRUCTID_MAX_MONOMIALS)");
  analyze_cmd->add_flag("--json", json, "machine-readable report");
  analyze_cmd->add_flag("--strict", strict, "require params:/inputs: declarations");

  auto* funcs_cmd = app.add_subcommand("funcs", "check or discover identifiable functions");
  funcs_cmd->add_option("model", path, "model file (.ode)")->required();
  funcs_cmd->add_option("--check", check, "comma-separated expressions to check");
  funcs_cmd->add_option("--seed", seed, "first certification seed");
  funcs_cmd->add_option("--seeds", seeds, "number of certification seeds")->check(CLI::Range(1u, 100u));
  funcs_cmd->add_flag("--json", json, "machine-readable report");
  funcs_cmd->add_flag("--strict", strict, "require params:/inputs: declarations");

  auto* sim_cmd = app.add_subcommand("simulate", "integrate the model and write the outputs as CSV");
  sim_cmd->add_option("model", path, "model file (.ode)")->required();
  sim_cmd->add_option("--params", params, "name=value[,name=value...]");
  sim_cmd->add_option("--ic", ics, "state=value[,state=value...]");
  sim_cmd->add_option("--input", inputs, "constant input values, name=value");
  sim_cmd->add_option("--tspan", tspan, "a:b");
  sim_cmd->add_option("--points", points, "grid points including both ends")->check(CLI::Range(2, 10000000));
  sim_cmd->add_option("--rtol", rtol, "relative tolerance");
  sim_cmd->add_option("--atol", atol, "absolute tolerance");
  sim_cmd->add_option("--out", out, "CSV path (default: standard output)");
  sim_cmd->add_flag("--strict", strict, "require params:/inputs: declarations");

  auto* cases_cmd = app.add_subcommand("cases", "regression over the embedded case corpus");
  cases_cmd->add_option("--level", case_level, "local | global | combos")
      ->check(CLI::IsMember({"local", "global", "combos"}));
  cases_cmd->add_option("--seed", seed, "random seed");
  cases_cmd->add_option("--timeout", timeout, "global-stage budget per case in seconds");
  cases_cmd->add_flag("--json", json, "machine-readable table");
  cases_cmd->add_flag("--all", all, "print passing checks too");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kParse;
  }

  try {
    if (*analyze_cmd) return cmd_analyze(path, level, seed, order, global_order, timeout, max_monomials, json, strict);
    if (*funcs_cmd) return cmd_funcs(path, check, seed, seeds, json, strict);
    if (*sim_cmd) return cmd_simulate(path, params, ics, inputs, tspan, points, rtol, atol, out, strict);
    if (*cases_cmd) return cmd_cases(case_level, seed, timeout, json, all);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParse;
  } catch (const IntegrationFailure& e) {
    std::cerr << "error: integration failed at t = " << e.t_reached() << ": " << e.what() << '\n';
    return kAnalysis;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kAnalysis;
  }
  return kOk;
}
