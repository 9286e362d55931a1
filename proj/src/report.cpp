#include "structid/report.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <sstream>

#ifndef STRUCTID_VERSION
#define STRUCTID_VERSION "0.0.0"
#endif

namespace structid {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

const char* level_name(AnalysisLevel l) {
  switch (l) {
    case AnalysisLevel::Local: return "local";
    case AnalysisLevel::Global: return "global";
    case AnalysisLevel::Full: return "full";
  }
  return "local";
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  std::ostringstream os;
  for (unsigned i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

const char* tool_version() { return STRUCTID_VERSION; }

AnalysisReport analyze(const ModelIR& model, const AnalyzeOptions& options) {
  AnalysisReport r;
  r.tool_version = tool_version();
  r.model_digest = sha256_hex(canonical_text(model));
  r.level = level_name(options.level);
  r.seed = options.seed;
  r.order = options.order.value_or(default_order(model));

  auto t0 = Clock::now();
  const LocalReport local = assess_local(model, {options.seed, r.order, Execution::Parallel});
  r.timings_ms["local"] = ms_since(t0);
  for (std::size_t j = 0; j < local.size(); ++j) {
    const Unknown& u = local.unknowns[j];
    r.unknowns.push_back({u.label(), u.is_state ? "state" : "parameter", to_string(local.verdicts[j]), {}, {}});
  }
  std::ostringstream prob;
  prob << "local verdicts hold with probability at least " << local.probability
       << " (random point over the field of size 2^61-1, seed " << options.seed << ")";
  if (options.level != AnalysisLevel::Local) prob << "; global verdicts are probabilistic and replayable from the seed";
  r.probability = prob.str();

  if (options.level != AnalysisLevel::Local) {
    GlobalOptions go;
    go.seed = options.seed;
    go.order = options.global_order.value_or(r.order);
    go.timeout = options.timeout;
    go.max_monomials = options.max_monomials;
    t0 = Clock::now();
    const GlobalReport g = assess_global(model, go);
    r.timings_ms["global"] = ms_since(t0);
    GlobalSection gs;
    gs.order = g.order;
    gs.basis_computed = g.basis_computed;
    gs.timed_out = g.timed_out;
    bool any_undetermined = false;
    for (std::size_t j = 0; j < g.verdicts.size(); ++j) {
      r.unknowns[j].global = to_string(g.verdicts[j].kind);
      r.unknowns[j].degree = g.verdicts[j].degree;
      any_undetermined = any_undetermined || g.verdicts[j].kind == GlobalKind::Undetermined;
    }
    if (any_undetermined)
      gs.note = "global stage undetermined (" + g.undetermined_reason.value_or("budget exceeded") +
                "); the local verdict stands for the affected unknowns";
    r.global = gs;
  }

  if (options.level == AnalysisLevel::Full) {
    CombosOptions co;
    co.seeds = certification_seeds(options.seed, options.certification_seeds);
    co.order = r.order;
    t0 = Clock::now();
    const CombosReport c = find_identifiable_combinations(model, co);
    r.timings_ms["combinations"] = ms_since(t0);
    CombinationsSection cs;
    cs.seeds = c.seeds;
    cs.target = c.target;
    cs.shortfall = c.shortfall();
    cs.family = c.family;
    for (std::size_t i = 0; i < c.certified.size(); ++i) {
      const bool gen = std::find(c.generators.begin(), c.generators.end(), i) != c.generators.end();
      cs.certified.push_back({c.certified[i].text, c.certified[i].family, gen});
    }
    r.combinations = cs;
  }
  return r;
}

bool global_timed_out_without_result(const AnalysisReport& r) {
  return r.global && r.global->timed_out && !r.global->basis_computed;
}

nlohmann::json to_json(const AnalysisReport& r) {
  using nlohmann::json;
  json j;
  j["schema_version"] = r.schema_version;
  j["tool_version"] = r.tool_version;
  j["model_digest"] = r.model_digest;
  j["level"] = r.level;
  j["seed"] = r.seed;
  j["order"] = r.order;
  j["probability"] = r.probability;
  json us = json::array();
  for (const auto& u : r.unknowns) {
    json e{{"name", u.name}, {"role", u.role}, {"local", u.local}};
    if (u.global) e["global"] = *u.global;
    if (u.degree) e["degree"] = *u.degree;
    us.push_back(std::move(e));
  }
  j["unknowns"] = std::move(us);
  if (r.global) {
    json g{{"order", r.global->order}, {"basis_computed", r.global->basis_computed}, {"timed_out", r.global->timed_out}};
    if (r.global->note) g["note"] = *r.global->note;
    j["global"] = std::move(g);
  }
  if (r.combinations) {
    const auto& c = *r.combinations;
    json list = json::array();
    for (const auto& f : c.certified)
      list.push_back({{"expression", f.expression}, {"family", f.family}, {"generator", f.generator}});
    j["combinations"] = {{"certified", std::move(list)}, {"seeds", c.seeds},           {"target", c.target},
                         {"shortfall", c.shortfall},      {"family", c.family},        {"completeness", c.completeness}};
  }
  j["timings_ms"] = r.timings_ms;
  return j;
}

AnalysisReport report_from_json(const nlohmann::json& j) {
  AnalysisReport r;
  r.schema_version = j.at("schema_version").get<int>();
  if (r.schema_version != kSchemaVersion)
    throw std::invalid_argument("unsupported schema_version " + std::to_string(r.schema_version));
  r.tool_version = j.at("tool_version").get<std::string>();
  r.model_digest = j.at("model_digest").get<std::string>();
  r.level = j.at("level").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.order = j.at("order").get<std::size_t>();
  r.probability = j.at("probability").get<std::string>();
  for (const auto& e : j.at("unknowns")) {
    UnknownEntry u{e.at("name").get<std::string>(), e.at("role").get<std::string>(), e.at("local").get<std::string>(),
                   {}, {}};
    if (e.contains("global")) u.global = e.at("global").get<std::string>();
    if (e.contains("degree")) u.degree = e.at("degree").get<unsigned>();
    r.unknowns.push_back(std::move(u));
  }
  if (j.contains("global")) {
    const auto& g = j.at("global");
    GlobalSection gs;
    gs.order = g.at("order").get<std::size_t>();
    gs.basis_computed = g.at("basis_computed").get<bool>();
    gs.timed_out = g.at("timed_out").get<bool>();
    if (g.contains("note")) gs.note = g.at("note").get<std::string>();
    r.global = gs;
  }
  if (j.contains("combinations")) {
    const auto& c = j.at("combinations");
    CombinationsSection cs;
    for (const auto& f : c.at("certified"))
      cs.certified.push_back(
          {f.at("expression").get<std::string>(), f.at("family").get<std::string>(), f.at("generator").get<bool>()});
    cs.seeds = c.at("seeds").get<std::vector<std::uint64_t>>();
    cs.target = c.at("target").get<std::size_t>();
    cs.shortfall = c.at("shortfall").get<bool>();
    cs.family = c.at("family").get<std::string>();
    cs.completeness = c.at("completeness").get<std::string>();
    r.combinations = cs;
  }
  r.timings_ms = j.at("timings_ms").get<std::map<std::string, double>>();
  return r;
}

void print_report(std::ostream& os, const AnalysisReport& r) {
  os << "model " << r.model_digest.substr(0, 16) << "  seed " << r.seed << "  order " << r.order << "  level "
     << r.level << '\n';
  const bool with_global = r.global.has_value();
  std::size_t w = 8;
  for (const auto& u : r.unknowns) w = std::max(w, u.name.size() + 2);
  os << std::left << std::setw(static_cast<int>(w)) << "unknown" << std::setw(17) << "local";
  if (with_global) os << "global";
  os << '\n';
  for (const auto& u : r.unknowns) {
    os << std::setw(static_cast<int>(w)) << u.name << std::setw(17) << u.local;
    if (with_global) {
      os << u.global.value_or("-");
      if (u.degree && *u.degree > 1) os << " (" << *u.degree << " solutions)";
    }
    os << '\n';
  }
  if (r.global && r.global->note) os << "note: " << *r.global->note << '\n';
  if (r.combinations) {
    const auto& c = *r.combinations;
    os << "identifiable combinations (" << c.completeness << ", certified on " << c.seeds.size() << " seeds):\n";
    for (const auto& f : c.certified)
      if (f.generator) os << "  " << f.expression << '\n';
    std::size_t others = 0;
    for (const auto& f : c.certified) others += f.generator ? 0 : 1;
    if (others) os << "  (+" << others << " dependent certified functions; see --json)\n";
    if (c.shortfall) os << "  shortfall: fewer independent combinations than the " << c.target << " expected\n";
  }
  os << r.probability << '\n';
}

}  // namespace structid
