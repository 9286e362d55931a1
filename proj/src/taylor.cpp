#include "structid/taylor.hpp"

#include <algorithm>
#include <random>

namespace structid {

UnknownSet::UnknownSet(const ModelIR& model) {
  for (const auto& s : model.states)
    if (!model.is_known_ic(s)) items_.push_back({s, true});
  for (const auto& p : model.params) items_.push_back({p, false});
}

std::optional<std::size_t> UnknownSet::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < items_.size(); ++i)
    if (items_[i].name == name) return i;
  return std::nullopt;
}

std::vector<std::string> UnknownSet::names() const {
  std::vector<std::string> out;
  out.reserve(items_.size());
  for (const auto& u : items_) out.push_back(u.name);
  return out;
}

SamplePoint sample_point(const ModelIR& model, const UnknownSet& unknowns, std::uint64_t seed, std::size_t order,
                         unsigned attempt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), attempt};
  std::mt19937_64 rng(seq);
  std::uniform_int_distribution<std::uint64_t> dist(1, kMersenne61 - 1);
  SamplePoint pt;
  pt.seed = seed;
  pt.attempt = attempt;
  pt.values.reserve(unknowns.size());
  for (std::size_t i = 0; i < unknowns.size(); ++i) pt.values.emplace_back(dist(rng));
  for (const auto& u : model.inputs) {
    auto& c = pt.inputs[u];
    for (std::size_t k = 0; k < order; ++k) c.emplace_back(dist(rng));
  }
  return pt;
}

std::vector<std::pair<std::string, JetSeries>> picard_expand(const ModelIR& model, const UnknownSet& unknowns,
                                                             const SamplePoint& point, std::size_t order) {
  using J = JetScalar<Fp>;
  const std::size_t L = unknowns.size();
  if (point.values.size() != L) throw std::invalid_argument("sample point does not match the unknowns");

  std::vector<J> x0;
  for (const auto& s : model.states) {
    if (auto it = model.known_ics.find(s); it != model.known_ics.end()) {
      x0.emplace_back(Fp::from_rational(it->second));
    } else {
      const std::size_t i = *unknowns.index_of(s);
      x0.push_back(J::seed(point.values[i], i, L));
    }
  }
  std::map<std::string, J> params;
  for (const auto& p : model.params) {
    const std::size_t i = *unknowns.index_of(p);
    params.emplace(p, J::seed(point.values[i], i, L));
  }
  std::map<std::string, JetSeries> inputs;
  for (const auto& u : model.inputs) {
    auto it = point.inputs.find(u);
    if (it == point.inputs.end() || it->second.size() < order)
      throw std::invalid_argument("sample point lacks coefficients for input '" + u + "'");
    std::vector<J> c;
    for (std::size_t k = 0; k < order; ++k) c.emplace_back(it->second[k]);
    inputs.emplace(u, JetSeries(std::move(c)));
  }

  auto series = taylor_outputs<J>(model, std::span<const J>(x0), params, inputs, order,
                                  [](const Rational& r) { return J(Fp::from_rational(r)); });
  std::vector<std::pair<std::string, JetSeries>> out;
  for (std::size_t i = 0; i < series.size(); ++i) out.emplace_back(model.outputs[i].first, std::move(series[i]));
  return out;
}

std::size_t default_order(const ModelIR& model) { return UnknownSet(model).size() + 1; }

}  // namespace structid
