#pragma once

#include "structid/eval.hpp"
#include "structid/jet.hpp"
#include "structid/model.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace structid {

/// Unrecoverable failure of an analysis stage (as opposed to a parse error).
class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything the output depends on that is not known: initial values of
/// the states without a declared initial condition, then all parameters.
struct Unknown {
  std::string name;
  bool is_state = false;

  /// `x(0)` for states, the bare name for parameters.
  std::string label() const { return is_state ? name + "(0)" : name; }
};

class UnknownSet {
 public:
  UnknownSet() = default;
  explicit UnknownSet(const ModelIR& model);

  std::size_t size() const { return items_.size(); }
  const Unknown& operator[](std::size_t i) const { return items_[i]; }
  const std::vector<Unknown>& items() const { return items_; }
  std::optional<std::size_t> index_of(std::string_view name) const;
  std::vector<std::string> names() const;

 private:
  std::vector<Unknown> items_;
};

/// A point in the unknowns' space together with the Taylor coefficients of
/// every input at t = 0. Generated deterministically from (seed, attempt).
struct SamplePoint {
  std::vector<Fp> values;                          // aligned with UnknownSet
  std::map<std::string, std::vector<Fp>> inputs;  // coefficients 0..order-1
  std::uint64_t seed = 0;
  unsigned attempt = 0;
};

/// Uniform draws from [1, P-1] for each unknown and input coefficient.
SamplePoint sample_point(const ModelIR& model, const UnknownSet& unknowns, std::uint64_t seed, std::size_t order,
                         unsigned attempt = 0);

/// Truncated Taylor expansion at t = 0 of every output, computed by Picard
/// iteration x <- x(0) + integral f(x) dt with growing truncation: sweep k
/// fixes coefficient k of every state. Works over any coefficient ring T.
///   x0       initial value per state (aligned with model.states)
///   params   value per parameter name
///   inputs   series per input name (order >= `order`)
///   make     Rational -> T embedding for literals
template <class T, class Make>
std::vector<Series<T>> taylor_outputs(const ModelIR& model, std::span<const T> x0,
                                      const std::map<std::string, T>& params,
                                      const std::map<std::string, Series<T>>& inputs, std::size_t order,
                                      const Make& make) {
  if (order == 0) throw std::invalid_argument("series order must be positive");
  const std::size_t n = model.states.size();
  std::vector<std::vector<T>> coeffs(n);
  for (std::size_t i = 0; i < n; ++i) coeffs[i].push_back(x0[i]);

  auto evaluate = [&](const Expr& e, std::size_t len) {
    return eval_expr<Series<T>>(
        e,
        [&](const Expr& s) -> Series<T> {
          switch (s.kind()) {
            case SymbolKind::State:
              return Series<T>(std::vector<T>(coeffs[*model.state_index(s.name())].begin(),
                                              coeffs[*model.state_index(s.name())].begin() +
                                                  static_cast<std::ptrdiff_t>(len)));
            case SymbolKind::Parameter:
              return Series<T>::constant(params.at(s.name()), len);
            case SymbolKind::Input: {
              const auto& u = inputs.at(s.name());
              if (u.order() < len) throw std::invalid_argument("input series shorter than the expansion order");
              return u.truncated(len);
            }
          }
          throw std::logic_error("unreachable");
        },
        [&](const Rational& c) { return Series<T>::constant(make(c), len); });
  };

  for (std::size_t k = 1; k < order; ++k) {
    std::vector<Series<T>> rates;
    rates.reserve(n);
    for (std::size_t i = 0; i < n; ++i) rates.push_back(evaluate(model.state_rhs[i], k));
    const T inv_k = make(Rational(1)) / make(Rational(static_cast<long long>(k)));
    for (std::size_t i = 0; i < n; ++i) coeffs[i].push_back(rates[i][k - 1] * inv_k);
  }

  std::vector<Series<T>> out;
  out.reserve(model.outputs.size());
  for (const auto& [name, g] : model.outputs) out.push_back(evaluate(g, order));
  return out;
}

/// Output series whose coefficients carry value and gradient with respect to
/// the unknowns, at `point`. Known initial conditions and inputs have zero
/// gradient. Throws ZeroDivisor if a denominator vanishes at the point.
std::vector<std::pair<std::string, JetSeries>> picard_expand(const ModelIR& model, const UnknownSet& unknowns,
                                                             const SamplePoint& point, std::size_t order);

/// One more coefficient per output than there are unknowns.
std::size_t default_order(const ModelIR& model);

}  // namespace structid
