#include "structid/numeric.hpp"

#include "structid/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace structid {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// Continuous extension (Shampine), 4th order.
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

class System {
 public:
  System(const ModelIR& model, const ParameterSet& set) : model_(model), set_(set) {
    for (const auto& p : model.params)
      if (!set.params.count(p)) throw std::invalid_argument("no value for parameter '" + p + "'");
    for (const auto& u : model.inputs)
      if (!set.inputs.count(u)) throw std::invalid_argument("no function for input '" + u + "'");
  }

  std::vector<double> initial() const {
    std::vector<double> y;
    for (const auto& s : model_.states) {
      if (auto it = set_.ics.find(s); it != set_.ics.end())
        y.push_back(it->second);
      else if (auto k = model_.known_ics.find(s); k != model_.known_ics.end())
        y.push_back(to_double(k->second));
      else
        throw std::invalid_argument("no initial value for state '" + s + "'");
    }
    return y;
  }

  double eval(const Expr& e, double t, const std::vector<double>& y) const {
    return eval_expr<double>(
        e,
        [&](const Expr& s) -> double {
          switch (s.kind()) {
            case SymbolKind::State: return y[*model_.state_index(s.name())];
            case SymbolKind::Parameter: return set_.params.at(s.name());
            case SymbolKind::Input: return set_.inputs.at(s.name())(t);
          }
          return 0.0;
        },
        [](const Rational& r) { return to_double(r); });
  }

  void rhs(double t, const std::vector<double>& y, std::vector<double>& dy) const {
    for (std::size_t i = 0; i < y.size(); ++i) dy[i] = eval(model_.state_rhs[i], t, y);
  }

 private:
  const ModelIR& model_;
  const ParameterSet& set_;
};

}  // namespace

std::vector<double> uniform_grid(double t0, double t1, std::size_t n) {
  if (n < 2) throw std::invalid_argument("a grid needs at least two points");
  std::vector<double> g(n);
  for (std::size_t k = 0; k < n; ++k) g[k] = t0 + (t1 - t0) * static_cast<double>(k) / static_cast<double>(n - 1);
  g.back() = t1;
  return g;
}

Trajectory integrate(const ModelIR& model, const ParameterSet& set, const std::vector<double>& grid,
                     const IntegrateOptions& opt) {
  if (grid.size() < 2) throw std::invalid_argument("grid must contain at least two times");
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (!(grid[k] > grid[k - 1])) throw std::invalid_argument("grid must be strictly increasing");

  const System sys(model, set);
  Trajectory tr;
  tr.times = grid;
  for (const auto& [name, g] : model.outputs) tr.outputs.push_back(name);
  tr.values.assign(model.outputs.size(), {});

  const std::size_t n = model.states.size();
  std::vector<double> y = sys.initial();
  auto record = [&](double t, const std::vector<double>& state) {
    for (std::size_t i = 0; i < model.outputs.size(); ++i) {
      const double v = sys.eval(model.outputs[i].second, t, state);
      if (!std::isfinite(v)) throw IntegrationFailure("non-finite output value", t);
      tr.values[i].push_back(v);
    }
  };

  double t = grid.front();
  const double tend = grid.back();
  std::size_t next = 0;
  record(t, y);
  ++next;

  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), yerr(n);
  sys.rhs(t, y, k1);

  auto norm = [&](const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>& v) {
    if (n == 0) return 0.0;
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = opt.abstol + opt.reltol * std::max(std::abs(a[i]), std::abs(b[i]));
      s += (v[i] / sc) * (v[i] / sc);
    }
    return std::sqrt(s / static_cast<double>(n));
  };

  // Initial step (Hairer, Norsett & Wanner, II.4).
  double h;
  {
    const double d0 = norm(y, y, y), d1n = norm(y, y, k1);
    double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
    h0 = std::min(h0, tend - t);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h0 * k1[i];
    sys.rhs(t + h0, ytmp, k2);
    for (std::size_t i = 0; i < n; ++i) yerr[i] = (k2[i] - k1[i]) / h0;
    const double d2 = norm(y, y, yerr);
    const double h1 = std::max(d1n, d2) <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                                                  : std::pow(0.01 / std::max(d1n, d2), 1.0 / 5);
    h = std::min(100 * h0, h1);
  }

  constexpr double safe = 0.9, beta = 0.04, expo1 = 0.2 - beta * 0.75, facc1 = 1.0 / 0.2, facc2 = 1.0 / 10.0;
  double facold = 1e-4;
  bool last_rejected = false;

  const bool fixed = opt.fixed_step > 0;
  if (fixed) h = opt.fixed_step;

  while (next < grid.size()) {
    if (fixed) h = opt.fixed_step;
    if (tr.steps + tr.rejected >= opt.max_steps) throw IntegrationFailure("maximum number of steps reached", t);
    if (t + h > tend) h = tend - t;
    if (h <= std::abs(t) * 1e-15 || h <= 0) throw IntegrationFailure("step size underflow", t);

    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    sys.rhs(t + c2 * h, ytmp, k2);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    sys.rhs(t + c3 * h, ytmp, k3);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    sys.rhs(t + c4 * h, ytmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    sys.rhs(t + c5 * h, ytmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    sys.rhs(t + h, ytmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    sys.rhs(t + h, ynew, k7);
    for (std::size_t i = 0; i < n; ++i)
      yerr[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);

    const double err = fixed ? 0.0 : norm(y, ynew, yerr);
    if (!std::isfinite(err)) throw IntegrationFailure("non-finite state during integration", t);
    const double fac11 = std::pow(std::max(err, 1e-300), expo1);
    if (err <= 1.0) {
      // Dense output on [t, t + h] for the grid points it covers.
      const double tnew = (tend - (t + h) <= std::abs(tend) * 1e-14) ? tend : t + h;
      while (next < grid.size() && grid[next] <= tnew) {
        const double theta = (grid[next] - t) / h, theta1 = 1.0 - theta;
        std::vector<double> yd(n);
        for (std::size_t i = 0; i < n; ++i) {
          const double r2 = ynew[i] - y[i];
          const double r3 = h * k1[i] - r2;
          const double r4 = r2 - h * k7[i] - r3;
          const double r5 = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
          yd[i] = y[i] + theta * (r2 + theta1 * (r3 + theta * (r4 + theta1 * r5)));
        }
        record(grid[next], grid[next] == tnew ? ynew : yd);
        ++next;
      }
      ++tr.steps;
      facold = std::max(err, 1e-4);
      double fac = fac11 / std::pow(facold, beta);
      fac = std::max(facc2, std::min(facc1, fac / safe));
      double hnew = h / fac;
      if (last_rejected) hnew = std::min(hnew, h);
      last_rejected = false;
      t = tnew;
      y.swap(ynew);
      k1.swap(k7);  // FSAL
      h = hnew;
    } else {
      ++tr.rejected;
      last_rejected = true;
      h /= std::min(facc1, fac11 / safe);
    }
  }
  return tr;
}

ComparisonReport compare(const std::vector<Trajectory>& trajectories) {
  ComparisonReport rep;
  rep.trajectories = trajectories;
  for (std::size_t a = 0; a < trajectories.size(); ++a) {
    for (std::size_t b = a + 1; b < trajectories.size(); ++b) {
      const auto& A = trajectories[a];
      const auto& B = trajectories[b];
      if (A.times != B.times) rep.grids_identical = false;
      const std::size_t m = std::min(A.times.size(), B.times.size());
      for (std::size_t i = 0; i < std::min(A.values.size(), B.values.size()); ++i) {
        for (std::size_t k = 0; k < m; ++k) {
          const double d = std::abs(A.values[i][k] - B.values[i][k]);
          if (d > rep.max_abs_diff) {
            rep.max_abs_diff = d;
            rep.argmax_time = A.times[k];
            rep.argmax_output = A.outputs[i];
            rep.set_a = a;
            rep.set_b = b;
          }
        }
      }
    }
  }
  return rep;
}

ComparisonReport falsification_demo(const ModelIR& model, const std::vector<ParameterSet>& sets,
                                    const std::vector<double>& grid, const IntegrateOptions& options) {
  if (sets.size() < 2) throw std::invalid_argument("a falsification demo needs at least two parameter sets");
  std::vector<Trajectory> trs;
  for (const auto& s : sets) trs.push_back(integrate(model, s, grid, options));
  return compare(trs);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_csv(std::ostream& os, const Trajectory& tr) {
  os << "time";
  for (const auto& o : tr.outputs) os << ',' << csv_field(o);
  os << "\r\n";
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    os << number(tr.times[k]);
    for (const auto& v : tr.values) os << ',' << number(v[k]);
    os << "\r\n";
  }
}

}  // namespace structid
