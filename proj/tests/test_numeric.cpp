#include "doctest.h"

#include "structid/cases.hpp"
#include "structid/global_id.hpp"
#include "structid/numeric.hpp"

#include <cmath>
#include <sstream>

using namespace structid;

namespace {

const ModelIR& exp_decay() {
  static const ModelIR m = parse_model("x'(t) = -k * x(t)\ny(t) = x(t)");
  return m;
}

double max_closed_form_error(const Trajectory& tr, double k, double x0) {
  double err = 0;
  for (std::size_t i = 0; i < tr.times.size(); ++i)
    err = std::max(err, std::abs(tr.values[0][i] - x0 * std::exp(-k * tr.times[i])));
  return err;
}

ParameterSet bilinear_set(double p, double q) { return {{{"p", p}, {"q", q}}, {{"x", 1.0}}, {}}; }

ParameterSet pk_set(double a01, double a12, double a21, double x2) {
  return {{{"a01", a01}, {"a12", a12}, {"a21", a21}, {"b", 1.0}},
          {{"x1", 10.0}, {"x2", x2}},
          {{"u", [](double) { return 0.0; }}}};
}

}  // namespace

TEST_CASE("exponential decay matches its closed form") {
  const auto tr = integrate(exp_decay(), {{{"k", 1.0}}, {{"x", 1.0}}, {}}, uniform_grid(0, 5, 501), {1e-12, 1e-12});
  CHECK(max_closed_form_error(tr, 1.0, 1.0) <= 1e-9);
  CHECK(tr.times.front() == 0.0);
  CHECK(tr.times.back() == 5.0);
  CHECK(tr.outputs == std::vector<std::string>{"y"});
}

TEST_CASE("constant dynamics stay exactly constant") {
  const ModelIR m = parse_model("x'(t) = 0\ny(t) = x(t)");
  const auto tr = integrate(m, {{}, {{"x", 0.375}}, {}}, uniform_grid(0, 10, 11));
  for (double v : tr.values[0]) CHECK(v == 0.375);
}

TEST_CASE("fixed-step error falls at fifth order") {
  // Sampled at step endpoints, so the continuous extension plays no role.
  auto err = [](double h) {
    IntegrateOptions o;
    o.fixed_step = h;
    const auto tr = integrate(exp_decay(), {{{"k", 2.0}}, {{"x", 1.0}}, {}}, uniform_grid(0, 2, 3), o);
    return max_closed_form_error(tr, 2.0, 1.0);
  };
  double prev = err(0.1);
  for (double h : {0.05, 0.025, 0.0125}) {
    const double e = err(h);
    CAPTURE(h);
    CHECK(prev / e >= 4.0);
    CHECK(prev / e > 20.0);  // 2^5 asymptotically
    prev = e;
  }
}

TEST_CASE("tighter tolerances give smaller errors") {
  double prev = 1;
  for (double tol : {1e-4, 1e-6, 1e-8, 1e-10, 1e-12}) {
    const auto tr = integrate(exp_decay(), {{{"k", 1.0}}, {{"x", 1.0}}, {}}, uniform_grid(0, 5, 51), {tol, tol});
    const double e = max_closed_form_error(tr, 1.0, 1.0);
    CHECK(e < prev);
    CHECK(e <= 100 * tol);
    prev = e;
  }
}

TEST_CASE("SIR conserves the population") {
  const ModelIR m = parse_model(
      "S'(t) = -beta * S(t) * I(t)\nI'(t) = beta * S(t) * I(t) - gamma * I(t)\nR'(t) = gamma * I(t)\n"
      "yS(t) = S(t)\nyI(t) = I(t)\nyR(t) = R(t)");
  const auto tr = integrate(m, {{{"beta", 0.5}, {"gamma", 0.25}}, {{"S", 0.99}, {"I", 0.01}, {"R", 0.0}}, {}},
                            uniform_grid(0, 100, 201), {1e-10, 1e-10});
  for (std::size_t k = 0; k < tr.times.size(); ++k)
    CHECK(std::abs(tr.values[0][k] + tr.values[1][k] + tr.values[2][k] - 1.0) <= 1e-9);
  CHECK(tr.rejected < tr.steps);
}

TEST_CASE("inputs are evaluated along the trajectory") {
  const ModelIR m = parse_model("x'(t) = u(t)\ny(t) = x(t)");
  ParameterSet s{{}, {{"x", 0.0}}, {{"u", [](double t) { return std::cos(t); }}}};
  const auto tr = integrate(m, s, uniform_grid(0, 3, 31), {1e-11, 1e-11});
  for (std::size_t k = 0; k < tr.times.size(); ++k) CHECK(std::abs(tr.values[0][k] - std::sin(tr.times[k])) <= 1e-9);
}

TEST_CASE("bilinear parameter sets with a common product overlay") {
  const ModelIR m = corpus_case("bilinear").model();
  const auto rep = falsification_demo(
      m, {bilinear_set(2, 3), bilinear_set(6, 1), bilinear_set(0.5, 12), bilinear_set(1.5, 4)}, uniform_grid(0, 2, 201));
  CHECK(rep.grids_identical);
  CHECK(rep.trajectories.size() == 4);
  CHECK(rep.max_abs_diff <= 1e-8);
  const auto other = falsification_demo(m, {bilinear_set(2, 3), bilinear_set(2, 4)}, uniform_grid(0, 2, 201));
  CHECK(other.max_abs_diff > 1e-2);
}

TEST_CASE("two-compartment exchange pair overlays without input") {
  const ModelIR m = corpus_case("pk").model();
  const auto rep = falsification_demo(m, {pk_set(1, 2, 0.5, 0), pk_set(2, 1, 0.5, 10)}, uniform_grid(0, 10, 401));
  CHECK(rep.max_abs_diff <= 1e-8);
  CHECK(rep.set_a == 0);
  CHECK(rep.set_b == 1);
  CHECK(rep.argmax_output == "y");
}

TEST_CASE("identical parameter sets differ by exactly zero") {
  const ModelIR m = corpus_case("sir").model();
  const ParameterSet s{{{"beta", 0.3}, {"gamma", 0.1}}, {{"S", 0.9}, {"I", 0.1}, {"R", 0.0}}, {}};
  const auto rep = falsification_demo(m, {s, s, s}, uniform_grid(0, 30, 101));
  CHECK(rep.max_abs_diff == 0.0);
}

// An overlay with distinct parameter values means the analysed model must
// report some unknown as not globally identifiable.
TEST_CASE("overlays are coherent with the global verdicts") {
  auto has_non_global = [](const ModelIR& m) {
    const auto r = assess_global(m);
    return std::any_of(r.verdicts.begin(), r.verdicts.end(),
                       [](const GlobalVerdict& v) { return v.kind != GlobalKind::GloballyIdentifiable; });
  };
  CHECK(has_non_global(corpus_case("bilinear").model()));
  // The exchange pair is run with u = 0, which is the model without input.
  CHECK(has_non_global(fix_inputs(corpus_case("pk").model(), Rational(0))));
}

TEST_CASE("exact Taylor coefficients match the numeric trajectory near zero") {
  for (const auto& c : corpus()) {
    CAPTURE(c.name);
    const ModelIR m = c.model();
    ParameterSet set;
    std::map<std::string, Rational> params;
    std::vector<Rational> x0;
    int k = 0;
    for (const auto& p : m.params) {
      params[p] = Rational(1, 2 + (k % 5));
      set.params[p] = to_double(params[p]);
      ++k;
    }
    for (const auto& s : m.states) {
      x0.emplace_back(1 + (k % 3), 2);
      set.ics[s] = to_double(x0.back());
      ++k;
    }
    std::map<std::string, Series<Rational>> inputs;
    for (const auto& u : m.inputs) {
      inputs.emplace(u, Series<Rational>::constant(Rational(1), 8));
      set.inputs[u] = [](double) { return 1.0; };
    }
    const auto series = taylor_outputs<Rational>(m, std::span<const Rational>(x0), params, inputs, 8,
                                                 [](const Rational& r) { return r; });
    const double h = 1e-3;
    const auto tr = integrate(m, set, {0.0, h, 2 * h}, {1e-13, 1e-13});
    for (std::size_t o = 0; o < series.size(); ++o) {
      const double c0 = to_double(series[o][0]), c1 = to_double(series[o][1]), c2 = to_double(series[o][2]),
                   c3 = to_double(series[o][3]);
      const auto& y = tr.values[o];
      CHECK(std::abs(y[0] - c0) <= 1e-12);
      CHECK(std::abs((y[1] - y[0]) / h - (c1 + c2 * h)) <= 1e-6);
      CHECK(std::abs((y[2] - 2 * y[1] + y[0]) / (h * h) - (2 * c2 + 6 * c3 * h)) <= 1e-4);
      double poly = 0;
      for (std::size_t j = 8; j-- > 0;) poly = poly * (2 * h) + to_double(series[o][j]);
      CHECK(std::abs(y[2] - poly) <= 1e-10);
    }
  }
}

TEST_CASE("finite-time blow-up is reported") {
  const ModelIR m = parse_model("x'(t) = x(t)^2\ny(t) = x(t)");
  try {
    integrate(m, {{}, {{"x", 1.0}}, {}}, uniform_grid(0, 2, 5));
    FAIL("expected IntegrationFailure");
  } catch (const IntegrationFailure& e) {
    CHECK(e.t_reached() > 0.9);
    CHECK(e.t_reached() <= 1.0 + 1e-6);
  }
}

TEST_CASE("missing values are rejected") {
  CHECK_THROWS_AS(integrate(exp_decay(), {{}, {{"x", 1.0}}, {}}, uniform_grid(0, 1, 3)), std::invalid_argument);
  CHECK_THROWS_AS(integrate(exp_decay(), {{{"k", 1.0}}, {}, {}}, uniform_grid(0, 1, 3)), std::invalid_argument);
  CHECK_THROWS_AS(uniform_grid(0, 1, 1), std::invalid_argument);
}

TEST_CASE("CSV output") {
  const auto tr = integrate(exp_decay(), {{{"k", 1.0}}, {{"x", 1.0}}, {}}, uniform_grid(0, 1, 4), {1e-12, 1e-12});
  std::ostringstream os;
  write_csv(os, tr);
  const std::string csv = os.str();
  CHECK(csv.rfind("time,y\r\n", 0) == 0);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    REQUIRE(line.back() == '\r');
    line.pop_back();
    const auto comma = line.find(',');
    REQUIRE(comma != std::string::npos);
    CHECK(std::stod(line.substr(0, comma)) == tr.times[rows]);
    CHECK(std::stod(line.substr(comma + 1)) == tr.values[0][rows]);  // 17 digits round-trip
    ++rows;
  }
  CHECK(rows == 4);
}
