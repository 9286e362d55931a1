#pragma once

#include "structid/model.hpp"

#include <functional>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace structid {

class IntegrationFailure : public std::runtime_error {
 public:
  IntegrationFailure(const std::string& what, double t_reached)
      : std::runtime_error(what), t_reached_(t_reached) {}
  double t_reached() const { return t_reached_; }

 private:
  double t_reached_;
};

/// Numeric values for one simulation. Initial values missing from `ics`
/// are taken from the model's declared initial conditions.
struct ParameterSet {
  std::map<std::string, double> params;
  std::map<std::string, double> ics;
  std::map<std::string, std::function<double(double)>> inputs;
};

struct IntegrateOptions {
  double reltol = 1e-8;
  double abstol = 1e-8;
  std::size_t max_steps = 1000000;
  double fixed_step = 0;  // > 0 disables error control (convergence studies)
};

struct Trajectory {
  std::vector<double> times;
  std::vector<std::string> outputs;
  std::vector<std::vector<double>> values;  // values[i][k]: output i at times[k]
  std::size_t steps = 0;
  std::size_t rejected = 0;
};

/// `n` equally spaced points covering [t0, t1], endpoints included.
std::vector<double> uniform_grid(double t0, double t1, std::size_t n);

/// Dormand-Prince 5(4) with PI step-size control; outputs are sampled on
/// `grid` (strictly increasing, grid[0] is the initial time) through the
/// 4th-order continuous extension.
Trajectory integrate(const ModelIR& model, const ParameterSet& set, const std::vector<double>& grid,
                     const IntegrateOptions& options = {});

struct ComparisonReport {
  double max_abs_diff = 0;
  double argmax_time = 0;
  std::string argmax_output;
  std::size_t set_a = 0, set_b = 0;  // pair attaining the maximum
  bool grids_identical = true;
  std::vector<Trajectory> trajectories;
};

/// Integrates every set on the shared grid and reports the largest
/// pairwise output difference.
ComparisonReport falsification_demo(const ModelIR& model, const std::vector<ParameterSet>& sets,
                                    const std::vector<double>& grid, const IntegrateOptions& options = {1e-12, 1e-12});

ComparisonReport compare(const std::vector<Trajectory>& trajectories);

/// `time,<outputs...>` with RFC-4180 quoting and 17 significant digits.
void write_csv(std::ostream& os, const Trajectory& tr);

}  // namespace structid
