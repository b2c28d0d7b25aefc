#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "pmatch/model.hpp"

// Cross-engine agreement harness: checks the closed forms against the
// enumeration oracle on a parameter grid, the calibration round-trip, and
// the Monte Carlo estimates against exact values.

namespace pmatch::validation {

struct Options {
  int max_L = 6;          // oracle grid covers L = 2..max_L
  int grid_points = 9;    // a, e take values i/(grid_points+1), i = 1..points
  std::uint64_t trials = 100000;
  std::uint64_t seed = 20190401;
  std::vector<double> epsilons = {0.0, 0.25, 0.5};
};

// Test seam: replaces an analytic statistic so the harness can be shown to
// catch a corrupted constant. Production callers leave these empty.
struct AnalyticOverrides {
  std::function<double(const ModelParams&)> p_first;
  std::function<double(const ModelParams&)> rank_loss;
};

struct CheckResult {
  std::string statistic;
  double worst_abs_dev = 0;
  double tolerance = 0;
  bool pass = false;
  std::string detail;  // where the worst deviation occurred
};

struct Report {
  std::vector<CheckResult> checks;
  bool all_pass = false;
};

Report run(const Options& options, const AnalyticOverrides& overrides = {});
void print(std::ostream& out, const Report& report);

}  // namespace pmatch::validation
