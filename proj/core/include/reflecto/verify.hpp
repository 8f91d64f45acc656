#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "reflecto/data.hpp"
#include "reflecto/dict.hpp"
#include "reflecto/lasso.hpp"

namespace reflecto::verify {

struct Check {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;  // which claim the check instantiates
};

struct Report {
  std::vector<Check> checks;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  void merge(const Report& other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
  }
};

struct EquivalenceOptions {
  double solver_tol = 1e-10;
  long max_sweeps = 200000;
  double fit_tol = 1e-8;
  double objective_tol = 1e-6;  // relative
};

/// Builds the dictionary for the requested depth (2 or 3), solves, then
/// reconstructs; reports the worst fit deviation between the network and
/// A z* + xi* 1 on the training rows and the relative objective gap.
Report check_equivalence(const data::Dataset& ds, int layers, double beta,
                         const EquivalenceOptions& opt = {});

/// Samples random inputs and compares the feature value against
/// r(w) * min(distance to the two reflection planes) for a three-layer
/// feature with recorded provenance.
Report check_distance_formula(const dict::FeatureSpec& spec, const data::Dataset& ds,
                              int samples, std::uint64_t seed = 0);

/// Kinks of a piecewise-linear scalar function on [lo, hi]: scans a uniform
/// grid, flags slope changes through second differences above
/// tol * (local slope scale), then refines each by bisection down to
/// (hi - lo) / grid_n / 2^10.
std::vector<double> detect_breakpoints_1d(const std::function<double(double)>& f,
                                          double lo, double hi, int grid_n = 4096,
                                          double tol = 1e-6);

/// Projects the data along the feature's weight, detects the breakpoints of
/// the one-dimensional cross-section, and tests each against the closure of
/// projected reflections up to the depth-dependent order (0 for L=2, 1 for
/// L=3, 2(L-3) for deeper).
Report check_reflection_order(const dict::FeatureSpec& spec, const data::Dataset& ds,
                              int grid_n = 4096);

/// Worst normalized |w . delta| over all columns of a three-layer
/// dictionary and their recorded spanning differences.
Report check_orthogonality(const dict::Dictionary& dictionary);

/// Reflection order the dictionary depth is allowed to reach.
int max_reflection_order(int layers);

}  // namespace reflecto::verify
