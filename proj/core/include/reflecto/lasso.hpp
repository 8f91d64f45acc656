#pragma once

#include <functional>

#include "reflecto/linalg.hpp"

namespace reflecto::lasso {

/// min_{z, xi} 0.5 ||A z + xi 1 - y||^2 + beta ||z||_1
struct Problem {
  Matrix A;
  Vec y;
  double beta = 0.0;
};

struct Solution {
  Vec z;
  double xi = 0.0;
  double objective = 0.0;
  long iterations = 0;  // full sweeps
  bool converged = false;
  // At convergence: the largest violation of the stationarity conditions.
  // solve_min_norm stores the interpolation gap ||A z + xi 1 - y||_inf here.
  double kkt_residual = 0.0;
};

struct SolveOptions {
  double tol = 1e-8;        // max coordinate change per sweep
  long max_sweeps = 100000;
  // optional per-sweep observer (sweep number, objective value)
  std::function<void(long, double)> on_sweep;
};

/// Cyclic coordinate descent with per-coordinate soft thresholding; the
/// unpenalized intercept is re-centered to the mean residual after every
/// sweep. Stops once the largest coordinate change falls below tol and the
/// stationarity residual is within 10 * tol, or the sweep budget runs out.
Solution solve(const Problem& problem, const SolveOptions& opt = {});
Solution solve(const Problem& problem, double tol, long max_sweeps);

/// Minimum-l1-norm interpolation by a decreasing-beta homotopy: solves the
/// problem along a geometric beta sequence (factor 10), warm-started, down
/// to beta_floor. Non-interpolable data shows up as a large gap, never as
/// an exception.
Solution solve_min_norm(const Matrix& A, const Vec& y, double beta_floor = 1e-7,
                        const SolveOptions& opt = {.tol = 1e-10});

double objective(const Matrix& A, const Vec& z, double xi, const Vec& y, double beta);

/// Indices with |z_j| > tol, ascending.
std::vector<std::size_t> active_set(const Vec& z, double tol);

}  // namespace reflecto::lasso
