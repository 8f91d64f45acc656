#include "reflecto/lasso.hpp"

#include <algorithm>
#include <cmath>

namespace reflecto::lasso {

namespace {

double soft_threshold(double t, double beta) {
  if (t > beta) return t - beta;
  if (t < -beta) return t + beta;
  return 0.0;
}

double mean(const Vec& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// r = y - A z - xi 1, recomputed from scratch to keep drift out
void refresh_residual(const Matrix& A, const Vec& z, double xi, const Vec& y, Vec& r) {
  r = y;
  for (double& v : r) v -= xi;
  for (std::size_t j = 0; j < A.cols; ++j) {
    const double zj = z[j];
    if (zj == 0.0) continue;
    for (std::size_t i = 0; i < A.rows; ++i) r[i] -= A(i, j) * zj;
  }
}

double kkt(const Matrix& A, const Vec& z, const Vec& r, double beta) {
  double worst = 0.0;
  for (std::size_t j = 0; j < A.cols; ++j) {
    double c = 0.0;
    for (std::size_t i = 0; i < A.rows; ++i) c += A(i, j) * r[i];
    if (z[j] == 0.0)
      worst = std::max(worst, std::max(0.0, std::fabs(c) - beta));
    else
      worst = std::max(worst, std::fabs(c - beta * (z[j] > 0 ? 1.0 : -1.0)));
  }
  return worst;
}

// coordinate descent from a given starting point
Solution descend(const Matrix& A, const Vec& y, double beta, const SolveOptions& opt,
                 Vec z0, double xi0) {
  const std::size_t F = A.cols;
  Solution sol;
  sol.z = std::move(z0);
  sol.xi = xi0;

  if (F == 0) {
    sol.converged = true;
    sol.objective = objective(A, sol.z, sol.xi, y, beta);
    return sol;
  }

  Vec colsq(F, 0.0);
  for (std::size_t j = 0; j < F; ++j)
    for (std::size_t i = 0; i < A.rows; ++i) colsq[j] += A(i, j) * A(i, j);

  Vec r;
  refresh_residual(A, sol.z, sol.xi, y, r);

  for (long sweep = 1; sweep <= opt.max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (std::size_t j = 0; j < F; ++j) {
      if (colsq[j] == 0.0) continue;
      double c = 0.0;
      for (std::size_t i = 0; i < A.rows; ++i) c += A(i, j) * r[i];
      const double znew = soft_threshold(c + colsq[j] * sol.z[j], beta) / colsq[j];
      const double delta = znew - sol.z[j];
      if (delta != 0.0) {
        for (std::size_t i = 0; i < A.rows; ++i) r[i] -= A(i, j) * delta;
        sol.z[j] = znew;
        max_change = std::max(max_change, std::fabs(delta));
      }
    }
    const double shift = mean(r);
    sol.xi += shift;
    max_change = std::max(max_change, std::fabs(shift));
    refresh_residual(A, sol.z, sol.xi, y, r);

    sol.iterations = sweep;
    if (opt.on_sweep) opt.on_sweep(sweep, objective(A, sol.z, sol.xi, y, beta));

    if (max_change <= opt.tol) {
      sol.kkt_residual = kkt(A, sol.z, r, beta);
      if (sol.kkt_residual <= 10.0 * opt.tol) {
        sol.converged = true;
        break;
      }
    }
  }
  if (!sol.converged) sol.kkt_residual = kkt(A, sol.z, r, beta);
  sol.objective = objective(A, sol.z, sol.xi, y, beta);
  return sol;
}

void validate(const Matrix& A, const Vec& y) {
  if (A.rows != y.size()) throw std::invalid_argument("lasso: A and y row mismatch");
  for (double v : A.data)
    if (!std::isfinite(v)) throw std::invalid_argument("lasso: non-finite matrix entry");
  if (!all_finite(y)) throw std::invalid_argument("lasso: non-finite label");
}

}  // namespace

double objective(const Matrix& A, const Vec& z, double xi, const Vec& y, double beta) {
  if (A.rows != y.size() || A.cols != z.size())
    throw std::invalid_argument("objective: shape mismatch");
  double loss = 0.0;
  for (std::size_t i = 0; i < A.rows; ++i) {
    double fit = xi;
    for (std::size_t j = 0; j < A.cols; ++j) fit += A(i, j) * z[j];
    const double e = fit - y[i];
    loss += e * e;
  }
  return 0.5 * loss + beta * norm1(z);
}

std::vector<std::size_t> active_set(const Vec& z, double tol) {
  if (tol < 0) throw std::invalid_argument("active_set: tol must be >= 0");
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < z.size(); ++j)
    if (std::fabs(z[j]) > tol) idx.push_back(j);
  return idx;
}

Solution solve(const Problem& problem, const SolveOptions& opt) {
  if (problem.beta <= 0.0) throw std::invalid_argument("solve: beta must be > 0");
  if (opt.tol <= 0.0) throw std::invalid_argument("solve: tol must be > 0");
  validate(problem.A, problem.y);
  return descend(problem.A, problem.y, problem.beta, opt,
                 Vec(problem.A.cols, 0.0), mean(problem.y));
}

Solution solve(const Problem& problem, double tol, long max_sweeps) {
  SolveOptions opt;
  opt.tol = tol;
  opt.max_sweeps = max_sweeps;
  return solve(problem, opt);
}

Solution solve_min_norm(const Matrix& A, const Vec& y, double beta_floor,
                        const SolveOptions& opt) {
  if (beta_floor <= 0.0)
    throw std::invalid_argument("solve_min_norm: beta_floor must be > 0");
  validate(A, y);

  // largest beta that still selects anything
  const double ybar = mean(y);
  double beta_max = 0.0;
  for (std::size_t j = 0; j < A.cols; ++j) {
    double c = 0.0;
    for (std::size_t i = 0; i < A.rows; ++i) c += A(i, j) * (y[i] - ybar);
    beta_max = std::max(beta_max, std::fabs(c));
  }

  std::vector<double> betas;
  for (double b = beta_max; b > beta_floor; b /= 10.0) betas.push_back(b);
  betas.push_back(beta_floor);

  Vec z(A.cols, 0.0);
  double xi = ybar;
  Solution sol;
  for (double beta : betas) {
    sol = descend(A, y, beta, opt, std::move(z), xi);
    z = sol.z;
    xi = sol.xi;
  }

  Vec r;
  refresh_residual(A, sol.z, sol.xi, y, r);
  sol.kkt_residual = norm_inf(r);
  return sol;
}

}  // namespace reflecto::lasso
