#include "reflecto/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "reflecto/geoalg.hpp"
#include "reflecto/network.hpp"

namespace reflecto::verify {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

Report check_equivalence(const data::Dataset& ds, int layers, double beta,
                         const EquivalenceOptions& opt) {
  if (layers != 2 && layers != 3)
    throw std::invalid_argument("check_equivalence: full dictionaries exist for depth 2 and 3");

  dict::Dictionary dc;
  if (layers == 3)
    dc = dict::build_3layer_absval(ds);
  else if (ds.dim() == 1)
    dc = dict::build_2layer_1d(ds);
  else
    dc = dict::build_deep_sublibrary(ds, 2);

  lasso::Problem problem{dc.matrix(), ds.y, beta};
  lasso::SolveOptions sopt;
  sopt.tol = opt.solver_tol;
  sopt.max_sweeps = opt.max_sweeps;
  const lasso::Solution sol = lasso::solve(problem, sopt);
  const network::Params rec = network::reconstruct(sol, dc);

  Vec lasso_fit = matvec(problem.A, sol.z);
  for (double& v : lasso_fit) v += sol.xi;
  const Vec net_fit = network::forward_all(rec, ds.X);
  double fit_dev = 0.0;
  for (std::size_t i = 0; i < ds.n(); ++i)
    fit_dev = std::max(fit_dev, std::fabs(net_fit[i] - lasso_fit[i]));

  const double net_obj = network::training_objective(rec, ds, beta);
  const double obj_gap =
      std::fabs(net_obj - sol.objective) / std::max(1.0, std::fabs(sol.objective));

  Report report;
  report.checks.push_back({"equivalence.fit_deviation", fit_dev <= opt.fit_tol, fit_dev,
                           opt.fit_tol,
                           "reconstructed network matches A z* + xi* 1 on the training rows"});
  report.checks.push_back({"equivalence.objective_gap", obj_gap <= opt.objective_tol,
                           obj_gap, opt.objective_tol,
                           "training objective at the reconstruction equals the solved "
                           "objective (relative)"});
  return report;
}

Report check_distance_formula(const dict::FeatureSpec& spec, const data::Dataset& ds,
                              int samples, std::uint64_t seed) {
  if (spec.prov.builder != "absval3" || !spec.prov.j0.has_value() ||
      spec.prov.anchor_point.empty())
    throw std::invalid_argument("check_distance_formula: missing three-layer provenance");

  const std::size_t d = ds.dim();
  const Vec& anchor = spec.prov.anchor_point;
  const Vec x0 = ds.X.row(*spec.prov.j0);
  const Vec reflected = data::reflect(x0, anchor);
  const double r = geoalg::sparsity_factor(spec.w);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-10.0, 10.0);

  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    Vec x(d);
    for (auto& v : x) v = unif(rng);
    const double feature = dict::evaluate(spec, x);
    const double dist = std::min(geoalg::dist_to_hyperplane(x, x0, spec.w),
                                 geoalg::dist_to_hyperplane(x, reflected, spec.w));
    const double rhs = r * dist;
    const double dev = std::fabs(feature - rhs) / std::max({1.0, feature, rhs});
    worst = std::max(worst, dev);
  }

  Report report;
  Check c;
  c.name = "distance_formula";
  c.tolerance = 1e-8;
  c.measured = worst;
  c.pass = worst <= c.tolerance;
  c.detail = spec.prov.anchor_is_midpoint
                 ? "feature = r(w) * distance to the planes through the paired sample "
                   "and its mirror (averaged-anchor case)"
                 : "feature = r(w) * distance to the plane through the paired sample "
                   "and its reflection across the anchor";
  report.checks.push_back(std::move(c));
  return report;
}

std::vector<double> detect_breakpoints_1d(const std::function<double(double)>& f,
                                          double lo, double hi, int grid_n, double tol) {
  if (!(lo < hi)) throw std::invalid_argument("detect_breakpoints_1d: need lo < hi");
  if (grid_n < 3) throw std::invalid_argument("detect_breakpoints_1d: need grid_n >= 3");

  const double h = (hi - lo) / (grid_n - 1);
  std::vector<double> vals(grid_n);
  for (int i = 0; i < grid_n; ++i) vals[i] = f(lo + i * h);

  std::vector<double> slope(grid_n - 1);
  for (int i = 0; i + 1 < grid_n; ++i) slope[i] = (vals[i + 1] - vals[i]) / h;

  // bisection on the half whose chord deviates more from the sampled value;
  // when both halves look affine the kink sits at the shared midpoint
  auto refine = [&](double a, double b) {
    const double target = h / 1024.0;
    double fa = f(a), fb = f(b);
    while (b - a > target) {
      const double m = 0.5 * (a + b);
      const double fm = f(m);
      const double devl = std::fabs(f(0.5 * (a + m)) - 0.5 * (fa + fm));
      const double devr = std::fabs(f(0.5 * (m + b)) - 0.5 * (fm + fb));
      const double flat = 1e-12 * (1.0 + std::fabs(fa) + std::fabs(fm) + std::fabs(fb));
      if (devl <= flat && devr <= flat) return m;
      if (devl >= devr) {
        b = m;
        fb = fm;
      } else {
        a = m;
        fa = fm;
      }
    }
    return 0.5 * (a + b);
  };

  std::vector<double> found;
  for (int i = 1; i + 1 < grid_n; ++i) {
    const double jump = std::fabs(slope[i] - slope[i - 1]);
    const double scale = std::max({1.0, std::fabs(slope[i]), std::fabs(slope[i - 1])});
    if (jump <= tol * scale) continue;
    const double bp = refine(lo + (i - 1) * h, lo + (i + 1) * h);
    if (found.empty() || bp - found.back() > h) found.push_back(bp);
  }
  std::sort(found.begin(), found.end());
  return found;
}

int max_reflection_order(int layers) {
  if (layers <= 2) return 0;
  if (layers == 3) return 1;
  return 2 * (layers - 3);
}

Report check_reflection_order(const dict::FeatureSpec& spec, const data::Dataset& ds,
                              int grid_n) {
  const double wn = norm2(spec.w);
  if (wn == 0.0) throw std::invalid_argument("check_reflection_order: zero weight");
  const Vec unit = scaled(spec.w, 1.0 / wn);

  // reflections commute with the projection, so the closure is computed on
  // the projected samples directly
  std::vector<Vec> projected;
  projected.reserve(ds.n());
  for (std::size_t i = 0; i < ds.n(); ++i) projected.push_back({dot(ds.X.row(i), unit)});

  const int order = max_reflection_order(spec.layers);
  const auto closure = data::order_k_reflections(projected, order);

  double lo = projected.front()[0], hi = lo;
  for (const auto& node : closure) {
    lo = std::min(lo, node.point[0]);
    hi = std::max(hi, node.point[0]);
  }
  const double span = std::max(hi - lo, 1.0);
  lo -= 0.25 * span;
  hi += 0.25 * span;

  auto section = [&](double t) { return dict::evaluate(spec, scaled(unit, t)); };
  const auto breakpoints = detect_breakpoints_1d(section, lo, hi, grid_n);

  const double member_tol = 1e-6 * (hi - lo);
  double worst = 0.0;
  int violations = 0;
  for (double bp : breakpoints) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& node : closure)
      nearest = std::min(nearest, std::fabs(bp - node.point[0]));
    worst = std::max(worst, nearest);
    if (nearest > member_tol) ++violations;
  }

  Report report;
  Check c;
  c.name = "reflection_order.L" + std::to_string(spec.layers);
  c.tolerance = member_tol;
  c.measured = worst;
  c.pass = violations == 0;
  c.detail = std::to_string(breakpoints.size()) + " breakpoints against the order-" +
             std::to_string(order) + " closure (" + std::to_string(closure.size()) +
             " points); worst offset " + fmt(worst);
  report.checks.push_back(std::move(c));
  return report;
}

Report check_orthogonality(const dict::Dictionary& dictionary) {
  if (dictionary.layers != 3)
    throw std::invalid_argument("check_orthogonality: needs a three-layer dictionary");

  double worst = 0.0;
  std::size_t checked = 0;
  for (const auto& col : dictionary.columns) {
    const auto& prov = col.spec.prov;
    if (prov.builder != "absval3")
      throw std::invalid_argument("check_orthogonality: missing spanning-difference provenance");
    const double wn = norm2(col.spec.w);
    for (const Vec& delta : prov.spanning_diffs) {
      const double dn = norm2(delta);
      if (dn == 0.0 || wn == 0.0) continue;
      worst = std::max(worst, std::fabs(dot(col.spec.w, delta)) / (wn * dn));
      ++checked;
    }
  }

  Report report;
  Check c;
  c.name = "orthogonality";
  c.tolerance = 1e-10;
  c.measured = worst;
  c.pass = worst <= c.tolerance;
  c.detail = "first-layer weights against their " + std::to_string(checked) +
             " recorded spanning differences";
  report.checks.push_back(std::move(c));
  return report;
}

}  // namespace reflecto::verify
