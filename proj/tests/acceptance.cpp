// Acceptance suite: end-to-end criteria with pinned tolerances, one
// PASS/FAIL line per criterion. Exits non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "lasso_oracle.hpp"
#include "reflecto/geoalg.hpp"
#include "reflecto/network.hpp"
#include "reflecto/serialize.hpp"
#include "reflecto/verify.hpp"

using namespace reflecto;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Instance {
  data::Dataset ds;
  int layers;
  double beta;
};

std::vector<Instance> instance_schedule(std::size_t count) {
  std::vector<Instance> out;
  std::mt19937_64 rng(20240901);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t n = 2 + rng() % 5;  // 2..6
    const std::size_t d = 1 + rng() % 3;  // 1..3
    const int layers = (rng() % 2 == 0) ? 2 : 3;
    const double beta = (rng() % 2 == 0) ? 1e-3 : 1e-1;
    out.push_back({fixtures::random_dataset(n, d, 9000 + i), layers, beta});
  }
  return out;
}

dict::Dictionary dictionary_for(const Instance& inst) {
  if (inst.layers == 3) return dict::build_3layer_absval(inst.ds);
  if (inst.ds.dim() == 1) return dict::build_2layer_1d(inst.ds);
  return dict::build_deep_sublibrary(inst.ds, 2);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// 1. reconstruction matches the solved fit and objective on random instances
Outcome criterion_equivalence() {
  double worst_fit = 0.0, worst_gap = 0.0;
  for (const Instance& inst : instance_schedule(50)) {
    const auto dc = dictionary_for(inst);
    if (dc.columns.empty()) continue;
    const auto sol =
        lasso::solve(lasso::Problem{dc.matrix(), inst.ds.y, inst.beta}, 1e-10, 100000);
    const auto rec = network::reconstruct(sol, dc);

    Vec fit = matvec(dc.matrix(), sol.z);
    for (auto& v : fit) v += sol.xi;
    const Vec net = network::forward_all(rec, inst.ds.X);
    for (std::size_t i = 0; i < inst.ds.n(); ++i)
      worst_fit = std::max(worst_fit, std::fabs(net[i] - fit[i]));

    const double obj = network::training_objective(rec, inst.ds, inst.beta);
    worst_gap = std::max(worst_gap, std::fabs(obj - sol.objective) /
                                        std::max(1.0, std::fabs(sol.objective)));
  }
  Outcome o;
  o.pass = worst_fit <= 1e-8 && worst_gap <= 1e-6;
  o.detail = "worst fit deviation " + fmt(worst_fit) + " (tol 1e-8), worst objective gap " +
             fmt(worst_gap) + " (tol 1e-6) over 50 instances";
  return o;
}

// 2. first-order training never beats the convex optimum
Outcome criterion_lower_bound() {
  double worst_margin = std::numeric_limits<double>::infinity();
  const auto instances = instance_schedule(50);
  for (std::size_t i = 0; i < 10; ++i) {
    const Instance& inst = instances[i];
    const auto dc = dictionary_for(inst);
    if (dc.columns.empty()) continue;
    const auto sol =
        lasso::solve(lasso::Problem{dc.matrix(), inst.ds.y, inst.beta}, 1e-12, 200000);

    network::TrainOptions opt;
    opt.layers = inst.layers;
    opt.units = 6;
    opt.beta = inst.beta;
    opt.epochs = 150;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      opt.seed = seed;
      const auto p = network::train_baseline(inst.ds, opt);
      worst_margin = std::min(worst_margin,
                              network::training_objective(p, inst.ds, inst.beta) -
                                  sol.objective);
    }
  }
  Outcome o;
  o.pass = worst_margin >= -1e-6;
  o.detail = "smallest baseline-minus-optimum margin " + fmt(worst_margin) +
             " (must be >= -1e-6) over 10 instances x 20 seeds";
  return o;
}

// 3. two-point planar set: cross-section kinks at 0, 2 and 4
Outcome criterion_planar_reproduction() {
  const auto ds = fixtures::planar_two_point();
  const auto dc = dict::build_3layer_absval(ds);
  const auto sol = lasso::solve(lasso::Problem{dc.matrix(), ds.y, 1e-7}, 1e-12, 200000);
  const auto rec = network::reconstruct(sol, dc);

  auto section = [&](double t) { return network::forward(rec, {t, 0.0}); };
  const auto bps = verify::detect_breakpoints_1d(section, -3.5, 5.5, 16384);

  const std::vector<double> expected{0.0, 2.0, 4.0};
  Outcome o;
  std::vector<bool> seen(expected.size(), false);
  double worst = 0.0;
  for (double bp : bps) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t which = 0;
    for (std::size_t k = 0; k < expected.size(); ++k)
      if (std::fabs(bp - expected[k]) < best) {
        best = std::fabs(bp - expected[k]);
        which = k;
      }
    worst = std::max(worst, best);
    if (best <= 1e-6) seen[which] = true;
  }
  o.pass = bps.size() == 3 && seen[0] && seen[1] && seen[2] && worst <= 1e-6;
  o.detail = std::to_string(bps.size()) + " breakpoints, worst offset from {0,2,4} " +
             fmt(worst) + " (tol 1e-6), interpolation residual " +
             fmt(sol.objective);
  return o;
}

// 4. sub-library breakpoints stay within the depth's reflection order
Outcome criterion_multilevel_symmetry() {
  const auto ds = fixtures::planar_three_point();
  Outcome o;
  std::size_t features = 0;
  int violations = 0;
  for (int layers : {2, 3, 4}) {
    const auto sub = dict::build_deep_sublibrary(ds, layers);
    features += sub.columns.size();
    for (const auto& col : sub.columns) {
      const auto report = verify::check_reflection_order(col.spec, ds);
      if (!report.all_pass()) ++violations;
    }
  }
  o.pass = violations == 0 && features > 0;
  o.detail = std::to_string(violations) + " violations across " + std::to_string(features) +
             " sub-library features at depths 2, 3, 4 (orders 0, 1, 2)";
  return o;
}

// 5. cross-product orthogonality, volume factorization, distance identity
Outcome criterion_geometric_identities() {
  std::mt19937_64 rng(5150);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);

  double worst_orth = 0.0;
  double worst_vol = 0.0;
  for (std::size_t d = 2; d <= 5; ++d) {
    const Vec origin(d, 0.0);
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<Vec> vs(d - 1, Vec(d));
      for (auto& v : vs)
        for (auto& x : v) x = unif(rng);
      const Vec w = geoalg::generalized_cross(vs);
      const double wn = norm2(w);
      for (const auto& v : vs) {
        const double denom = wn * norm2(v);
        if (denom > 0) worst_orth = std::max(worst_orth, std::fabs(dot(w, v)) / denom);
      }

      Vec u(d);
      for (auto& x : u) x = unif(rng);
      const double base = wn;
      if (base <= 1e-9) continue;
      std::vector<Vec> full;
      full.push_back(u);
      for (const auto& v : vs) full.push_back(v);
      const double vol = std::fabs(geoalg::signed_volume(full));
      const double height = geoalg::dist_to_hyperplane(u, origin, w);
      worst_vol = std::max(worst_vol,
                           std::fabs(vol - base * height) / std::max(1.0, vol));
    }
  }

  double worst_dist = 0.0;
  int specs = 0;
  const auto ds = fixtures::random_dataset(4, 2, 616);
  const auto dc = dict::build_3layer_absval(ds);
  for (const auto& col : dc.columns) {
    if (specs >= 20) break;
    const auto report = verify::check_distance_formula(col.spec, ds, 1000, 616 + specs);
    worst_dist = std::max(worst_dist, report.checks[0].measured);
    ++specs;
  }

  Outcome o;
  o.pass = worst_orth <= 1e-10 && worst_vol <= 1e-9 && worst_dist <= 1e-8 && specs == 20;
  o.detail = "orthogonality " + fmt(worst_orth) + " (tol 1e-10), volume identity " +
             fmt(worst_vol) + " (tol 1e-9), distance identity " + fmt(worst_dist) +
             " (tol 1e-8, " + std::to_string(specs) + " specs x 1000 points)";
  return o;
}

// 6. enumeration size matches the combinatorial bound
Outcome criterion_dictionary_size() {
  Outcome o;
  std::ostringstream detail;
  for (const auto& [n, d] : std::vector<std::pair<std::size_t, std::size_t>>{
           {2, 1}, {3, 1}, {5, 1}, {2, 2}, {3, 2}, {4, 2}, {2, 3}, {3, 3}}) {
    const auto ds = fixtures::random_dataset(n, d, 700 + n * 10 + d);
    const auto dc = dict::build_3layer_absval(ds);
    const auto bound = dict::count_bound(n, d);
    // the raw count must equal the product of the index ranges exactly
    unsigned long long product = 2;
    for (std::size_t i = 0; i < d + 1; ++i) product *= n;
    for (std::size_t i = 0; i + 1 < d; ++i) product *= 2 + d;
    if (dc.raw_enumeration_count != product || product > bound) {
      o.pass = false;
      detail << "mismatch at n=" << n << " d=" << d << "; ";
    }
  }
  const bool planar_bound_ok = dict::count_bound(2, 2) == 64;
  o.pass = o.pass && planar_bound_ok;
  detail << "n=2,d=2 bound " << dict::count_bound(2, 2) << " (expected 64)";
  o.detail = detail.str();
  return o;
}

// 7. coordinate descent against the exhaustive support oracle
Outcome criterion_solver_oracle() {
  std::mt19937_64 rng(8181);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  double worst_gap = 0.0, worst_kkt = 0.0;
  int converged = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + rng() % 6;
    const std::size_t f = 2 + rng() % 7;
    Matrix A(n, f);
    for (auto& v : A.data) v = unif(rng);
    Vec y(n);
    for (auto& v : y) v = unif(rng);
    const double beta = (trial % 2 == 0) ? 0.05 : 0.4;

    const auto sol = lasso::solve(lasso::Problem{A, y, beta}, 1e-12, 300000);
    const double best = oracle::lasso_objective(A, y, beta);
    worst_gap = std::max(worst_gap, std::fabs(sol.objective - best) /
                                        std::max(1.0, std::fabs(best)));
    worst_kkt = std::max(worst_kkt, sol.kkt_residual);
    if (sol.converged) ++converged;
  }
  Outcome o;
  o.pass = worst_gap <= 1e-6 && worst_kkt <= 1e-7 && converged == 100;
  o.detail = "worst relative objective gap " + fmt(worst_gap) +
             " (tol 1e-6), worst kkt residual " + fmt(worst_kkt) + " (tol 1e-7), " +
             std::to_string(converged) + "/100 converged";
  return o;
}

// 8. pairwise-distance dictionary and minimum-norm interpolation
Outcome criterion_pairwise_distance_dictionary() {
  data::Dataset ds;
  ds.X = Matrix(3, 1);
  ds.X(1, 0) = 1.0;
  ds.X(2, 0) = 2.0;
  ds.y = {0.0, 1.0, 0.0};

  const auto dc = dict::build_2layer_1d(ds);
  bool shape_ok = dc.columns.size() == 3;
  for (std::size_t i = 0; shape_ok && i < 3; ++i) {
    if (dc.columns[i].values[i] != 0.0) shape_ok = false;
    for (std::size_t j = 0; j < 3; ++j)
      if (dc.columns[i].values[j] != dc.columns[j].values[i]) shape_ok = false;
  }

  const auto sol = lasso::solve_min_norm(dc.matrix(), ds.y, 1e-7);
  const double l1 = norm1(sol.z);

  Outcome o;
  o.pass = shape_ok && std::fabs(l1 - 1.0) <= 1e-5 && sol.kkt_residual <= 1e-6;
  o.detail = std::string(shape_ok ? "symmetric zero-diagonal" : "SHAPE BROKEN") +
             ", |z|_1 = " + fmt(l1) + " (expected 1), interpolation gap " +
             fmt(sol.kkt_residual);
  return o;
}

// 9. embedding ingestion, baseline training, plot export
Outcome criterion_embedding_path() {
  fixtures::TempDir tmp;
  const auto csv = tmp.file("embed.csv");
  {
    std::mt19937_64 rng(424242);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::ostringstream text;
    text.precision(17);
    for (int i = 0; i < 50; ++i) {
      for (int j = 0; j < 16; ++j) text << unif(rng) << ",";
      text << ((i % 2 == 0) ? 1 : -1) << "\n";
    }
    fixtures::write_text(csv, text.str());
  }

  const auto ds = data::load_dataset(csv);
  bool shape_ok = ds.n() == 50 && ds.dim() == 16;

  auto run_once = [&](const std::string& out) {
    network::TrainOptions opt;
    opt.layers = 3;
    opt.units = 10;
    opt.beta = 1e-7;
    opt.epochs = 150;
    opt.seed = 7;
    const auto params = network::train_baseline(ds, opt);
    std::size_t pick = 0;
    for (std::size_t i = 1; i < params.units.size(); ++i)
      if (std::fabs(params.units[i].alpha) > std::fabs(params.units[pick].alpha)) pick = i;
    serialize::PlotOptions popt;
    popt.grid = 1024;
    serialize::export_plot_csv(
        out, [&](const Vec& x) { return network::forward(params, x); },
        params.units[pick].w1, params.layers, ds, popt);
  };

  const auto plot1 = tmp.file("plot1.csv");
  const auto plot2 = tmp.file("plot2.csv");
  run_once(plot1);
  run_once(plot2);

  const std::string text = fixtures::read_text(plot1);
  const bool deterministic = text == fixtures::read_text(plot2);

  std::stringstream ss(text);
  std::string line;
  std::getline(ss, line);
  bool wellformed = line == "kind,t,value,label";
  int curves = 0, samples = 0;
  while (std::getline(ss, line)) {
    std::size_t commas = 0;
    for (char c : line)
      if (c == ',') ++commas;
    if (commas != 3) wellformed = false;
    if (line.rfind("curve,", 0) == 0) ++curves;
    if (line.rfind("sample,", 0) == 0) ++samples;
  }
  wellformed = wellformed && curves == 1024 && samples == 50;

  Outcome o;
  o.pass = shape_ok && wellformed && deterministic;
  o.detail = std::string("50x16 ingest ") + (shape_ok ? "ok" : "BROKEN") + ", plot " +
             (wellformed ? "well-formed" : "MALFORMED") + ", seeded rerun " +
             (deterministic ? "identical" : "DIFFERS");
  return o;
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    double budget_seconds;
    Outcome (*fn)();
  };
  const std::vector<Entry> entries{
      {"lasso-network-equivalence", 120, criterion_equivalence},
      {"global-lower-bound", 300, criterion_lower_bound},
      {"planar-two-point-reproduction", 10, criterion_planar_reproduction},
      {"multilevel-symmetry", 60, criterion_multilevel_symmetry},
      {"geometric-identities", 60, criterion_geometric_identities},
      {"dictionary-size-bound", 10, criterion_dictionary_size},
      {"solver-oracle", 60, criterion_solver_oracle},
      {"pairwise-distance-dictionary", 5, criterion_pairwise_distance_dictionary},
      {"embedding-path-smoke", 30, criterion_embedding_path},
  };

  int failures = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = entries[i].fn();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = seconds < entries[i].budget_seconds;
    const bool pass = outcome.pass && in_budget;
    if (!pass) ++failures;
    std::printf("%s  %zu. %s  [%.1fs < %.0fs]  %s\n", pass ? "PASS" : "FAIL", i + 1,
                entries[i].name, seconds, entries[i].budget_seconds,
                outcome.detail.c_str());
    std::fflush(stdout);
  }
  if (failures > 0) std::printf("%d criterion(s) FAILED\n", failures);
  else std::printf("all %zu criteria passed\n", entries.size());
  return failures == 0 ? 0 : 1;
}
