// Command-line front end: dictionary construction, solving, verification,
// baseline training and plot-data export over CSV datasets.

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

#include "reflecto/network.hpp"
#include "reflecto/parallel.hpp"
#include "reflecto/serialize.hpp"
#include "reflecto/verify.hpp"

namespace {

using namespace reflecto;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitInputError = 2;

struct RunConfig {
  std::string data_path;
  bool header = false;
  std::string dict_path;
  std::string solution_path;
  std::string params_path;
  std::string out_path;
  int layers = 3;
  double beta = 1e-7;
  double tol = 1e-8;
  long sweeps = 100000;
  std::string builder;  // 1d | relu-nobias | absval3 | sublib
  double subsample = 1.0;
  std::uint64_t seed = 0;
  bool min_norm = false;
  // baseline
  std::size_t units = 8;
  double lr = 5e-3;
  double decay = 1e-4;
  long epochs = 1000;
  // plotting / detection
  int grid = 4096;
  int unit = -1;
  std::string direction;
  double lo = 0.0, hi = 0.0;
  bool range_set = false;
  std::size_t column = 0;
  std::string checks = "equivalence,orthogonality,distance,reflection";
  int samples = 200;
};

data::Dataset load(const RunConfig& cfg) {
  if (cfg.data_path.empty()) throw std::runtime_error("--data is required");
  return data::load_dataset(cfg.data_path, cfg.header);
}

dict::Dictionary build_dictionary(const RunConfig& cfg, const data::Dataset& ds) {
  std::string builder = cfg.builder;
  if (builder.empty()) {
    if (cfg.layers == 2)
      builder = "1d";
    else if (cfg.layers == 3)
      builder = "absval3";
    else
      builder = "sublib";
  }
  dict::BuildOptions opt;
  opt.subsample = cfg.subsample;
  opt.seed = cfg.seed;
  opt.threads = thread_cap();

  if (builder == "1d") {
    if (ds.dim() != 1)
      throw std::runtime_error("builder '1d' needs one-dimensional data (d=" +
                               std::to_string(ds.dim()) + "); use --builder sublib or "
                               "--builder relu-nobias for wider data");
    return dict::build_2layer_1d(ds);
  }
  if (builder == "relu-nobias") return dict::build_2layer_relu_nobias(ds);
  if (builder == "absval3") return dict::build_3layer_absval(ds, opt);
  if (builder == "sublib") return dict::build_deep_sublibrary(ds, cfg.layers, opt);
  throw std::runtime_error("unknown builder: " + builder);
}

int cmd_build_dict(const RunConfig& cfg) {
  const data::Dataset ds = load(cfg);
  const dict::Dictionary dc = build_dictionary(cfg, ds);
  if (cfg.out_path.empty()) throw std::runtime_error("--out is required");
  serialize::write_file(cfg.out_path, serialize::to_json(dc));
  std::cout << "dictionary: " << dc.columns.size() << " columns (" << dc.builder
            << ", raw enumeration " << dc.raw_enumeration_count << ") -> " << cfg.out_path
            << "\n";
  return kExitOk;
}

int cmd_solve(const RunConfig& cfg) {
  const data::Dataset ds = load(cfg);
  if (cfg.dict_path.empty()) throw std::runtime_error("--dict is required");
  const dict::Dictionary dc =
      serialize::dictionary_from_json(serialize::read_file(cfg.dict_path));
  if (dc.n != ds.n())
    throw std::runtime_error("dictionary was built for " + std::to_string(dc.n) +
                             " samples but the dataset has " + std::to_string(ds.n()));

  const Matrix A = dc.matrix();
  lasso::SolveOptions opt;
  opt.tol = cfg.tol;
  opt.max_sweeps = cfg.sweeps;
  lasso::Solution sol;
  if (cfg.min_norm) {
    sol = lasso::solve_min_norm(A, ds.y, cfg.beta, opt);
  } else {
    sol = lasso::solve(lasso::Problem{A, ds.y, cfg.beta}, opt);
  }

  if (cfg.out_path.empty()) throw std::runtime_error("--out is required");
  serialize::write_file(cfg.out_path, serialize::to_json(sol, cfg.beta, A.cols));
  std::cout << "solution: objective " << sol.objective << ", " << lasso::active_set(sol.z, 1e-10).size()
            << " active of " << A.cols << ", "
            << (cfg.min_norm ? "interpolation gap " : "kkt residual ") << sol.kkt_residual
            << " -> " << cfg.out_path << "\n";
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg) {
  const data::Dataset ds = load(cfg);

  std::vector<std::string> wanted;
  std::stringstream ss(cfg.checks);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) wanted.push_back(item);

  auto requested = [&](const std::string& name) {
    return std::find(wanted.begin(), wanted.end(), name) != wanted.end();
  };

  verify::Report report;

  dict::Dictionary dc3;
  bool have3 = false;
  auto dict3 = [&]() -> const dict::Dictionary& {
    if (!have3) {
      if (!cfg.dict_path.empty())
        dc3 = serialize::dictionary_from_json(serialize::read_file(cfg.dict_path));
      else
        dc3 = dict::build_3layer_absval(ds);
      have3 = true;
    }
    return dc3;
  };

  if (requested("equivalence")) {
    if (cfg.layers <= 3)
      report.merge(verify::check_equivalence(ds, cfg.layers, cfg.beta));
    else
      std::cout << "note: equivalence check covers depths 2 and 3; skipped for --layers "
                << cfg.layers << "\n";
  }

  if (requested("orthogonality")) report.merge(verify::check_orthogonality(dict3()));

  if (requested("distance")) {
    int done = 0;
    for (const auto& col : dict3().columns) {
      if (done >= 20) break;
      report.merge(verify::check_distance_formula(col.spec, ds, cfg.samples,
                                                  cfg.seed + static_cast<std::uint64_t>(done)));
      ++done;
    }
  }

  if (requested("reflection")) {
    const dict::Dictionary sub = dict::build_deep_sublibrary(ds, cfg.layers);
    for (const auto& col : sub.columns)
      report.merge(verify::check_reflection_order(col.spec, ds, cfg.grid));
  }

  for (const auto& c : report.checks)
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << "  measured " << c.measured
              << "  tolerance " << c.tolerance << "\n";
  std::cout << (report.all_pass() ? "all checks passed" : "some checks FAILED") << " ("
            << report.checks.size() << " checks)\n";

  if (!cfg.out_path.empty())
    serialize::write_file(cfg.out_path, serialize::to_json(report));
  return report.all_pass() ? kExitOk : kExitVerifyFailed;
}

int cmd_export_plot(const RunConfig& cfg) {
  const data::Dataset ds = load(cfg);

  // the function to section and the projection direction
  std::function<double(const Vec&)> f;
  Vec w;
  int depth = cfg.layers;
  if (!cfg.params_path.empty()) {
    auto params = std::make_shared<network::Params>(
        serialize::params_from_json(serialize::read_file(cfg.params_path)));
    if (!params->units.empty()) {
      std::size_t pick = 0;
      if (cfg.unit >= 0) {
        pick = static_cast<std::size_t>(cfg.unit);
        if (pick >= params->units.size())
          throw std::runtime_error("--unit out of range");
      } else {
        for (std::size_t i = 1; i < params->units.size(); ++i)
          if (std::fabs(params->units[i].alpha) > std::fabs(params->units[pick].alpha))
            pick = i;
      }
      w = params->units[pick].w1;
    }
    depth = params->layers;
    f = [params](const Vec& x) { return network::forward(*params, x); };
  } else if (!cfg.dict_path.empty()) {
    const dict::Dictionary dc =
        serialize::dictionary_from_json(serialize::read_file(cfg.dict_path));
    if (cfg.column >= dc.columns.size())
      throw std::runtime_error("--column out of range");
    auto spec = std::make_shared<dict::FeatureSpec>(dc.columns[cfg.column].spec);
    w = spec->w;
    depth = spec->layers;
    f = [spec](const Vec& x) { return dict::evaluate(*spec, x); };
  } else {
    throw std::runtime_error("need --params or --dict");
  }

  if (!cfg.direction.empty()) {
    w.clear();
    std::stringstream ss(cfg.direction);
    std::string tok;
    while (std::getline(ss, tok, ',')) w.push_back(std::stod(tok));
    if (w.size() != ds.dim()) throw std::runtime_error("--direction dimension mismatch");
  }
  if (w.empty() || norm2(w) == 0.0) {
    // constant network: flat cross-section along the first coordinate
    w.assign(ds.dim(), 0.0);
    w[0] = 1.0;
  }

  if (cfg.out_path.empty()) throw std::runtime_error("--out is required");
  serialize::PlotOptions popt;
  popt.grid = cfg.grid;
  popt.lo = cfg.lo;
  popt.hi = cfg.hi;
  popt.range_set = cfg.range_set;
  serialize::export_plot_csv(cfg.out_path, f, w, depth, ds, popt);
  std::cout << "plot data: " << cfg.grid << " curve points and " << ds.n()
            << " samples -> " << cfg.out_path << "\n";
  return kExitOk;
}

int cmd_train_baseline(const RunConfig& cfg) {
  const data::Dataset ds = load(cfg);

  network::TrainOptions opt;
  opt.layers = cfg.layers;
  opt.units = cfg.units;
  opt.beta = cfg.beta;
  opt.lr = cfg.lr;
  opt.weight_decay = cfg.decay;
  opt.epochs = cfg.epochs;
  opt.seed = cfg.seed;

  network::Params pre;
  double lasso_objective = std::nan("");
  if (!cfg.solution_path.empty()) {
    if (cfg.dict_path.empty())
      throw std::runtime_error("--pre-init needs --dict to rebuild the features");
    const dict::Dictionary dc =
        serialize::dictionary_from_json(serialize::read_file(cfg.dict_path));
    const lasso::Solution sol =
        serialize::solution_from_json(serialize::read_file(cfg.solution_path));
    pre = network::reconstruct(sol, dc);
    opt.pre_init = &pre;
    lasso_objective = sol.objective;
  }

  const network::Params params = network::train_baseline(ds, opt);
  if (cfg.out_path.empty()) throw std::runtime_error("--out is required");
  serialize::write_file(cfg.out_path, serialize::to_json(params));

  const double obj = network::training_objective(params, ds, cfg.beta);
  std::cout << "baseline objective " << obj;
  if (!std::isnan(lasso_objective))
    std::cout << "  vs solved objective " << lasso_objective << "  (gap "
              << obj - lasso_objective << ")";
  std::cout << " -> " << cfg.out_path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deep narrow absolute-value networks via convex dictionaries"};
  app.require_subcommand(1);

  RunConfig cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--data", cfg.data_path, "CSV dataset: d feature columns then a label");
    sub->add_flag("--header", cfg.header, "skip the first CSV row");
    sub->add_option("--out", cfg.out_path, "output file");
    sub->add_option("--seed", cfg.seed, "random seed");
  };

  CLI::App* build = app.add_subcommand("build-dict", "construct a feature dictionary");
  add_common(build);
  build->add_option("--layers", cfg.layers, "network depth L");
  build->add_option("--builder", cfg.builder, "1d | relu-nobias | absval3 | sublib");
  build->add_option("--subsample", cfg.subsample, "fraction of the multi-index space");

  CLI::App* solve = app.add_subcommand("solve", "solve the convex problem over a dictionary");
  add_common(solve);
  solve->add_option("--dict", cfg.dict_path, "dictionary JSON")->required();
  solve->add_option("--beta", cfg.beta, "regularization strength");
  solve->add_option("--tol", cfg.tol, "coordinate-change tolerance");
  solve->add_option("--sweeps", cfg.sweeps, "sweep budget");
  solve->add_flag("--min-norm", cfg.min_norm,
                  "decreasing-beta homotopy down to --beta (minimum-norm interpolation)");

  CLI::App* verify_cmd = app.add_subcommand("verify", "run property checks");
  add_common(verify_cmd);
  verify_cmd->add_option("--layers", cfg.layers, "network depth L");
  verify_cmd->add_option("--beta", cfg.beta, "regularization strength");
  verify_cmd->add_option("--dict", cfg.dict_path, "dictionary JSON (otherwise built fresh)");
  verify_cmd->add_option("--checks", cfg.checks,
                         "comma list: equivalence,orthogonality,distance,reflection");
  verify_cmd->add_option("--samples", cfg.samples, "random inputs per distance check");
  verify_cmd->add_option("--grid", cfg.grid, "breakpoint scan resolution");

  CLI::App* plot = app.add_subcommand("export-plot", "cross-section and scatter data as CSV");
  add_common(plot);
  plot->add_option("--params", cfg.params_path, "network parameters JSON");
  plot->add_option("--dict", cfg.dict_path, "dictionary JSON (plot one feature)");
  plot->add_option("--column", cfg.column, "dictionary column to plot");
  plot->add_option("--unit", cfg.unit, "unit whose weight sets the projection");
  plot->add_option("--direction", cfg.direction, "explicit projection direction, comma separated");
  plot->add_option("--grid", cfg.grid, "curve resolution");
  auto* lo_opt = plot->add_option("--lo", cfg.lo, "cross-section range start");
  plot->add_option("--hi", cfg.hi, "cross-section range end")->needs(lo_opt);

  CLI::App* train = app.add_subcommand("train-baseline", "first-order training baseline");
  add_common(train);
  train->add_option("--layers", cfg.layers, "network depth L");
  train->add_option("--units", cfg.units, "width m");
  train->add_option("--beta", cfg.beta, "regularization strength");
  train->add_option("--lr", cfg.lr, "learning rate");
  train->add_option("--decay", cfg.decay, "weight decay");
  train->add_option("--epochs", cfg.epochs, "epoch count");
  train->add_option("--pre-init", cfg.solution_path, "solution JSON to pre-initialize one unit");
  train->add_option("--dict", cfg.dict_path, "dictionary JSON for --pre-init");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    cfg.range_set = plot->count("--lo") > 0 && plot->count("--hi") > 0;
    if (build->parsed()) return cmd_build_dict(cfg);
    if (solve->parsed()) return cmd_solve(cfg);
    if (verify_cmd->parsed()) return cmd_verify(cfg);
    if (plot->parsed()) return cmd_export_plot(cfg);
    if (train->parsed()) return cmd_train_baseline(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitOk;
}
