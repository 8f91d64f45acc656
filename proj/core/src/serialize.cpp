#include "reflecto/serialize.hpp"

#include <algorithm>
#include <fstream>

namespace reflecto::serialize {

using nlohmann::json;

namespace {

json prov_to_json(const dict::Provenance& p) {
  json j;
  j["builder"] = p.builder;
  if (p.j_minus1) j["j_minus1"] = *p.j_minus1;
  if (p.j0) j["j0"] = *p.j0;
  if (p.builder == "absval3") {
    j["anchor_is_midpoint"] = p.anchor_is_midpoint;
    j["anchor_point"] = p.anchor_point;
    j["spanning_diffs"] = p.spanning_diffs;
    j["w_raw"] = p.w_raw;
  }
  if (!p.bias_anchors.empty()) j["bias_anchors"] = p.bias_anchors;
  if (p.sample_index) j["sample_index"] = *p.sample_index;
  if (!p.combination.empty()) j["combination"] = p.combination;
  if (p.sign != +1) j["sign"] = p.sign;
  return j;
}

dict::Provenance prov_from_json(const json& j) {
  dict::Provenance p;
  p.builder = j.value("builder", "");
  if (j.contains("j_minus1")) p.j_minus1 = j["j_minus1"].get<std::size_t>();
  if (j.contains("j0")) p.j0 = j["j0"].get<std::size_t>();
  p.anchor_is_midpoint = j.value("anchor_is_midpoint", false);
  if (j.contains("anchor_point")) p.anchor_point = j["anchor_point"].get<Vec>();
  if (j.contains("spanning_diffs"))
    p.spanning_diffs = j["spanning_diffs"].get<std::vector<Vec>>();
  if (j.contains("w_raw")) p.w_raw = j["w_raw"].get<Vec>();
  if (j.contains("bias_anchors"))
    p.bias_anchors = j["bias_anchors"].get<std::vector<std::size_t>>();
  if (j.contains("sample_index")) p.sample_index = j["sample_index"].get<std::size_t>();
  if (j.contains("combination"))
    p.combination = j["combination"].get<std::vector<std::size_t>>();
  p.sign = j.value("sign", +1);
  return p;
}

json spec_to_json(const dict::FeatureSpec& s) {
  json j;
  j["layers"] = s.layers;
  j["w"] = s.w;
  j["bias_chain"] = s.bias_chain;
  j["inner_signs"] = s.inner_signs;
  j["activation"] = s.activation == dict::Activation::Abs ? "abs" : "relu";
  j["provenance"] = prov_to_json(s.prov);
  return j;
}

dict::FeatureSpec spec_from_json(const json& j) {
  dict::FeatureSpec s;
  s.layers = j.at("layers").get<int>();
  s.w = j.at("w").get<Vec>();
  s.bias_chain = j.at("bias_chain").get<Vec>();
  s.inner_signs = j.value("inner_signs", Vec{});
  s.activation = j.value("activation", "abs") == std::string("relu")
                     ? dict::Activation::ReluPos
                     : dict::Activation::Abs;
  if (j.contains("provenance")) s.prov = prov_from_json(j["provenance"]);
  return s;
}

}  // namespace

json to_json(const dict::Dictionary& dc) {
  json j;
  j["n"] = dc.n;
  j["d"] = dc.d;
  j["layers"] = dc.layers;
  j["builder"] = dc.builder;
  j["raw_enumeration_count"] = dc.raw_enumeration_count;
  json cols = json::array();
  for (const auto& col : dc.columns) {
    json c;
    c["values"] = col.values;
    c["spec"] = spec_to_json(col.spec);
    cols.push_back(std::move(c));
  }
  j["columns"] = std::move(cols);
  return j;
}

dict::Dictionary dictionary_from_json(const json& j) {
  dict::Dictionary dc;
  dc.n = j.at("n").get<std::size_t>();
  dc.d = j.at("d").get<std::size_t>();
  dc.layers = j.at("layers").get<int>();
  dc.builder = j.value("builder", "");
  dc.raw_enumeration_count = j.value("raw_enumeration_count", 0ULL);
  for (const auto& c : j.at("columns")) {
    dict::DictColumn col;
    col.values = c.at("values").get<Vec>();
    if (col.values.size() != dc.n)
      throw std::runtime_error("dictionary import: column length does not match n");
    col.spec = spec_from_json(c.at("spec"));
    dc.columns.push_back(std::move(col));
  }
  return dc;
}

json to_json(const lasso::Solution& sol, double beta, std::size_t num_features) {
  json j;
  json z = json::array();
  for (std::size_t i = 0; i < sol.z.size(); ++i) {
    if (sol.z[i] == 0.0) continue;
    z.push_back({{"index", i}, {"value", sol.z[i]}});
  }
  j["z"] = std::move(z);
  j["num_features"] = num_features;
  j["xi"] = sol.xi;
  j["objective"] = sol.objective;
  j["active_set"] = lasso::active_set(sol.z, 1e-10);
  j["kkt_residual"] = sol.kkt_residual;
  j["iterations"] = sol.iterations;
  j["converged"] = sol.converged;
  j["beta"] = beta;
  return j;
}

lasso::Solution solution_from_json(const json& j) {
  lasso::Solution sol;
  sol.z.assign(j.at("num_features").get<std::size_t>(), 0.0);
  for (const auto& e : j.at("z")) {
    const auto idx = e.at("index").get<std::size_t>();
    if (idx >= sol.z.size()) throw std::runtime_error("solution import: index out of range");
    sol.z[idx] = e.at("value").get<double>();
  }
  sol.xi = j.at("xi").get<double>();
  sol.objective = j.value("objective", 0.0);
  sol.kkt_residual = j.value("kkt_residual", 0.0);
  sol.iterations = j.value("iterations", 0L);
  sol.converged = j.value("converged", false);
  return sol;
}

json to_json(const network::Params& params) {
  json j;
  j["layers"] = params.layers;
  j["xi"] = params.xi;
  json units = json::array();
  for (const auto& u : params.units) {
    units.push_back({{"w1", u.w1},
                     {"inner_w", u.inner_w},
                     {"biases", u.biases},
                     {"alpha", u.alpha}});
  }
  j["units"] = std::move(units);
  return j;
}

network::Params params_from_json(const json& j) {
  network::Params p;
  p.layers = j.at("layers").get<int>();
  p.xi = j.at("xi").get<double>();
  for (const auto& ju : j.at("units")) {
    network::Unit u;
    u.w1 = ju.at("w1").get<Vec>();
    u.inner_w = ju.at("inner_w").get<Vec>();
    u.biases = ju.at("biases").get<Vec>();
    u.alpha = ju.at("alpha").get<double>();
    p.units.push_back(std::move(u));
  }
  return p;
}

json to_json(const verify::Report& report) {
  json j;
  json checks = json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"pass", c.pass},
                      {"measured", c.measured},
                      {"tolerance", c.tolerance},
                      {"detail", c.detail}});
  }
  j["checks"] = std::move(checks);
  j["passed"] = report.all_pass();
  return j;
}

void write_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << j.dump(2) << "\n";
}

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  return json::parse(in);
}

void export_plot_csv(const std::string& path, const std::function<double(const Vec&)>& f,
                     const Vec& direction, int depth, const data::Dataset& ds,
                     const PlotOptions& opt) {
  if (direction.size() != ds.dim())
    throw std::invalid_argument("export_plot_csv: direction dimension mismatch");
  const double dn = norm2(direction);
  if (dn == 0.0) throw std::invalid_argument("export_plot_csv: zero direction");
  if (opt.grid < 3) throw std::invalid_argument("export_plot_csv: grid too small");
  const Vec unit = scaled(direction, 1.0 / dn);

  const Vec proj = data::project_1d(ds.X, unit);
  double lo = opt.lo, hi = opt.hi;
  if (!opt.range_set) {
    std::vector<Vec> pts;
    pts.reserve(proj.size());
    for (double p : proj) pts.push_back({p});
    const auto closure = data::order_k_reflections(pts, verify::max_reflection_order(depth));
    lo = proj[0];
    hi = proj[0];
    for (const auto& node : closure) {
      lo = std::min(lo, node.point[0]);
      hi = std::max(hi, node.point[0]);
    }
    const double span = std::max(hi - lo, 1.0);
    lo -= 0.25 * span;
    hi += 0.25 * span;
  }

  auto section = [&](double t) { return f(scaled(unit, t)); };
  const auto breakpoints = verify::detect_breakpoints_1d(section, lo, hi, opt.grid);

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out.precision(17);
  out << "kind,t,value,label\n";
  for (int i = 0; i < opt.grid; ++i) {
    const double t = lo + (hi - lo) * i / (opt.grid - 1);
    out << "curve," << t << "," << section(t) << ",\n";
  }
  for (double bp : breakpoints) out << "breakpoint," << bp << "," << section(bp) << ",\n";
  for (std::size_t n = 0; n < ds.n(); ++n)
    out << "sample," << proj[n] << "," << f(ds.X.row(n)) << "," << ds.y[n] << "\n";
}

}  // namespace reflecto::serialize
