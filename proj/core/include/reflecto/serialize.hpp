#pragma once

#include <json.hpp>
#include <string>

#include "reflecto/dict.hpp"
#include "reflecto/lasso.hpp"
#include "reflecto/network.hpp"
#include "reflecto/verify.hpp"

namespace reflecto::serialize {

nlohmann::json to_json(const dict::Dictionary& dictionary);
dict::Dictionary dictionary_from_json(const nlohmann::json& j);

nlohmann::json to_json(const lasso::Solution& sol, double beta, std::size_t num_features);
lasso::Solution solution_from_json(const nlohmann::json& j);

nlohmann::json to_json(const network::Params& params);
network::Params params_from_json(const nlohmann::json& j);

nlohmann::json to_json(const verify::Report& report);

void write_file(const std::string& path, const nlohmann::json& j);
nlohmann::json read_file(const std::string& path);

struct PlotOptions {
  int grid = 4096;
  double lo = 0.0;
  double hi = 0.0;
  bool range_set = false;  // otherwise covers the reachable projected reflections
};

/// Cross-section export: rows `curve,t,f(t),` over the grid, `breakpoint`
/// rows for detected kinks, and one `sample,projection,prediction,label` row
/// per training sample. `depth` bounds the reflection order the default
/// range must cover.
void export_plot_csv(const std::string& path, const std::function<double(const Vec&)>& f,
                     const Vec& direction, int depth, const data::Dataset& ds,
                     const PlotOptions& opt = {});

}  // namespace reflecto::serialize
