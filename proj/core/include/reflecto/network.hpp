#pragma once

#include <cstdint>

#include "reflecto/data.hpp"
#include "reflecto/dict.hpp"
#include "reflecto/lasso.hpp"
#include "reflecto/linalg.hpp"

namespace reflecto::network {

/// One parallel unit of the deep narrow network: a first-layer weight in
/// R^d, then scalar weights and biases under nested absolute values, and an
/// outer coefficient alpha.
struct Unit {
  Vec w1;
  Vec inner_w;  // length layers-2
  Vec biases;   // length layers-1
  double alpha = 0.0;
};

struct Params {
  int layers = 2;
  std::vector<Unit> units;
  double xi = 0.0;
};

/// The standard (non-narrow) architecture used for the trained comparisons:
/// a d-to-scalar first layer, a scalar chain, a width-m fan-out at the last
/// hidden layer, and an output combination. For layers == 2 the fan-out
/// applies directly to the first-layer projection.
struct StandardParams {
  int layers = 3;
  Vec w1;               // in R^d
  double b1 = 0.0;
  Vec mid_w;            // scalar weights for layers 2..L-2
  Vec mid_b;
  Vec last_w;           // width-m row at layer L-1
  Vec last_b;
  Vec alpha;            // length m
  double xi = 0.0;
};

double forward(const Params& params, const Vec& x);
Vec forward_all(const Params& params, const Matrix& X);

double forward_standard(const StandardParams& params, const Vec& x);

/// 0.5 ||f(X) - y||^2 + (beta/L) sum_i (|alpha_i|^L + sum_l ||W^(i,l)||_1^L)
double training_objective(const Params& params, const data::Dataset& ds, double beta);

/// Subgradients of the training objective with respect to every trainable
/// parameter, flattened in unit order (w1, inner_w, biases, alpha)* then xi.
/// The subgradient of |.| at 0 is taken as 0.
Vec objective_gradient(const Params& params, const data::Dataset& ds, double beta);

/// Maps a solution (z*, xi*) over a dictionary of feature specs to network
/// weights via the L-th-root rescaling gamma_i = |z_i|^(1/L), one unit per
/// active coefficient. The result satisfies
///   forward(params, x) = sum_i z_i * evaluate(spec_i, x) + xi*   for all x.
Params reconstruct(const lasso::Solution& sol, const dict::Dictionary& dictionary,
                   double prune_tol = 1e-10);

struct TrainOptions {
  int layers = 3;
  std::size_t units = 8;
  double beta = 1e-7;
  double lr = 5e-3;
  double weight_decay = 1e-4;
  long epochs = 1000;
  std::uint64_t seed = 0;
  // optional unit to copy into slot 0 (strongest unit of a reconstruction)
  const Params* pre_init = nullptr;
};

/// First-order baseline: full-batch adaptive-moment updates on the training
/// objective, deterministic given the seed.
Params train_baseline(const data::Dataset& ds, const TrainOptions& opt);

}  // namespace reflecto::network
