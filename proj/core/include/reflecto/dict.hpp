#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "reflecto/data.hpp"
#include "reflecto/linalg.hpp"

namespace reflecto::dict {

enum class Activation { Abs, ReluPos };

/// Where a feature came from: builder kind, the sample indices of its
/// multi-index, and the anchor points chosen along the way. The verifier
/// needs the anchor points, the spanning differences and the raw (un-
/// normalized) weight; the rest is for reproducibility.
struct Provenance {
  std::string builder;

  // three-layer builder
  std::optional<std::size_t> j_minus1;
  std::optional<std::size_t> j0;
  bool anchor_is_midpoint = false;
  Vec anchor_point;                 // x'_{j1}
  std::vector<Vec> spanning_diffs;  // vectors the weight is orthogonal to
  Vec w_raw;                        // cross product before l1 normalization

  // deep sub-library builder
  std::vector<std::size_t> bias_anchors;

  // one-dimensional / relu builders
  std::optional<std::size_t> sample_index;
  std::vector<std::size_t> combination;
  int sign = +1;
};

/// The evaluable form of a feature: first-layer weight (l1-normalized),
/// bias chain, depth, and the activation the builder used.
struct FeatureSpec {
  int layers = 2;
  Vec w;
  Vec bias_chain;   // length layers-1
  Vec inner_signs;  // length layers-2, fixed to +1 by the builders here
  Activation activation = Activation::Abs;
  Provenance prov;
};

struct DictColumn {
  Vec values;  // feature sampled at the training rows
  FeatureSpec spec;
};

struct Dictionary {
  std::size_t n = 0;
  std::size_t d = 0;
  int layers = 2;
  std::string builder;
  // multi-indices visited before degeneracy skips and dedup
  unsigned long long raw_enumeration_count = 0;
  std::vector<DictColumn> columns;

  Matrix matrix() const;
};

struct BuildOptions {
  double subsample = 1.0;  // fraction of the multi-index space to keep
  std::uint64_t seed = 0;
  int threads = 1;
};

/// Value of the feature at x: nested absolute values for Abs, and the
/// positive part of the first layer for ReluPos (two-layer, zero bias).
double evaluate(const FeatureSpec& spec, const Vec& x);

/// Two-layer dictionary for one-dimensional data: one column per sample j
/// with entries |x_i - x_j|.
Dictionary build_2layer_1d(const data::Dataset& ds);

/// Two-layer ReLU dictionary with biases fixed to zero: columns are
/// positive parts of signed volumes spanned by samples and basis vectors,
/// normalized by the l1 norm of the cross product.
Dictionary build_2layer_relu_nobias(const data::Dataset& ds);

/// The full three-layer absolute-value dictionary. Enumerates the
/// multi-index (j_-1, j_0, anchor, (j_2, anchor_3), ..., sign) in
/// lexicographic order; degenerate cross products are skipped, all-zero
/// columns dropped and duplicates deduplicated (first occurrence wins).
/// Feature values are invariant under w -> -w, so only the + sign is
/// evaluated; raw_enumeration_count counts multi-indices.
Dictionary build_3layer_absval(const data::Dataset& ds, const BuildOptions& opt = {});

/// Data-feature sub-library for depth L >= 2: candidate first-layer
/// weights are the normalized cross products of d-1 differences of
/// augmented data (samples shifted by anchors, reflections, basis
/// vectors), plus the basis directions; bias chains are built by the
/// vanish-at-a-sample recursion over all anchor tuples in [N]^(L-1).
Dictionary build_deep_sublibrary(const data::Dataset& ds, int layers,
                                 const BuildOptions& opt = {});

/// Upper bound on the three-layer multi-index count: 2 N^(d+1) (2+d)^(d-1).
/// Throws on overflow.
unsigned long long count_bound(std::size_t n, std::size_t d);

/// Candidate first-layer weights for the sub-library (exposed for tests).
std::vector<Vec> sublibrary_weight_candidates(const data::Dataset& ds);

}  // namespace reflecto::dict
