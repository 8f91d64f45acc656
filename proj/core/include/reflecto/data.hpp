#pragma once

#include <string>

#include "reflecto/linalg.hpp"

namespace reflecto::data {

/// Training data: rows of X are samples, y holds one label per row.
/// Immutable after load; safe for concurrent reads.
struct Dataset {
  Matrix X;
  Vec y;

  std::size_t n() const { return X.rows; }
  std::size_t dim() const { return X.cols; }
};

/// A point produced by repeated reflection, with the points it was
/// generated from kept as provenance.
struct ReflectionNode {
  Vec point;
  int order = 0;
  std::vector<Vec> parents;
};

/// Reflection of a about b: 2b - a.
Vec reflect(const Vec& a, const Vec& b);

/// (a + b) / 2.
Vec midpoint(const Vec& a, const Vec& b);

/// All reflections of order <= k generated from `points` (repetition of
/// parents allowed): order 0 is the points themselves, and each level
/// reflects a previous-level point about an input point or vice versa.
/// Deduplicated within 1e-9 scaled by the point-set diameter; the first
/// (lowest-order) occurrence wins.
std::vector<ReflectionNode> order_k_reflections(const std::vector<Vec>& points, int k);

/// CSV loader: one sample per row, d feature columns then one label column.
/// `skip_header` drops the first row. Errors carry row/column locations.
Dataset load_dataset(const std::string& path, bool skip_header = false);

/// X w.
Vec project_1d(const Matrix& X, const Vec& w);

}  // namespace reflecto::data
