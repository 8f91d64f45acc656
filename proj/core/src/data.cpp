#include "reflecto/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace reflecto::data {

Vec reflect(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("reflect: dimension mismatch");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = 2.0 * b[i] - a[i];
  return r;
}

Vec midpoint(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("midpoint: dimension mismatch");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = 0.5 * (a[i] + b[i]);
  return r;
}

namespace {

double diameter(const std::vector<Vec>& points) {
  double d = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      d = std::max(d, norm2(sub(points[i], points[j])));
  return d;
}

bool near(const Vec& a, const Vec& b, double tol) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i] - b[i];
    d2 += t * t;
  }
  return std::sqrt(d2) <= tol;
}

}  // namespace

std::vector<ReflectionNode> order_k_reflections(const std::vector<Vec>& points, int k) {
  if (k < 0) throw std::invalid_argument("order_k_reflections: negative order");
  if (points.empty()) return {};
  for (const auto& p : points)
    if (p.size() != points.front().size())
      throw std::invalid_argument("order_k_reflections: dimension mismatch");

  const double tol = 1e-9 * (1.0 + diameter(points));

  std::vector<ReflectionNode> out;
  auto push_unique = [&](ReflectionNode node) {
    for (const auto& seen : out)
      if (near(seen.point, node.point, tol)) return;
    out.push_back(std::move(node));
  };

  for (const auto& p : points) push_unique(ReflectionNode{p, 0, {p}});

  std::size_t level_begin = 0;
  for (int order = 1; order <= k; ++order) {
    const std::size_t level_end = out.size();
    for (std::size_t s = level_begin; s < level_end; ++s) {
      for (const auto& p : points) {
        // both orientations: reflect the previous point about p, and p
        // about the previous point
        for (int variant = 0; variant < 2; ++variant) {
          const ReflectionNode& prev = out[s];
          Vec q = variant == 0 ? reflect(prev.point, p) : reflect(p, prev.point);
          ReflectionNode node;
          node.point = std::move(q);
          node.order = order;
          node.parents = prev.parents;
          node.parents.push_back(p);
          push_unique(std::move(node));
        }
      }
    }
    level_begin = 0;  // closure: reflect everything seen so far, not just the last level
  }
  return out;
}

Dataset load_dataset(const std::string& path, bool skip_header) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skip_header && lineno == 1) continue;
    // tolerate trailing \r from CRLF files
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::vector<double> fields;
    std::stringstream ss(line);
    std::string tok;
    std::size_t colno = 0;
    while (std::getline(ss, tok, ',')) {
      ++colno;
      try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used]))) ++used;
        if (used != tok.size()) throw std::invalid_argument(tok);
        if (!std::isfinite(v))
          throw std::runtime_error("non-finite value at row " + std::to_string(lineno) +
                                   ", column " + std::to_string(colno));
        fields.push_back(v);
      } catch (const std::runtime_error&) {
        throw;
      } catch (const std::exception&) {
        throw std::runtime_error("parse error at row " + std::to_string(lineno) +
                                 ", column " + std::to_string(colno) + ": '" + tok + "'");
      }
    }
    if (fields.size() < 2)
      throw std::runtime_error("row " + std::to_string(lineno) +
                               ": need at least one feature column and one label column");
    if (!rows.empty() && fields.size() != rows.front().size())
      throw std::runtime_error("row " + std::to_string(lineno) + ": expected " +
                               std::to_string(rows.front().size()) + " columns, got " +
                               std::to_string(fields.size()));
    rows.push_back(std::move(fields));
  }
  if (rows.empty()) throw std::runtime_error("empty dataset: " + path);

  const std::size_t d = rows.front().size() - 1;
  Dataset ds;
  ds.X = Matrix(rows.size(), d);
  ds.y.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < d; ++j) ds.X(i, j) = rows[i][j];
    ds.y[i] = rows[i][d];
  }
  return ds;
}

Vec project_1d(const Matrix& X, const Vec& w) { return matvec(X, w); }

}  // namespace reflecto::data
