#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace reflecto {

using Vec = std::vector<double>;

/// Dense row-major matrix. Small and simple; everything here is desk scale.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  Vec row(std::size_t i) const {
    return Vec(data.begin() + static_cast<std::ptrdiff_t>(i * cols),
               data.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols));
  }

  // column j as a vector (used by the Lasso solver's coordinate loop)
  Vec col(std::size_t j) const {
    Vec c(rows);
    for (std::size_t i = 0; i < rows; ++i) c[i] = (*this)(i, j);
    return c;
  }
};

inline double dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("dot: dimension mismatch (" + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()) + ")");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm1(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += std::fabs(x);
  return s;
}

inline double norm2(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double norm_inf(const Vec& v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::fabs(x));
  return s;
}

inline Vec sub(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("sub: dimension mismatch");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vec add(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("add: dimension mismatch");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vec scaled(const Vec& a, double c) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return r;
}

inline bool all_finite(const Vec& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

// y = X w for row-major X
inline Vec matvec(const Matrix& X, const Vec& w) {
  if (X.cols != w.size()) throw std::invalid_argument("matvec: dimension mismatch");
  Vec y(X.rows, 0.0);
  for (std::size_t i = 0; i < X.rows; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < X.cols; ++j) s += X(i, j) * w[j];
    y[i] = s;
  }
  return y;
}

}  // namespace reflecto
