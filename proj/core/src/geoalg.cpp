#include "reflecto/geoalg.hpp"

#include <algorithm>
#include <cmath>

namespace reflecto::geoalg {

namespace {

void check_uniform(const std::vector<Vec>& vs) {
  for (const auto& v : vs) {
    if (v.size() != vs.front().size())
      throw std::invalid_argument("vector tuple: non-uniform dimensions");
    if (!all_finite(v)) throw std::invalid_argument("vector tuple: non-finite entry");
  }
}

double det2(const double* m) { return m[0] * m[3] - m[1] * m[2]; }

double det3(const double* m) {
  return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

double det4(const double* m) {
  // expansion along the first row with 3x3 minors
  double r = 0.0;
  double minor[9];
  for (int c = 0; c < 4; ++c) {
    int k = 0;
    for (int i = 1; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (j != c) minor[k++] = m[i * 4 + j];
    const double cof = det3(minor);
    r += ((c % 2 == 0) ? 1.0 : -1.0) * m[c] * cof;
  }
  return r;
}

// LU with partial pivoting; the matrix is destroyed.
double det_lu(std::vector<double>& m, std::size_t n) {
  double det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::fabs(m[k * n + k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double a = std::fabs(m[i * n + k]);
      if (a > best) {
        best = a;
        piv = i;
      }
    }
    if (best == 0.0) return 0.0;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m[k * n + j], m[piv * n + j]);
      det = -det;
    }
    const double pivval = m[k * n + k];
    det *= pivval;
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = m[i * n + k] / pivval;
      for (std::size_t j = k; j < n; ++j) m[i * n + j] -= f * m[k * n + j];
    }
  }
  return det;
}

double det_rows(const std::vector<Vec>& rows) {
  const std::size_t n = rows.size();
  std::vector<double> m(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i * n + j] = rows[i][j];
  switch (n) {
    case 1:
      return m[0];
    case 2:
      return det2(m.data());
    case 3:
      return det3(m.data());
    case 4:
      return det4(m.data());
    default:
      return det_lu(m, n);
  }
}

}  // namespace

double signed_volume(const std::vector<Vec>& rows) {
  if (rows.empty()) throw std::invalid_argument("signed_volume: empty tuple");
  check_uniform(rows);
  if (rows.size() != rows.front().size())
    throw std::invalid_argument("signed_volume: need exactly d vectors of dimension d");
  return det_rows(rows);
}

Vec generalized_cross(const std::vector<Vec>& vs) {
  if (vs.empty()) throw std::invalid_argument("generalized_cross: empty tuple");
  check_uniform(vs);
  const std::size_t d = vs.front().size();
  if (vs.size() != d - 1)
    throw std::invalid_argument("generalized_cross: need d-1 vectors of dimension d");

  // w_i = (-1)^(i) * minor_i, the cofactor of entry i in a (virtual) basis
  // row placed first. Then dot(u, w) = det(u; v_1; ...; v_{d-1}).
  Vec w(d, 0.0);
  std::vector<Vec> minor(d - 1, Vec(d - 1));
  for (std::size_t c = 0; c < d; ++c) {
    for (std::size_t i = 0; i + 1 < d; ++i) {
      std::size_t k = 0;
      for (std::size_t j = 0; j < d; ++j)
        if (j != c) minor[i][k++] = vs[i][j];
    }
    w[c] = ((c % 2 == 0) ? 1.0 : -1.0) * det_rows(minor);
  }
  return w;
}

double wedge_l2_norm(const std::vector<Vec>& vs) { return norm2(generalized_cross(vs)); }

double sparsity_factor(const Vec& x) {
  const double n1 = norm1(x);
  if (n1 == 0.0) throw std::invalid_argument("sparsity_factor: zero vector");
  if (!all_finite(x)) throw std::invalid_argument("sparsity_factor: non-finite entry");
  return norm2(x) / n1;
}

double dist_to_hyperplane(const Vec& x, const Vec& base, const Vec& normal) {
  if (x.size() != base.size() || x.size() != normal.size())
    throw std::invalid_argument("dist_to_hyperplane: dimension mismatch");
  const double nn = norm2(normal);
  if (nn == 0.0) throw std::invalid_argument("dist_to_hyperplane: zero normal");
  return std::fabs(dot(sub(x, base), normal)) / nn;
}

}  // namespace reflecto::geoalg
