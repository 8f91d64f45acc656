#pragma once

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "reflecto/data.hpp"
#include "reflecto/linalg.hpp"

namespace fixtures {

using reflecto::Matrix;
using reflecto::Vec;

// two-point planar set with labels 2 and 0: x1=(2,0), x2=(0,0)
inline reflecto::data::Dataset planar_two_point() {
  reflecto::data::Dataset ds;
  ds.X = Matrix(2, 2);
  ds.X(0, 0) = 2.0;
  ds.X(0, 1) = 0.0;
  ds.X(1, 0) = 0.0;
  ds.X(1, 1) = 0.0;
  ds.y = {2.0, 0.0};
  return ds;
}

// three-point planar set: x1=(2,0), x2=(0,0), x3=(-1,0), labels 2, 0, -1
inline reflecto::data::Dataset planar_three_point() {
  reflecto::data::Dataset ds;
  ds.X = Matrix(3, 2);
  ds.X(0, 0) = 2.0;
  ds.X(1, 0) = 0.0;
  ds.X(2, 0) = -1.0;
  ds.y = {2.0, 0.0, -1.0};
  return ds;
}

inline reflecto::data::Dataset random_dataset(std::size_t n, std::size_t d,
                                              std::uint64_t seed, double span = 2.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-span, span);
  reflecto::data::Dataset ds;
  ds.X = Matrix(n, d);
  ds.y.resize(n);
  for (auto& v : ds.X.data) v = unif(rng);
  for (auto& v : ds.y) v = unif(rng);
  return ds;
}

// permutation-expansion determinant, the brute-force oracle
inline double det_bruteforce(const std::vector<Vec>& rows) {
  const std::size_t n = rows.size();
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  double det = 0.0;
  // iterate permutations with sign tracked through adjacent swaps
  std::vector<std::size_t> c(n, 0);
  double sign = 1.0;
  auto term = [&]() {
    double t = sign;
    for (std::size_t i = 0; i < n; ++i) t *= rows[i][perm[i]];
    det += t;
  };
  term();
  std::size_t i = 0;
  while (i < n) {
    if (c[i] < i) {
      std::swap(perm[i % 2 == 0 ? 0 : c[i]], perm[i]);
      sign = -sign;
      term();
      ++c[i];
      i = 0;
    } else {
      c[i++] = 0;
    }
  }
  return det;
}

class TempDir {
 public:
  TempDir() {
    auto base = std::filesystem::temp_directory_path();
    for (int k = 0;; ++k) {
      auto candidate = base / ("reflecto_test_" + std::to_string(::getpid()) + "_" +
                               std::to_string(k));
      if (std::filesystem::create_directory(candidate)) {
        path_ = candidate;
        break;
      }
    }
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace fixtures
