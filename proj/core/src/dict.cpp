#include "reflecto/dict.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "reflecto/geoalg.hpp"
#include "reflecto/parallel.hpp"

namespace reflecto::dict {

namespace {

double max_abs(const Vec& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

double data_scale(const data::Dataset& ds) {
  double m = 0.0;
  for (double x : ds.X.data) m = std::max(m, std::fabs(x));
  return m;
}

/// Keeps the first occurrence of each column; two columns are duplicates
/// when their max-abs difference is within 1e-9 * (1 + max-abs value).
/// Stored columns are indexed by their first entry so lookups only scan a
/// small window.
class ColumnDeduper {
 public:
  explicit ColumnDeduper(std::vector<DictColumn>& out) : out_(out) {}

  void add(DictColumn col) {
    const double cmax = max_abs(col.values);
    const double window = 1e-9 * (1.0 + std::max(cmax, seen_max_));
    const double key = col.values.empty() ? 0.0 : col.values[0];
    for (auto it = index_.lower_bound(key - window);
         it != index_.end() && it->first <= key + window; ++it) {
      const DictColumn& other = out_[it->second];
      const double tol = 1e-9 * (1.0 + std::max(cmax, stored_max_[it->second]));
      if (within(col.values, other.values, tol)) return;
    }
    index_.emplace(key, out_.size());
    stored_max_.push_back(cmax);
    seen_max_ = std::max(seen_max_, cmax);
    out_.push_back(std::move(col));
  }

 private:
  static bool within(const Vec& a, const Vec& b, double tol) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (std::fabs(a[i] - b[i]) > tol) return false;
    return true;
  }

  std::vector<DictColumn>& out_;
  std::multimap<double, std::size_t> index_;
  std::vector<double> stored_max_;
  double seen_max_ = 0.0;
};

Vec sample_column(const FeatureSpec& spec, const data::Dataset& ds) {
  Vec values(ds.n());
  for (std::size_t i = 0; i < ds.n(); ++i) values[i] = evaluate(spec, ds.X.row(i));
  return values;
}

bool essentially_zero(const Vec& values, double scale) {
  return max_abs(values) <= 1e-14 * (1.0 + scale);
}

Vec basis_vector(std::size_t d, std::size_t l) {
  Vec e(d, 0.0);
  e[l] = 1.0;
  return e;
}

/// cross product of the given difference vectors, or empty when degenerate
/// (l1 norm below 1e-12 scaled by the product of input norms).
Vec cross_or_empty(const std::vector<Vec>& diffs) {
  double scale = 1.0;
  for (const auto& v : diffs) scale *= norm2(v);
  Vec w = geoalg::generalized_cross(diffs);
  if (norm1(w) <= geoalg::kDegenerate * scale) return {};
  return w;
}

}  // namespace

Matrix Dictionary::matrix() const {
  Matrix A(n, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j)
    for (std::size_t i = 0; i < n; ++i) A(i, j) = columns[j].values[i];
  return A;
}

double evaluate(const FeatureSpec& spec, const Vec& x) {
  if (x.size() != spec.w.size())
    throw std::invalid_argument("evaluate: input dimension does not match weight");
  if (spec.bias_chain.size() != static_cast<std::size_t>(spec.layers - 1))
    throw std::invalid_argument("evaluate: bias chain length must be layers-1");

  if (spec.activation == Activation::ReluPos)
    return std::max(0.0, dot(x, spec.w) + spec.bias_chain[0]);

  double v = std::fabs(dot(x, spec.w) + spec.bias_chain[0]);
  for (int l = 1; l + 1 < spec.layers; ++l) {
    const double s = spec.inner_signs.empty() ? 1.0 : spec.inner_signs[l - 1];
    v = std::fabs(v * s + spec.bias_chain[l]);
  }
  return v;
}

Dictionary build_2layer_1d(const data::Dataset& ds) {
  if (ds.dim() != 1) throw std::invalid_argument("build_2layer_1d: requires d = 1");

  Dictionary out;
  out.n = ds.n();
  out.d = 1;
  out.layers = 2;
  out.builder = "1d";
  out.raw_enumeration_count = ds.n();

  const double scale = data_scale(ds);
  ColumnDeduper dedup(out.columns);
  for (std::size_t j = 0; j < ds.n(); ++j) {
    FeatureSpec spec;
    spec.layers = 2;
    spec.w = {1.0};
    spec.bias_chain = {-ds.X(j, 0)};
    spec.prov.builder = "1d";
    spec.prov.sample_index = j;

    DictColumn col{sample_column(spec, ds), std::move(spec)};
    if (essentially_zero(col.values, scale)) continue;
    dedup.add(std::move(col));
  }
  return out;
}

Dictionary build_2layer_relu_nobias(const data::Dataset& ds) {
  const std::size_t n = ds.n();
  const std::size_t d = ds.dim();

  Dictionary out;
  out.n = n;
  out.d = d;
  out.layers = 2;
  out.builder = "relu-nobias";

  const double scale = data_scale(ds);
  ColumnDeduper dedup(out.columns);

  auto emit = [&](const Vec& w_raw, const std::vector<std::size_t>& combo) {
    const double w1 = norm1(w_raw);
    for (int sign : {+1, -1}) {
      FeatureSpec spec;
      spec.layers = 2;
      spec.w = scaled(w_raw, sign / w1);
      spec.bias_chain = {0.0};
      spec.activation = Activation::ReluPos;
      spec.prov.builder = "relu-nobias";
      spec.prov.combination = combo;
      spec.prov.sign = sign;
      spec.prov.w_raw = scaled(w_raw, static_cast<double>(sign));

      DictColumn col{sample_column(spec, ds), std::move(spec)};
      if (essentially_zero(col.values, scale)) continue;
      dedup.add(std::move(col));
    }
  };

  if (d == 1) {
    out.raw_enumeration_count = 2;
    emit({1.0}, {});
    return out;
  }

  // pool: samples first, then basis vectors
  std::vector<Vec> pool;
  pool.reserve(n + d);
  for (std::size_t i = 0; i < n; ++i) pool.push_back(ds.X.row(i));
  for (std::size_t l = 0; l < d; ++l) pool.push_back(basis_vector(d, l));

  // all combinations of d-1 pool members, lexicographic
  std::vector<std::size_t> combo(d - 1);
  for (std::size_t i = 0; i + 1 < d; ++i) combo[i] = i;
  while (true) {
    out.raw_enumeration_count += 2;
    std::vector<Vec> diffs;
    diffs.reserve(d - 1);
    for (std::size_t i : combo) diffs.push_back(pool[i]);
    Vec w_raw = cross_or_empty(diffs);
    if (!w_raw.empty()) emit(w_raw, combo);

    // next combination
    std::size_t k = combo.size();
    while (k > 0 && combo[k - 1] == pool.size() - (combo.size() - (k - 1))) --k;
    if (k == 0) break;
    ++combo[k - 1];
    for (std::size_t i = k; i < combo.size(); ++i) combo[i] = combo[i - 1] + 1;
  }
  return out;
}

unsigned long long count_bound(std::size_t n, std::size_t d) {
  if (n < 1 || d < 1) throw std::invalid_argument("count_bound: n, d must be >= 1");
  unsigned long long acc = 2;
  auto mul = [&acc](unsigned long long f) {
    unsigned long long r = 0;
    if (__builtin_mul_overflow(acc, f, &r))
      throw std::overflow_error("count_bound: overflow");
    acc = r;
  };
  for (std::size_t i = 0; i < d + 1; ++i) mul(n);
  for (std::size_t i = 0; i + 1 < d; ++i) mul(2 + d);
  return acc;
}

Dictionary build_3layer_absval(const data::Dataset& ds, const BuildOptions& opt) {
  const std::size_t n = ds.n();
  const std::size_t d = ds.dim();
  if (n < 2) throw std::invalid_argument("build_3layer_absval: requires N >= 2");

  // digit radixes, lexicographic: j_-1, j_0, anchor, then (j_2k, anchor_2k+1)
  std::vector<unsigned long long> radix{n, n, 2};
  for (std::size_t k = 1; k < d; ++k) {
    radix.push_back(n);
    radix.push_back(2 + d);
  }
  unsigned long long total = 1;
  for (unsigned long long r : radix) {
    if (__builtin_mul_overflow(total, r, &total))
      throw std::overflow_error("build_3layer_absval: multi-index space overflow");
  }

  // subsampling decisions are drawn in enumeration order so the subset is
  // deterministic regardless of threading
  std::vector<unsigned long long> kept;
  if (opt.subsample >= 1.0) {
    kept.resize(total);
    for (unsigned long long i = 0; i < total; ++i) kept[i] = i;
  } else {
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (unsigned long long i = 0; i < total; ++i)
      if (unif(rng) < opt.subsample) kept.push_back(i);
  }

  Dictionary out;
  out.n = n;
  out.d = d;
  out.layers = 3;
  out.builder = "absval3";
  out.raw_enumeration_count = kept.size();

  const double scale = data_scale(ds);
  std::vector<std::optional<DictColumn>> produced(kept.size());

  auto make_column = [&](std::size_t slot) {
    unsigned long long id = kept[slot];
    std::vector<std::size_t> digit(radix.size());
    for (std::size_t i = radix.size(); i-- > 0;) {
      digit[i] = static_cast<std::size_t>(id % radix[i]);
      id /= radix[i];
    }

    const std::size_t jm1 = digit[0];
    const std::size_t j0 = digit[1];
    const bool anchor_mid = digit[2] == 0;
    const Vec xm1 = ds.X.row(jm1);
    const Vec x0 = ds.X.row(j0);
    const Vec a = anchor_mid ? data::midpoint(xm1, x0) : xm1;

    std::vector<Vec> diffs;
    diffs.reserve(d - 1);
    for (std::size_t k = 1; k < d; ++k) {
      const std::size_t j2k = digit[1 + 2 * k];
      const std::size_t choice = digit[2 + 2 * k];
      if (choice == 0) {
        diffs.push_back(sub(ds.X.row(j2k), a));
      } else if (choice == 1) {
        diffs.push_back(sub(ds.X.row(j2k), data::reflect(x0, a)));
      } else {
        // anchor x_{j2k} - e_l makes the spanning difference exactly e_l
        diffs.push_back(basis_vector(d, choice - 2));
      }
    }

    Vec w_raw;
    if (d == 1) {
      w_raw = {1.0};
    } else {
      w_raw = cross_or_empty(diffs);
      if (w_raw.empty()) return;  // degenerate parallelotope
    }

    FeatureSpec spec;
    spec.layers = 3;
    spec.w = scaled(w_raw, 1.0 / norm1(w_raw));
    const double b1 = -dot(a, spec.w);
    const double b2 = -std::fabs(dot(x0, spec.w) + b1);
    spec.bias_chain = {b1, b2};
    spec.inner_signs = {1.0};
    spec.prov.builder = "absval3";
    spec.prov.j_minus1 = jm1;
    spec.prov.j0 = j0;
    spec.prov.anchor_is_midpoint = anchor_mid;
    spec.prov.anchor_point = a;
    spec.prov.spanning_diffs = diffs;
    spec.prov.w_raw = w_raw;

    DictColumn col{sample_column(spec, ds), std::move(spec)};
    if (essentially_zero(col.values, scale)) return;
    produced[slot] = std::move(col);
  };

  parallel_for(kept.size(), opt.threads, make_column);

  ColumnDeduper dedup(out.columns);
  for (auto& candidate : produced)
    if (candidate) dedup.add(std::move(*candidate));
  return out;
}

std::vector<Vec> sublibrary_weight_candidates(const data::Dataset& ds) {
  const std::size_t n = ds.n();
  const std::size_t d = ds.dim();
  std::vector<Vec> candidates;

  if (d == 1) {
    candidates.push_back({1.0});
    candidates.push_back({-1.0});
    return candidates;
  }

  for (std::size_t n1 = 0; n1 < n; ++n1) {
    for (std::size_t n2 = 0; n2 < n; ++n2) {
      const Vec x1 = ds.X.row(n1);
      const Vec x2 = ds.X.row(n2);
      for (int kind = 0; kind < 2; ++kind) {
        const Vec a = kind == 0 ? data::midpoint(x1, x2) : x1;
        const Vec ra = data::reflect(x2, a);

        std::vector<Vec> pool;
        pool.reserve(3 * n + d);
        for (std::size_t i = 0; i < n; ++i) pool.push_back(sub(ds.X.row(i), a));
        for (std::size_t i = 0; i < n; ++i) pool.push_back(sub(ds.X.row(i), x2));
        for (std::size_t i = 0; i < n; ++i) pool.push_back(sub(ds.X.row(i), ra));
        for (std::size_t l = 0; l < d; ++l) pool.push_back(basis_vector(d, l));

        std::vector<std::size_t> combo(d - 1);
        for (std::size_t i = 0; i + 1 < d; ++i) combo[i] = i;
        while (true) {
          std::vector<Vec> diffs;
          diffs.reserve(d - 1);
          for (std::size_t i : combo) diffs.push_back(pool[i]);
          Vec w_raw = cross_or_empty(diffs);
          if (!w_raw.empty()) {
            Vec w = scaled(w_raw, 1.0 / norm1(w_raw));
            candidates.push_back(w);
            candidates.push_back(scaled(w, -1.0));
          }
          std::size_t k = combo.size();
          while (k > 0 && combo[k - 1] == pool.size() - (combo.size() - (k - 1))) --k;
          if (k == 0) break;
          ++combo[k - 1];
          for (std::size_t i = k; i < combo.size(); ++i) combo[i] = combo[i - 1] + 1;
        }
      }
    }
  }
  for (std::size_t l = 0; l < d; ++l) {
    candidates.push_back(basis_vector(d, l));
    candidates.push_back(scaled(basis_vector(d, l), -1.0));
  }
  return candidates;
}

Dictionary build_deep_sublibrary(const data::Dataset& ds, int layers,
                                 const BuildOptions& opt) {
  if (layers < 2) throw std::invalid_argument("build_deep_sublibrary: layers must be >= 2");
  const std::size_t n = ds.n();
  const std::size_t d = ds.dim();

  // Feature values are invariant under w -> -w (every level sits inside an
  // absolute value), so candidates are canonicalized up to sign and
  // deduplicated before the anchor loop.
  std::vector<Vec> unique_w;
  {
    std::vector<DictColumn> holder;
    ColumnDeduper dd(holder);
    for (Vec w : sublibrary_weight_candidates(ds)) {
      std::size_t first_nz = 0;
      while (first_nz < w.size() && w[first_nz] == 0.0) ++first_nz;
      if (first_nz == w.size()) continue;
      if (w[first_nz] < 0.0) w = scaled(w, -1.0);
      DictColumn c;
      c.values = w;
      dd.add(std::move(c));
    }
    unique_w.reserve(holder.size());
    for (auto& c : holder) unique_w.push_back(std::move(c.values));
  }

  Dictionary out;
  out.n = n;
  out.d = d;
  out.layers = layers;
  out.builder = "sublib";

  unsigned long long tuples = 1;
  for (int l = 0; l + 1 < layers; ++l) {
    if (__builtin_mul_overflow(tuples, static_cast<unsigned long long>(n), &tuples))
      throw std::overflow_error("build_deep_sublibrary: anchor tuple space overflow");
  }

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const bool subsampling = opt.subsample < 1.0;

  const double scale = data_scale(ds);
  ColumnDeduper dedup(out.columns);

  for (const Vec& w : unique_w) {
    for (unsigned long long t = 0; t < tuples; ++t) {
      if (subsampling && !(unif(rng) < opt.subsample)) continue;
      ++out.raw_enumeration_count;

      std::vector<std::size_t> anchors(layers - 1);
      unsigned long long id = t;
      for (std::size_t l = anchors.size(); l-- > 0;) {
        anchors[l] = static_cast<std::size_t>(id % n);
        id /= n;
      }

      // bias recursion: each level vanishes at its anchor sample
      FeatureSpec spec;
      spec.layers = layers;
      spec.w = w;
      spec.bias_chain.resize(layers - 1);
      spec.inner_signs.assign(layers - 2, 1.0);
      spec.bias_chain[0] = -dot(ds.X.row(anchors[0]), w);
      for (int l = 1; l + 1 < layers; ++l) {
        FeatureSpec prefix;
        prefix.layers = l + 1;
        prefix.w = w;
        prefix.bias_chain.assign(spec.bias_chain.begin(), spec.bias_chain.begin() + l);
        prefix.inner_signs.assign(l - 1, 1.0);
        spec.bias_chain[l] = -evaluate(prefix, ds.X.row(anchors[l]));
      }
      spec.prov.builder = "sublib";
      spec.prov.bias_anchors = anchors;

      DictColumn col{sample_column(spec, ds), std::move(spec)};
      if (essentially_zero(col.values, scale)) continue;
      dedup.add(std::move(col));
    }
  }
  return out;
}

}  // namespace reflecto::dict
