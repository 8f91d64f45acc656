#include "reflecto/network.hpp"

#include <algorithm>
#include <cmath>

namespace reflecto::network {

namespace {

void check_unit(const Unit& u, int layers) {
  if (u.inner_w.size() != static_cast<std::size_t>(layers - 2) ||
      u.biases.size() != static_cast<std::size_t>(layers - 1))
    throw std::invalid_argument("network unit: weight/bias lengths do not match depth");
}

double sgn(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

// forward pass of one unit, optionally recording pre-activation signs and
// the post-activation values of every level
double unit_forward(const Unit& u, int layers, const Vec& x, Vec* signs, Vec* levels) {
  double t = dot(x, u.w1) + u.biases[0];
  if (signs) (*signs)[0] = sgn(t);
  double v = std::fabs(t);
  if (levels) (*levels)[0] = v;
  for (int l = 2; l <= layers - 1; ++l) {
    t = v * u.inner_w[l - 2] + u.biases[l - 1];
    if (signs) (*signs)[l - 1] = sgn(t);
    v = std::fabs(t);
    if (levels) (*levels)[l - 1] = v;
  }
  return v;
}

}  // namespace

double forward(const Params& params, const Vec& x) {
  double out = params.xi;
  for (const Unit& u : params.units) {
    if (x.size() != u.w1.size())
      throw std::invalid_argument("forward: input dimension mismatch");
    check_unit(u, params.layers);
    out += u.alpha * unit_forward(u, params.layers, x, nullptr, nullptr);
  }
  return out;
}

Vec forward_all(const Params& params, const Matrix& X) {
  Vec out(X.rows);
  for (std::size_t i = 0; i < X.rows; ++i) out[i] = forward(params, X.row(i));
  return out;
}

double forward_standard(const StandardParams& p, const Vec& x) {
  if (x.size() != p.w1.size())
    throw std::invalid_argument("forward_standard: input dimension mismatch");
  const std::size_t m = p.alpha.size();
  if (p.last_w.size() != m || p.last_b.size() != m)
    throw std::invalid_argument("forward_standard: final layer width mismatch");
  if (p.layers >= 3 &&
      (p.mid_w.size() != static_cast<std::size_t>(p.layers - 3) ||
       p.mid_b.size() != static_cast<std::size_t>(p.layers - 3)))
    throw std::invalid_argument("forward_standard: scalar chain length mismatch");

  double h = dot(x, p.w1);
  if (p.layers >= 3) {
    h = std::fabs(h + p.b1);
    for (std::size_t l = 0; l < p.mid_w.size(); ++l)
      h = std::fabs(h * p.mid_w[l] + p.mid_b[l]);
  }
  double out = p.xi;
  for (std::size_t k = 0; k < m; ++k)
    out += p.alpha[k] * std::fabs(h * p.last_w[k] + p.last_b[k]);
  return out;
}

double training_objective(const Params& params, const data::Dataset& ds, double beta) {
  if (beta <= 0.0) throw std::invalid_argument("training_objective: beta must be > 0");
  const int L = params.layers;
  const Vec fit = forward_all(params, ds.X);
  double loss = 0.0;
  for (std::size_t i = 0; i < ds.n(); ++i) {
    const double e = fit[i] - ds.y[i];
    loss += e * e;
  }
  double reg = 0.0;
  for (const Unit& u : params.units) {
    reg += std::pow(std::fabs(u.alpha), L);
    reg += std::pow(norm1(u.w1), L);
    for (double w : u.inner_w) reg += std::pow(std::fabs(w), L);
  }
  return 0.5 * loss + (beta / L) * reg;
}

Vec objective_gradient(const Params& params, const data::Dataset& ds, double beta) {
  const int L = params.layers;
  const std::size_t d = ds.dim();
  const std::size_t per_unit = d + static_cast<std::size_t>(L - 2) +
                               static_cast<std::size_t>(L - 1) + 1;
  Vec grad(params.units.size() * per_unit + 1, 0.0);

  const Vec fit = forward_all(params, ds.X);
  Vec err(ds.n());
  for (std::size_t i = 0; i < ds.n(); ++i) err[i] = fit[i] - ds.y[i];

  Vec signs(L - 1), levels(L - 1);
  for (std::size_t ui = 0; ui < params.units.size(); ++ui) {
    const Unit& u = params.units[ui];
    double* g = grad.data() + ui * per_unit;
    double* g_w1 = g;
    double* g_inner = g + d;
    double* g_bias = g + d + (L - 2);
    double* g_alpha = g + per_unit - 1;

    for (std::size_t i = 0; i < ds.n(); ++i) {
      const Vec x = ds.X.row(i);
      const double value = unit_forward(u, L, x, &signs, &levels);
      *g_alpha += err[i] * value;

      // backprop through the nested chain: d(out)/d(t_l) for each level
      double up = err[i] * u.alpha;
      for (int l = L - 1; l >= 1; --l) {
        const double dt = up * signs[l - 1];
        g_bias[l - 1] += dt;
        if (l == 1) {
          for (std::size_t k = 0; k < d; ++k) g_w1[k] += dt * x[k];
        } else {
          g_inner[l - 2] += dt * levels[l - 2];
          up = dt * u.inner_w[l - 2];
        }
      }
    }

    // regularizer: beta |q|^(L-1) sign(q), with the l1 norm for w1
    const double wn = norm1(u.w1);
    const double wfac = beta * std::pow(wn, L - 1);
    for (std::size_t k = 0; k < d; ++k) g_w1[k] += wfac * sgn(u.w1[k]);
    for (int l = 0; l < L - 2; ++l)
      g_inner[l] += beta * std::pow(std::fabs(u.inner_w[l]), L - 1) * sgn(u.inner_w[l]);
    *g_alpha += beta * std::pow(std::fabs(u.alpha), L - 1) * sgn(u.alpha);
  }

  double gxi = 0.0;
  for (double e : err) gxi += e;
  grad.back() = gxi;
  return grad;
}

Params reconstruct(const lasso::Solution& sol, const dict::Dictionary& dictionary,
                   double prune_tol) {
  if (sol.z.size() != dictionary.columns.size())
    throw std::invalid_argument("reconstruct: solution and dictionary size mismatch");
  const int L = dictionary.layers;

  Params params;
  params.layers = L;
  params.xi = sol.xi;
  for (std::size_t j = 0; j < sol.z.size(); ++j) {
    const double zj = sol.z[j];
    if (std::fabs(zj) <= prune_tol) continue;
    const dict::FeatureSpec& spec = dictionary.columns[j].spec;
    if (spec.activation != dict::Activation::Abs)
      throw std::invalid_argument(
          "reconstruct: dictionary feature is not an absolute-value chain");
    if (spec.layers != L)
      throw std::invalid_argument("reconstruct: feature depth does not match dictionary");

    const double gamma = std::pow(std::fabs(zj), 1.0 / L);
    Unit u;
    u.w1 = scaled(spec.w, gamma);
    u.inner_w.assign(L - 2, gamma);
    u.biases.resize(L - 1);
    double g = gamma;
    for (int l = 0; l < L - 1; ++l) {
      u.biases[l] = spec.bias_chain[l] * g;  // b^l scaled by gamma^l
      g *= gamma;
    }
    u.alpha = sgn(zj) * gamma;
    params.units.push_back(std::move(u));
  }
  return params;
}

namespace {

// explicit-normal generator kept independent of the standard library's
// distribution internals so seeded runs reproduce everywhere
class SeededNormal {
 public:
  explicit SeededNormal(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

  double uniform() {
    // splitmix64
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z = z ^ (z >> 31);
    return (static_cast<double>(z >> 11) + 0.5) * (1.0 / 9007199254740992.0);
  }

  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

 private:
  std::uint64_t state_;
};

}  // namespace

Params train_baseline(const data::Dataset& ds, const TrainOptions& opt) {
  if (opt.units < 1) throw std::invalid_argument("train_baseline: need at least one unit");
  if (opt.epochs < 0) throw std::invalid_argument("train_baseline: negative epoch count");
  const int L = opt.layers;
  const std::size_t d = ds.dim();

  Params params;
  params.layers = L;
  params.xi = 0.0;
  SeededNormal rng(opt.seed);
  for (std::size_t i = 0; i < opt.units; ++i) {
    Unit u;
    u.w1.resize(d);
    const double s1 = 1.0 / std::sqrt(static_cast<double>(d));
    for (auto& w : u.w1) w = rng.normal() * s1;
    u.inner_w.resize(L - 2);
    for (auto& w : u.inner_w) w = rng.normal();
    u.biases.resize(L - 1);
    u.biases[0] = rng.normal() * s1;
    for (int l = 1; l < L - 1; ++l) u.biases[l] = rng.normal();
    u.alpha = rng.normal() / std::sqrt(static_cast<double>(opt.units));
    params.units.push_back(std::move(u));
  }

  if (opt.pre_init && !opt.pre_init->units.empty()) {
    if (opt.pre_init->layers != L)
      throw std::invalid_argument("train_baseline: pre-init depth mismatch");
    // copy the strongest unit into slot 0, and take over the output bias
    const auto best = std::max_element(
        opt.pre_init->units.begin(), opt.pre_init->units.end(),
        [](const Unit& a, const Unit& b) { return std::fabs(a.alpha) < std::fabs(b.alpha); });
    params.units[0] = *best;
    params.xi = opt.pre_init->xi;
  }

  const std::size_t per_unit = d + static_cast<std::size_t>(L - 2) +
                               static_cast<std::size_t>(L - 1) + 1;
  const std::size_t nparam = opt.units * per_unit + 1;

  auto flatten = [&](const Params& p) {
    Vec theta(nparam);
    std::size_t k = 0;
    for (const Unit& u : p.units) {
      for (double v : u.w1) theta[k++] = v;
      for (double v : u.inner_w) theta[k++] = v;
      for (double v : u.biases) theta[k++] = v;
      theta[k++] = u.alpha;
    }
    theta[k] = p.xi;
    return theta;
  };
  auto unflatten = [&](const Vec& theta, Params& p) {
    std::size_t k = 0;
    for (Unit& u : p.units) {
      for (double& v : u.w1) v = theta[k++];
      for (double& v : u.inner_w) v = theta[k++];
      for (double& v : u.biases) v = theta[k++];
      u.alpha = theta[k++];
    }
    p.xi = theta[k];
  };

  Vec theta = flatten(params);
  Vec m(nparam, 0.0), v(nparam, 0.0);
  const double b1 = 0.9, b2 = 0.999, eps = 1e-8;

  for (long epoch = 1; epoch <= opt.epochs; ++epoch) {
    Vec g = objective_gradient(params, ds, opt.beta);
    for (double gv : g)
      if (!std::isfinite(gv))
        throw std::runtime_error("train_baseline: non-finite gradient at epoch " +
                                 std::to_string(epoch));
    if (opt.weight_decay != 0.0)
      for (std::size_t k = 0; k < nparam; ++k) g[k] += opt.weight_decay * theta[k];

    const double c1 = 1.0 - std::pow(b1, epoch);
    const double c2 = 1.0 - std::pow(b2, epoch);
    for (std::size_t k = 0; k < nparam; ++k) {
      m[k] = b1 * m[k] + (1.0 - b1) * g[k];
      v[k] = b2 * v[k] + (1.0 - b2) * g[k] * g[k];
      theta[k] -= opt.lr * (m[k] / c1) / (std::sqrt(v[k] / c2) + eps);
    }
    unflatten(theta, params);
  }
  return params;
}

}  // namespace reflecto::network
