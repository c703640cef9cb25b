#include "starsym/harmonics.hpp"

#include "starsym/random.hpp"

#include <fmt/format.h>

#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>

namespace starsym {

namespace {

using Exponents = std::array<int, 3>;

// Homogeneous polynomial in (x, y, z).
struct Polynomial {
  std::vector<std::pair<Exponents, double>> terms;
  int degree = 0;

  double operator()(const Vector& v) const {
    std::array<std::array<double, kMaxHarmonicDegree + 2>, 3> pw;
    for (int c = 0; c < 3; ++c) {
      pw[c][0] = 1.0;
      for (int k = 1; k <= degree; ++k) pw[c][k] = pw[c][k - 1] * v[c];
    }
    double s = 0.0;
    for (const auto& [e, coef] : terms) s += coef * pw[0][e[0]] * pw[1][e[1]] * pw[2][e[2]];
    return s;
  }

  Polynomial derivative(int axis) const {
    std::map<Exponents, double> acc;
    for (const auto& [e, coef] : terms) {
      if (e[axis] == 0) continue;
      Exponents d = e;
      --d[axis];
      acc[d] += coef * e[axis];
    }
    return from_map(acc, std::max(0, degree - 1));
  }

  static Polynomial from_map(const std::map<Exponents, double>& acc, int degree) {
    Polynomial p;
    p.degree = degree;
    for (const auto& [e, coef] : acc)
      if (coef != 0.0) p.terms.emplace_back(e, coef);
    return p;
  }
};

double factorial(int k) { return std::tgamma(k + 1.0); }

Polynomial harmonic_polynomial(int l, int m) {
  const int am = std::abs(m);
  // r^{l-m} P_l^{(m)}(z/r) = sum_k c_k z^{l-2k-m} (x^2+y^2+z^2)^k
  std::map<Exponents, double> radial;
  for (int k = 0; 2 * k <= l - am; ++k) {
    const double c = (k % 2 ? -1.0 : 1.0) * factorial(2 * l - 2 * k) /
                     (std::pow(2.0, l) * factorial(k) * factorial(l - k) * factorial(l - 2 * k - am));
    const int zpow = l - 2 * k - am;
    for (int i = 0; i <= k; ++i)
      for (int j = 0; i + j <= k; ++j) {
        const int q = k - i - j;
        const double mult = factorial(k) / (factorial(i) * factorial(j) * factorial(q));
        radial[{2 * i, 2 * j, 2 * q + zpow}] += c * mult;
      }
  }
  // Re (x + i y)^m or Im (x + i y)^m.
  std::map<Exponents, double> angular;
  for (int j = 0; j <= am; ++j) {
    const bool real = j % 2 == 0;
    if (real != (m >= 0)) continue;
    const double binom = factorial(am) / (factorial(j) * factorial(am - j));
    const double sign = ((real ? j / 2 : (j - 1) / 2) % 2) ? -1.0 : 1.0;
    angular[{am - j, j, 0}] += sign * binom;
  }
  double norm = std::sqrt((2.0 * l + 1.0) / (4.0 * std::numbers::pi) * factorial(l - am) / factorial(l + am));
  if (m != 0) norm *= std::numbers::sqrt2;
  std::map<Exponents, double> prod;
  for (const auto& [ea, ca] : angular)
    for (const auto& [er, cr] : radial)
      prod[{ea[0] + er[0], ea[1] + er[1], ea[2] + er[2]}] += norm * ca * cr;
  return Polynomial::from_map(prod, l);
}

void check_indices(int l, int m) {
  if (l < 0 || l > kMaxHarmonicDegree || std::abs(m) > l)
    throw HarmonicsError(fmt::format("harmonic index (l={}, m={}) outside 0 <= |m| <= l <= {}", l, m,
                                     kMaxHarmonicDegree));
}

}  // namespace

double harmonic_sup_bound(int degree) { return std::sqrt((2.0 * degree + 1.0) / (4.0 * std::numbers::pi)); }

double harmonic_gradient_bound(int degree) {
  return std::sqrt(degree * (degree + 1.0) * (2.0 * degree + 1.0) / (4.0 * std::numbers::pi));
}

ScalarField real_harmonic(int degree, int order) {
  check_indices(degree, order);
  auto p = std::make_shared<const Polynomial>(harmonic_polynomial(degree, order));
  auto grad = std::make_shared<const std::array<Polynomial, 3>>(
      std::array<Polynomial, 3>{p->derivative(0), p->derivative(1), p->derivative(2)});
  SphereFunction f(
      3, [p](const Vector& x) { return (*p)(x); },
      [grad](const Vector& x) {
        Vector g(3);
        for (int c = 0; c < 3; ++c) g[c] = (*grad)[c](x);
        return g;
      });
  return ScalarField(std::move(f), harmonic_gradient_bound(degree), harmonic_sup_bound(degree));
}

double harmonic_max_abs(int degree, int order) {
  check_indices(degree, order);
  static std::mutex mu;
  static std::map<std::pair<int, int>, double> cache;
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find({degree, order}); it != cache.end()) return it->second;
  }
  const Polynomial p = harmonic_polynomial(degree, order);
  double best = 0.0;
  for (const Vector& u : probe_directions(3, 100000)) best = std::max(best, std::abs(p(u)));
  std::lock_guard lock(mu);
  cache[{degree, order}] = best;
  return best;
}

namespace {

std::vector<Vector> sample_xis(int n, int count, std::uint64_t seed) {
  auto eng = rng::engine(seed, 0x3a17);
  std::vector<Vector> out;
  for (int i = 0; i < count; ++i) out.push_back(rng::unit_vector(eng, n));
  return out;
}

Multiplier fit_multiplier(int degree, int order, const ScalarField& y, int n, const MultiplierOptions& opts) {
  if (opts.num_xi < 1) throw HarmonicsError("multiplier fit needs at least one direction");
  const EquatorQuadrature rule = equator_rule(n, n == 2 ? 2 : opts.resolution);
  std::vector<double> ty, yy;
  for (const Vector& xi : sample_xis(n, opts.num_xi, opts.seed)) {
    const Direction d(xi);
    ty.push_back(equator_transform(y, make_frame(d), rule));
    yy.push_back(y(d));
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < ty.size(); ++i) {
    num += ty[i] * yy[i];
    den += yy[i] * yy[i];
  }
  Multiplier out{degree, order, den > 0.0 ? num / den : 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < ty.size(); ++i) {
    out.residual = std::max(out.residual, std::abs(ty[i] - out.lambda * yy[i]));
    out.max_abs_transform = std::max(out.max_abs_transform, std::abs(ty[i]));
  }
  return out;
}

FourierSeries fourier_mode(int k, bool sine) {
  FourierSeries f;
  if (k == 0) {
    f.a0 = 1.0;
    return f;
  }
  f.a.assign(k, 0.0);
  f.b.assign(k, 0.0);
  (sine ? f.b : f.a)[k - 1] = 1.0;
  return f;
}

}  // namespace

Multiplier estimate_multiplier(int degree, int order, const MultiplierOptions& opts) {
  return fit_multiplier(degree, order, real_harmonic(degree, order), 3, opts);
}

MultiplierTable multiplier_table(int n, int lmax, const MultiplierOptions& opts) {
  MultiplierTable table{n, {}};
  if (n == 3) {
    if (lmax < 0 || lmax > kMaxHarmonicDegree)
      throw HarmonicsError(fmt::format("lmax must lie in [0, {}] for n = 3", kMaxHarmonicDegree));
    for (int l = 0; l <= lmax; ++l)
      for (int m = -l; m <= l; ++m) table.rows.push_back(estimate_multiplier(l, m, opts));
    return table;
  }
  if (n == 2) {
    if (lmax < 0 || lmax > kMaxFourierBand)
      throw HarmonicsError(fmt::format("lmax must lie in [0, {}] for n = 2", kMaxFourierBand));
    for (int k = 0; k <= lmax; ++k) {
      table.rows.push_back(fit_multiplier(k, k, fourier_field(fourier_mode(k, false)), 2, opts));
      if (k > 0) table.rows.push_back(fit_multiplier(k, -k, fourier_field(fourier_mode(k, true)), 2, opts));
    }
    return table;
  }
  throw HarmonicsError(fmt::format("dimension {} unsupported for harmonic decomposition", n));
}

double FourierSeries::value(double theta) const {
  double s = a0;
  for (std::size_t k = 1; k <= a.size(); ++k) s += a[k - 1] * std::cos(k * theta);
  for (std::size_t k = 1; k <= b.size(); ++k) s += b[k - 1] * std::sin(k * theta);
  return s;
}

double FourierSeries::derivative(double theta) const {
  double s = 0.0;
  for (std::size_t k = 1; k <= a.size(); ++k) s -= k * a[k - 1] * std::sin(k * theta);
  for (std::size_t k = 1; k <= b.size(); ++k) s += k * b[k - 1] * std::cos(k * theta);
  return s;
}

ScalarField fourier_field(const FourierSeries& f) {
  if (f.band() > kMaxFourierBand)
    throw HarmonicsError(fmt::format("Fourier band {} exceeds {}", f.band(), kMaxFourierBand));
  double sup = std::abs(f.a0), lip = 0.0;
  for (std::size_t k = 1; k <= static_cast<std::size_t>(f.band()); ++k) {
    const double ak = k <= f.a.size() ? f.a[k - 1] : 0.0;
    const double bk = k <= f.b.size() ? f.b[k - 1] : 0.0;
    sup += std::hypot(ak, bk);
    lip += k * std::hypot(ak, bk);
  }
  SphereFunction fn(
      2, [f](const Vector& x) { return f.value(std::atan2(x[1], x[0])); },
      [f](const Vector& x) {
        const double theta = std::atan2(x[1], x[0]);
        const double d = f.derivative(theta);
        return Vector{{-std::sin(theta) * d, std::cos(theta) * d}};
      });
  return ScalarField(std::move(fn), lip, sup);
}

double fourier_check_n2(const FourierSeries& f, double theta0) {
  if (f.band() > kMaxFourierBand)
    throw HarmonicsError(fmt::format("Fourier band {} exceeds {}", f.band(), kMaxFourierBand));
  constexpr double half_pi = std::numbers::pi / 2;
  return f.derivative(theta0 - half_pi) - f.derivative(theta0 + half_pi);
}

InjectivityResult injectivity_probe(const ScalarField& g, int lmax, const MultiplierOptions& opts) {
  if (g.dim() != 3) throw HarmonicsError("injectivity probe is implemented for n = 3");
  if (lmax < 1 || lmax > kMaxHarmonicDegree)
    throw HarmonicsError(fmt::format("band limit must lie in [1, {}]", kMaxHarmonicDegree));
  InjectivityResult out;
  MultiplierOptions fit = opts;
  fit.num_xi = std::min(opts.num_xi, 20);
  std::map<int, double> lambda;
  for (int l = 1; l <= lmax; l += 2) {
    const Multiplier mu = estimate_multiplier(l, 0, fit);
    if (std::abs(mu.lambda) < 1e-6)
      throw HarmonicsError(fmt::format("near-kernel odd mode: |lambda_{}| = {} < 1e-6", l, std::abs(mu.lambda)));
    lambda[l] = mu.lambda;
    out.multipliers.push_back(mu);
  }
  // Exact for the products T g * Y of total degree <= 2 lmax.
  const EquatorQuadrature sphere = sphere_product_rule(2, 2 * lmax + 2, lmax + 1);
  const EquatorQuadrature rule = equator_rule(3, opts.resolution);
  Vector tg(sphere.size());
  for (int i = 0; i < sphere.size(); ++i) tg[i] = equator_transform(g, make_frame(Direction(sphere.nodes.col(i))), rule);

  std::vector<std::pair<ScalarField, double>> terms;
  for (int l = 1; l <= lmax; l += 2)
    for (int m = -l; m <= l; ++m) {
      ScalarField y = real_harmonic(l, m);
      double c = 0.0;
      for (int i = 0; i < sphere.size(); ++i) c += sphere.weights[i] * tg[i] * y(Vector(sphere.nodes.col(i)));
      terms.emplace_back(std::move(y), c / lambda[l]);
    }
  for (const Vector& u : probe_directions(3)) {
    double rec = 0.0;
    for (const auto& [y, c] : terms) rec += c * y(u);
    out.error = std::max(out.error, std::abs(rec - g(u)));
  }
  return out;
}

}  // namespace starsym
