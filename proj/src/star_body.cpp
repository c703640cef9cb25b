#include "starsym/star_body.hpp"

#include "starsym/harmonics.hpp"
#include "starsym/random.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace starsym {

SphereFunction::SphereFunction(int dim, Eval eval, Grad grad)
    : dim_(dim), eval_(std::move(eval)), grad_(std::move(grad)) {
  if (dim < kMinDim) throw GeometryError(fmt::format("sphere function needs dimension >= 2, got {}", dim));
  if (!eval_) throw std::invalid_argument("sphere function needs an evaluator");
}

double SphereFunction::meridian_derivative_fd(const Vector& pole, const Vector& lifted, double psi,
                                              double h) const {
  auto at = [&](double p) { return eval_(latitude_point(pole, lifted, p)); };
  const double d1 = (at(psi + h) - at(psi - h)) / (2.0 * h);
  const double d2 = (at(psi + h / 2) - at(psi - h / 2)) / h;
  return (4.0 * d2 - d1) / 3.0;
}

double SphereFunction::meridian_derivative(const Vector& pole, const Vector& lifted, double psi) const {
  if (grad_) {
    const Vector x = latitude_point(pole, lifted, psi);
    return grad_(x).dot(meridian_tangent(pole, lifted, psi));
  }
  return meridian_derivative_fd(pole, lifted, psi);
}

double SphereFunction::meridian_derivative(const EquatorFrame& frame, const Vector& eta, double psi) const {
  return meridian_derivative(frame.pole().coords(), frame.lift(eta), psi);
}

namespace {

// Deterministic unit tangent at u.
Vector probe_tangent(const Vector& u, std::mt19937_64& eng) {
  for (;;) {
    Vector t = rng::gaussian_vector(eng, static_cast<int>(u.size()));
    t -= u.dot(t) * u;
    const double r = t.norm();
    if (r > 1e-6) return t / r;
  }
}

void validate_radial(const std::string& id, const SphereFunction& rho, const RadialField::Bounds& b) {
  if (!(b.min_radius > 0.0) || !(b.max_radius >= b.min_radius))
    throw BodyError(fmt::format("{}: inconsistent radius bounds [{}, {}]", id, b.min_radius, b.max_radius));
  const auto probes = probe_directions(rho.dim());
  auto eng = rng::engine(0x5eed, 0xb0d1);
  constexpr double slack = 1e-12;
  const double fd_tol = std::max(1e-6, 1e-4 * b.lipschitz.value_or(0.0));
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const Vector& u = probes[i];
    const double r = rho(u);
    if (!(r > 0.0) || !std::isfinite(r))
      throw BodyError(fmt::format("{}: radial function not positive at probe {}", id, i));
    if (r > b.max_radius * (1 + slack) || r < b.min_radius * (1 - slack))
      throw BodyError(fmt::format("{}: radial value {} outside declared bounds [{}, {}]", id, r, b.min_radius,
                                  b.max_radius));
    const Vector t = probe_tangent(u, eng);
    if (rho.has_gradient()) {
      // Great circle through u heading along t: pole t, lifted u, psi = 0.
      const double analytic = rho.gradient(u).dot(t);
      const double fd = rho.meridian_derivative_fd(t, u, 0.0);
      if (std::abs(analytic - fd) > fd_tol)
        throw BodyError(fmt::format("{}: meridian derivative {} disagrees with finite differences {} at probe {}",
                                    id, analytic, fd, i));
    }
    if (b.lipschitz) {
      const double step = 1e-2;
      const Vector near = latitude_point(t, u, step);
      const Vector& next = probes[(i + 1) % probes.size()];
      for (const Vector* y : {&near, &next}) {
        const double lhs = std::abs(r - rho(*y));
        if (lhs > *b.lipschitz * geodesic_distance(u, *y) + slack)
          throw BodyError(fmt::format("{}: declared Lipschitz bound {} violated at probe {}", id, *b.lipschitz, i));
      }
    }
  }
}

}  // namespace

RadialField::RadialField(std::string id, SphereFunction rho, Bounds bounds, Smoothness smoothness)
    : id_(std::move(id)), rho_(std::move(rho)), bounds_(bounds), smoothness_(smoothness) {
  validate_radial(id_, rho_, bounds_);
}

ScalarField::ScalarField(SphereFunction f, std::optional<double> lipschitz, std::optional<double> sup)
    : f_(std::move(f)), lipschitz_(lipschitz), sup_(sup) {}

RadialField body_ball(int n, double radius) {
  if (!(radius > 0.0)) throw BodyError(fmt::format("ball radius must be positive, got {}", radius));
  SphereFunction rho(
      n, [radius](const Vector&) { return radius; },
      [n](const Vector&) { return Vector::Zero(n).eval(); });
  return RadialField(fmt::format("ball(n={},R={})", n, radius), std::move(rho), {radius, radius, 0.0});
}

RadialField body_shifted_ball(int n, double radius, const Vector& center) {
  if (center.size() != n) throw BodyError(fmt::format("shifted ball center needs {} components", n));
  const double c = center.norm();
  if (!(radius > 0.0) || !(c < radius))
    throw BodyError(fmt::format("shifted ball needs |c| < R (|c|={}, R={})", c, radius));
  const double k = radius * radius - c * c;
  SphereFunction rho(
      n,
      [center, k](const Vector& u) {
        const double uc = u.dot(center);
        return uc + std::sqrt(k + uc * uc);
      },
      [center, k](const Vector& u) {
        const double uc = u.dot(center);
        return ((1.0 + uc / std::sqrt(k + uc * uc)) * center).eval();
      });
  const double lip = c * (1.0 + c / std::sqrt(k));
  return RadialField(fmt::format("shifted_ball(n={},R={},|c|={})", n, radius, c), std::move(rho),
                     {radius + c, radius - c, lip});
}

RadialField body_ellipsoid(const Vector& semiaxes) {
  const int n = static_cast<int>(semiaxes.size());
  if (n < kMinDim) throw BodyError("ellipsoid needs at least two semiaxes");
  if (!(semiaxes.minCoeff() > 0.0)) throw BodyError("ellipsoid semiaxes must be positive");
  const Vector inv2 = semiaxes.array().square().inverse();
  SphereFunction rho(
      n, [inv2](const Vector& u) { return 1.0 / std::sqrt(u.array().square().matrix().dot(inv2)); },
      [inv2](const Vector& u) {
        const double q = u.array().square().matrix().dot(inv2);
        return (-std::pow(q, -1.5) * u.cwiseProduct(inv2)).eval();
      });
  const double amax = semiaxes.maxCoeff();
  const double amin = semiaxes.minCoeff();
  return RadialField(fmt::format("ellipsoid(n={})", n), std::move(rho),
                     {amax, amin, amax * amax * amax / (amin * amin)});
}

RadialField body_harmonic_perturbed_ball(double eps, int degree, int order) {
  const ScalarField y = real_harmonic(degree, order);
  const double ymax = harmonic_max_abs(degree, order);
  if (!(std::abs(eps) * ymax < 1.0))
    throw BodyError(fmt::format("harmonic ball needs |eps| < 1/max|Y| = {}, got {}", 1.0 / ymax, eps));
  const double bound = std::min(harmonic_sup_bound(degree), 1.02 * ymax);
  const double lip = std::abs(eps) * harmonic_gradient_bound(degree);
  const SphereFunction& yf = y.function();
  SphereFunction rho(
      3, [yf, eps](const Vector& u) { return 1.0 + eps * yf(u); },
      [yf, eps](const Vector& u) { return (eps * yf.gradient(u)).eval(); });
  const double lo = std::max(1.0 - std::abs(eps) * bound, 1e-3 * (1.0 - std::abs(eps) * ymax));
  return RadialField(fmt::format("harmonic_ball(eps={},l={},m={})", eps, degree, order), std::move(rho),
                     {1.0 + std::abs(eps) * bound, lo, lip});
}

RadialField scaled(const RadialField& body, double factor) {
  if (!(factor > 0.0)) throw BodyError("scale factor must be positive");
  const SphereFunction& rho = body.function();
  SphereFunction::Grad grad;
  if (rho.has_gradient()) grad = [rho, factor](const Vector& u) { return (factor * rho.gradient(u)).eval(); };
  auto b = body.bounds();
  b.max_radius *= factor;
  b.min_radius *= factor;
  if (b.lipschitz) *b.lipschitz *= factor;
  return RadialField(fmt::format("{}*{}", factor, body.id()),
                     SphereFunction(rho.dim(), [rho, factor](const Vector& u) { return factor * rho(u); }, grad),
                     b, body.smoothness());
}

namespace {

SphereFunction rotate_function(const SphereFunction& f, const Matrix& q) {
  if (q.rows() != f.dim() || q.cols() != f.dim()) throw GeometryError("rotation has wrong size");
  if ((q.transpose() * q - Matrix::Identity(f.dim(), f.dim())).cwiseAbs().maxCoeff() > 1e-12)
    throw GeometryError("rotation matrix is not orthogonal");
  SphereFunction::Grad grad;
  if (f.has_gradient()) grad = [f, q](const Vector& x) { return (q * f.gradient(q.transpose() * x)).eval(); };
  return SphereFunction(f.dim(), [f, q](const Vector& x) { return f(q.transpose() * x); }, grad);
}

}  // namespace

RadialField rotated(const RadialField& body, const Matrix& rotation) {
  return RadialField("rot(" + body.id() + ")", rotate_function(body.function(), rotation), body.bounds(),
                     body.smoothness());
}

ScalarField rotated(const ScalarField& f, const Matrix& rotation) {
  return ScalarField(rotate_function(f.function(), rotation), f.lipschitz_bound(), f.sup_bound());
}

ScalarField to_scalar_field(const RadialField& body) {
  const int n = body.dim();
  const SphereFunction& rho = body.function();
  const double p = n - 1;
  SphereFunction::Grad grad;
  if (rho.has_gradient())
    grad = [rho, n](const Vector& x) { return (std::pow(rho(x), n - 2) * rho.gradient(x)).eval(); };
  SphereFunction f(n, [rho, p](const Vector& x) { return std::pow(rho(x), p) / p; }, grad);
  const auto& b = body.bounds();
  std::optional<double> lip;
  if (b.lipschitz) lip = std::pow(b.max_radius, n - 2) * *b.lipschitz;
  // Outward rounding: evaluated radii can exceed the analytic maximum by an ulp.
  const double sup = std::pow(b.max_radius, p) / p * (1.0 + 16 * std::numeric_limits<double>::epsilon());
  return ScalarField(std::move(f), lip, sup);
}

ScalarField hyperplane_field(const RadialField& body) {
  const int n = body.dim();
  const SphereFunction& rho = body.function();
  const auto& b = body.bounds();
  std::optional<double> lip;
  if (n == 2) {
    SphereFunction::Grad grad;
    if (rho.has_gradient()) grad = [rho](const Vector& x) { return (rho.gradient(x) / rho(x)).eval(); };
    if (b.lipschitz) lip = *b.lipschitz / b.min_radius;
    return ScalarField(SphereFunction(n, [rho](const Vector& x) { return std::log(rho(x)); }, grad), lip,
                       std::max(std::abs(std::log(b.max_radius)), std::abs(std::log(b.min_radius))));
  }
  const double p = n - 2;
  SphereFunction::Grad grad;
  if (rho.has_gradient())
    grad = [rho, n](const Vector& x) { return (std::pow(rho(x), n - 3) * rho.gradient(x)).eval(); };
  if (b.lipschitz) lip = std::pow(b.max_radius, n - 3) * *b.lipschitz;
  return ScalarField(SphereFunction(n, [rho, p](const Vector& x) { return std::pow(rho(x), p) / p; }, grad), lip,
                     std::pow(b.max_radius, p) / p);
}

ScalarField odd_part(const ScalarField& f) {
  const SphereFunction& g = f.function();
  SphereFunction::Grad grad;
  if (g.has_gradient())
    grad = [g](const Vector& x) { return (0.5 * (g.gradient(x) + g.gradient(-x))).eval(); };
  return ScalarField(SphereFunction(g.dim(), [g](const Vector& x) { return 0.5 * (g(x) - g(-x)); }, grad),
                     f.lipschitz_bound(), f.sup_bound());
}

ScalarField linear_combination(double a, const ScalarField& f, double b, const ScalarField& g) {
  if (f.dim() != g.dim()) throw GeometryError("linear combination of fields with different dimensions");
  const SphereFunction& ff = f.function();
  const SphereFunction& gg = g.function();
  SphereFunction::Grad grad;
  if (ff.has_gradient() && gg.has_gradient())
    grad = [=](const Vector& x) { return (a * ff.gradient(x) + b * gg.gradient(x)).eval(); };
  std::optional<double> lip, sup;
  if (f.lipschitz_bound() && g.lipschitz_bound())
    lip = std::abs(a) * *f.lipschitz_bound() + std::abs(b) * *g.lipschitz_bound();
  if (f.sup_bound() && g.sup_bound()) sup = std::abs(a) * *f.sup_bound() + std::abs(b) * *g.sup_bound();
  return ScalarField(SphereFunction(ff.dim(), [=](const Vector& x) { return a * ff(x) + b * gg(x); }, grad), lip,
                     sup);
}

ScalarField linear_field(const Vector& e) {
  const int n = static_cast<int>(e.size());
  return ScalarField(SphereFunction(n, [e](const Vector& x) { return x.dot(e); }, [e](const Vector&) { return e; }),
                     e.norm(), e.norm());
}

double probe_sup(const ScalarField& f) {
  double sup = 0.0;
  for (const Vector& u : probe_directions(f.dim())) sup = std::max(sup, std::abs(f(u)));
  return sup;
}

std::vector<NamedBody> body_library(int n) {
  std::vector<NamedBody> out;
  out.push_back({"ball", body_ball(n, 1.0), true});
  Vector c1 = Vector::Zero(n);
  c1[0] = 0.1;
  out.push_back({"shifted_ball_a", body_shifted_ball(n, 1.0, c1), false});
  Vector c2 = Vector::Zero(n);
  c2[0] = 0.2;
  c2[1] = -0.1;
  c2[n - 1] += 0.15;
  out.push_back({"shifted_ball_b", body_shifted_ball(n, 1.0, c2), false});
  Vector a1 = Vector::Ones(n);
  a1[0] = 2.0;
  out.push_back({"ellipsoid_a", body_ellipsoid(a1), true});
  Vector a2(n);
  for (int i = 0; i < n; ++i) a2[i] = 0.8 + 0.25 * ((i * 3) % n);
  out.push_back({"ellipsoid_b", body_ellipsoid(a2), true});
  if (n == 3) {
    const std::pair<int, int> modes[] = {{1, 0}, {2, 1}, {3, -2}, {4, 3}, {5, 5}, {9, 4}};
    for (auto [l, m] : modes)
      out.push_back({fmt::format("harmonic_ball_l{}_m{}", l, m), body_harmonic_perturbed_ball(0.05, l, m),
                     l % 2 == 0});
  }
  return out;
}

}  // namespace starsym
