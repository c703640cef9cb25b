#pragma once

#include "starsym/sphere_geom.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace starsym {

class BodyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Step of the central-difference fallback for meridian derivatives.
inline constexpr double kMeridianFdStep = 1e-4;

/// A real function on S^{n-1} given by an evaluator on unit vectors and an
/// optional ambient gradient. Only the tangential part of the gradient is
/// ever used, so any smooth extension off the sphere is acceptable.
class SphereFunction {
 public:
  using Eval = std::function<double(const Vector&)>;
  using Grad = std::function<Vector(const Vector&)>;

  SphereFunction() = default;
  SphereFunction(int dim, Eval eval, Grad grad = {});

  int dim() const { return dim_; }
  double operator()(const Vector& x) const { return eval_(x); }
  double operator()(const Direction& x) const { return eval_(x.coords()); }
  bool has_gradient() const { return static_cast<bool>(grad_); }
  Vector gradient(const Vector& x) const { return grad_(x); }

  /// d/dpsi f(pole*sin(psi) + lifted*cos(psi)): analytic when a gradient is
  /// available, otherwise one-level Richardson on central differences.
  double meridian_derivative(const Vector& pole, const Vector& lifted, double psi) const;
  double meridian_derivative(const EquatorFrame& frame, const Vector& eta, double psi) const;

  /// Central difference with step h plus one Richardson level, regardless
  /// of whether an analytic gradient exists.
  double meridian_derivative_fd(const Vector& pole, const Vector& lifted, double psi,
                                double h = kMeridianFdStep) const;

  const Eval& evaluator() const { return eval_; }
  const Grad& gradient_fn() const { return grad_; }

 private:
  int dim_ = 0;
  Eval eval_;
  Grad grad_;
};

enum class Smoothness { C1, Lipschitz, PiecewiseC1 };

/// Radial function of a star body: rho_K on S^{n-1}, strictly positive.
class RadialField {
 public:
  struct Bounds {
    double max_radius;                 // rho <= max_radius everywhere
    double min_radius;                 // rho >= min_radius everywhere
    std::optional<double> lipschitz;   // L(rho) w.r.t. the geodesic metric
  };

  /// Validates positivity, derivative consistency and the Lipschitz bound on
  /// the probe grid; throws BodyError on failure.
  RadialField(std::string id, SphereFunction rho, Bounds bounds, Smoothness smoothness = Smoothness::C1);

  const std::string& id() const { return id_; }
  int dim() const { return rho_.dim(); }
  const SphereFunction& function() const { return rho_; }
  double operator()(const Vector& u) const { return rho_(u); }
  double operator()(const Direction& u) const { return rho_(u); }
  double meridian_derivative(const EquatorFrame& frame, const Vector& eta, double psi) const {
    return rho_.meridian_derivative(frame, eta, psi);
  }
  const Bounds& bounds() const { return bounds_; }
  std::optional<double> lipschitz_bound() const { return bounds_.lipschitz; }
  Smoothness smoothness() const { return smoothness_; }

 private:
  std::string id_;
  SphereFunction rho_;
  Bounds bounds_;
  Smoothness smoothness_;
};

/// f: S^{n-1} -> R, canonically f = rho^{n-1}/(n-1).
class ScalarField {
 public:
  ScalarField(SphereFunction f, std::optional<double> lipschitz = {}, std::optional<double> sup = {});

  int dim() const { return f_.dim(); }
  const SphereFunction& function() const { return f_; }
  double operator()(const Vector& x) const { return f_(x); }
  double operator()(const Direction& x) const { return f_(x); }
  double meridian_derivative(const EquatorFrame& frame, const Vector& eta, double psi) const {
    return f_.meridian_derivative(frame, eta, psi);
  }
  std::optional<double> lipschitz_bound() const { return lipschitz_; }
  std::optional<double> sup_bound() const { return sup_; }

 private:
  SphereFunction f_;
  std::optional<double> lipschitz_;
  std::optional<double> sup_;
};

RadialField body_ball(int n, double radius);
RadialField body_shifted_ball(int n, double radius, const Vector& center);
RadialField body_ellipsoid(const Vector& semiaxes);
/// rho = 1 + eps * Y_{l,m} on S^2 with a real orthonormal spherical harmonic.
RadialField body_harmonic_perturbed_ball(double eps, int degree, int order);

/// The body lambda*K.
RadialField scaled(const RadialField& body, double factor);
/// The body Q*K for an orthogonal Q.
RadialField rotated(const RadialField& body, const Matrix& rotation);

/// f = rho^{n-1}/(n-1), the field whose slice integrals are conical sections.
ScalarField to_scalar_field(const RadialField& body);
/// Field whose equator transform is the z = 0 slope of hyperplane sections:
/// rho^{n-2}/(n-2) for n >= 3 and log(rho) for n = 2.
ScalarField hyperplane_field(const RadialField& body);

/// x -> (f(x) - f(-x)) / 2.
ScalarField odd_part(const ScalarField& f);
/// x -> a*f(x) + b*g(x).
ScalarField linear_combination(double a, const ScalarField& f, double b, const ScalarField& g);
/// x -> f(Q^T x).
ScalarField rotated(const ScalarField& f, const Matrix& rotation);
/// x -> <x, e>.
ScalarField linear_field(const Vector& e);

/// sup over the probe grid of |f|.
double probe_sup(const ScalarField& f);

/// Named library bodies used by the detector battery and verification runs.
struct NamedBody {
  std::string name;
  RadialField body;
  bool even;
};
/// The C^1 test library in dimension n. For n = 3 it adds harmonic balls, one of
/// degree 9 whose equator content reaches trigonometric order 8.
std::vector<NamedBody> body_library(int n);

}  // namespace starsym
