#include "starsym/slice_transforms.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace starsym {

std::string_view to_string(CurveKind kind) {
  switch (kind) {
    case CurveKind::conical: return "conical";
    case CurveKind::hyperplane: return "hyperplane";
    case CurveKind::slice_integral: return "slice_integral";
  }
  return "unknown";
}

CurveKind parse_curve_kind(std::string_view name) {
  if (name == "conical") return CurveKind::conical;
  if (name == "hyperplane") return CurveKind::hyperplane;
  if (name == "slice_integral" || name == "slice") return CurveKind::slice_integral;
  throw std::invalid_argument(fmt::format("unknown curve kind '{}'", name));
}

namespace {

void check_open_z(double z) {
  if (!(std::abs(z) < 1.0)) throw TransformError(fmt::format("z = {} outside the open interval (-1, 1)", z));
}

void check_rule(const EquatorFrame& frame, const EquatorQuadrature& rule) {
  if (rule.n != frame.dim())
    throw TransformError(fmt::format("quadrature for n={} used with a frame in n={}", rule.n, frame.dim()));
}

// Neumaier summation; long uniform rules otherwise drift by ~N ulps.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    carry_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace

Matrix lifted_nodes(const EquatorFrame& frame, const EquatorQuadrature& rule) {
  check_rule(frame, rule);
  return frame.basis() * rule.nodes;
}

double slice_integral(const ScalarField& f, const EquatorFrame& frame, double z, const EquatorQuadrature& rule) {
  check_open_z(z);
  const Matrix lifted = lifted_nodes(frame, rule);
  const double psi = std::asin(z);
  const Vector& pole = frame.pole().coords();
  CompensatedSum sum;
  for (int i = 0; i < rule.size(); ++i) sum.add(rule.weights[i] * f(latitude_point(pole, lifted.col(i), psi)));
  return std::pow(std::cos(psi), frame.dim() - 2) * sum.value();
}

double conical_section(const RadialField& body, const EquatorFrame& frame, double z,
                       const EquatorQuadrature& rule) {
  return slice_integral(to_scalar_field(body), frame, z, rule);
}

double hyperplane_section(const RadialField& body, const EquatorFrame& frame, double z,
                          const EquatorQuadrature& rule, const RootOptions& opts) {
  check_open_z(z);
  const int n = frame.dim();
  const Matrix lifted = lifted_nodes(frame, rule);
  const Vector& pole = frame.pole().coords();
  const double sign = z < 0.0 ? -1.0 : 1.0;
  const double az = std::abs(z);
  constexpr double half_pi = std::numbers::pi / 2;

  if (az > 0.0 && !(body(Vector(sign * pole)) > az))
    throw TransformError(fmt::format("foot point of the section at z = {} lies outside the body", z));

  Vector x(n);
  CompensatedSum sum;
  for (int i = 0; i < rule.size(); ++i) {
    const Vector eta = lifted.col(i);
    double r;
    if (az == 0.0) {
      r = body(eta);
    } else {
      // Height of the boundary point along the half-meridian toward sign*pole.
      auto radius_at = [&](double t) {
        x.noalias() = (sign * std::sin(t)) * pole + std::cos(t) * eta;
        return body(x);
      };
      auto height = [&](double t) { return radius_at(t) * std::sin(t) - az; };
      int changes = 0;
      double lo = 0.0, hi = half_pi;
      double prev_t = 0.0, prev = height(0.0);
      for (int k = 1; k <= opts.scan_points; ++k) {
        const double t = half_pi * k / opts.scan_points;
        const double cur = height(t);
        if ((cur < 0.0) != (prev < 0.0)) {
          ++changes;
          lo = prev_t;
          hi = t;
        }
        prev_t = t;
        prev = cur;
      }
      if (changes != 1)
        throw TransformError(fmt::format(
            "section at z = {} is not star-shaped about its foot point ({} boundary crossings at node {})", z,
            changes, i));
      double t;
      try {
        t = find_root_bracketed(height, lo, hi, opts.bracket);
      } catch (const RootError& e) {
        throw TransformError(fmt::format("root bracketing failed at z = {}, node {}: {}", z, i, e.what()));
      }
      r = radius_at(t) * std::cos(t);
    }
    sum.add(rule.weights[i] * std::pow(r, n - 1));
  }
  return sum.value() / (n - 1);
}

double equator_transform(const ScalarField& f, const EquatorFrame& frame, const EquatorQuadrature& rule) {
  const Matrix lifted = lifted_nodes(frame, rule);
  const Vector& pole = frame.pole().coords();
  const SphereFunction& fn = f.function();
  CompensatedSum sum;
  for (int i = 0; i < rule.size(); ++i) {
    const double d = fn.meridian_derivative(pole, lifted.col(i), 0.0);
    if (!std::isfinite(d)) throw TransformError(fmt::format("meridian derivative not finite at equator node {}", i));
    sum.add(rule.weights[i] * d);
  }
  return sum.value();
}

namespace {

DerivativeAtZero ladder_derivative(const std::function<double(double)>& curve, const FdOptions& fd, Direction xi,
                                   CurveKind kind, double transform_value) {
  if (fd.levels < 1 || !(fd.h0 > 0.0) || !(fd.h0 < 1.0)) throw TransformError("invalid finite-difference ladder");
  std::vector<std::vector<double>> table(fd.levels);
  std::vector<std::pair<double, double>> steps;
  double h = fd.h0;
  for (int k = 0; k < fd.levels; ++k, h /= 2) {
    const double d = (curve(h) - curve(-h)) / (2.0 * h);
    steps.emplace_back(h, d);
    table[k].push_back(d);
    double pow4 = 1.0;
    for (int j = 1; j <= k; ++j) {
      pow4 *= 4.0;
      table[k].push_back(table[k][j - 1] + (table[k][j - 1] - table[k - 1][j - 1]) / (pow4 - 1.0));
    }
  }
  bool monotone = true;
  const double floor = 1e-13 * (1.0 + std::abs(table.back().back()));
  double prev_corr = -1.0;
  for (int k = 1; k < fd.levels; ++k) {
    const double corr = std::abs(table[k][k] - table[k - 1][k - 1]);
    if (prev_corr >= 0.0 && corr > prev_corr && corr > floor) monotone = false;
    prev_corr = corr;
  }
  const double value = table.back().back();
  return DerivativeAtZero{std::move(xi), kind, value, transform_value, std::move(steps),
                          std::abs(value - transform_value), monotone};
}

}  // namespace

DerivativeAtZero derivative_at_zero(CurveKind kind, const RadialField& body, const EquatorFrame& frame,
                                    const EquatorQuadrature& rule, const FdOptions& fd,
                                    const EquatorQuadrature* transform_rule) {
  const EquatorQuadrature& trule = transform_rule ? *transform_rule : rule;
  std::function<double(double)> curve;
  double transform;
  if (kind == CurveKind::hyperplane) {
    curve = [&](double z) { return hyperplane_section(body, frame, z, rule); };
    transform = equator_transform(hyperplane_field(body), frame, trule);
  } else {
    const ScalarField f = to_scalar_field(body);
    if (kind == CurveKind::conical)
      curve = [&](double z) { return conical_section(body, frame, z, rule); };
    else
      curve = [f, &frame, &rule](double z) { return slice_integral(f, frame, z, rule); };
    transform = equator_transform(f, frame, trule);
  }
  return ladder_derivative(curve, fd, frame.pole(), kind, transform);
}

DerivativeAtZero derivative_at_zero(const ScalarField& f, const EquatorFrame& frame, const EquatorQuadrature& rule,
                                    const FdOptions& fd, const EquatorQuadrature* transform_rule) {
  const double transform = equator_transform(f, frame, transform_rule ? *transform_rule : rule);
  return ladder_derivative([&](double z) { return slice_integral(f, frame, z, rule); }, fd, frame.pole(),
                           CurveKind::slice_integral, transform);
}

SectionCurve section_curve(CurveKind kind, const RadialField& body, const EquatorFrame& frame,
                           const std::vector<double>& zs, const EquatorQuadrature& rule) {
  if (!std::is_sorted(zs.begin(), zs.end()) || std::adjacent_find(zs.begin(), zs.end()) != zs.end())
    throw TransformError("section grid must be strictly increasing");
  SectionCurve out{frame.pole(), zs, {}, kind};
  const ScalarField f = to_scalar_field(body);
  out.values.reserve(zs.size());
  for (double z : zs) {
    switch (kind) {
      case CurveKind::hyperplane: out.values.push_back(hyperplane_section(body, frame, z, rule)); break;
      case CurveKind::conical:
      case CurveKind::slice_integral: out.values.push_back(slice_integral(f, frame, z, rule)); break;
    }
  }
  return out;
}

SectionCurve section_curve(const ScalarField& f, const EquatorFrame& frame, const std::vector<double>& zs,
                           const EquatorQuadrature& rule) {
  if (!std::is_sorted(zs.begin(), zs.end()) || std::adjacent_find(zs.begin(), zs.end()) != zs.end())
    throw TransformError("section grid must be strictly increasing");
  SectionCurve out{frame.pole(), zs, {}, CurveKind::slice_integral};
  for (double z : zs) out.values.push_back(slice_integral(f, frame, z, rule));
  return out;
}

}  // namespace starsym
