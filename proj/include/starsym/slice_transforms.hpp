#pragma once

#include "starsym/root_finding.hpp"
#include "starsym/sphere_geom.hpp"
#include "starsym/star_body.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace starsym {

class TransformError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class CurveKind { conical, hyperplane, slice_integral };

std::string_view to_string(CurveKind kind);
CurveKind parse_curve_kind(std::string_view name);

/// Samples z -> value of one section curve in direction xi.
struct SectionCurve {
  Direction xi;
  std::vector<double> zs;
  std::vector<double> values;
  CurveKind kind;
};

/// Central-difference ladder h0, h0/2, ..., h0/2^(levels-1) with a full
/// Richardson table on top.
struct FdOptions {
  double h0 = 1e-2;
  int levels = 4;
};

struct RootOptions {
  BracketOptions bracket;
  /// Sign-change scan over [0, pi/2]. Exactly one crossing is required (the
  /// section must be star-shaped about its foot point) and its cell becomes
  /// the bisection bracket.
  int scan_points = 64;
};

struct DerivativeAtZero {
  Direction xi;
  CurveKind kind;
  double fd_value;
  double transform_value;
  /// Raw central-difference estimates (h, estimate) along the ladder.
  std::vector<std::pair<double, double>> fd_steps;
  double agreement_residual;
  /// True when successive Richardson diagonal corrections shrink.
  bool ladder_monotone;
};

/// Equator nodes lifted into R^n (columns).
Matrix lifted_nodes(const EquatorFrame& frame, const EquatorQuadrature& rule);

/// Integral of f over the latitude sphere S^{n-1} cap (xi^perp + z xi),
/// which coincides with S^{n-1} cap C(xi, z):
/// cos^{n-2}(psi) * sum_i w_i f(embed(eta_i, psi)), psi = asin z.
double slice_integral(const ScalarField& f, const EquatorFrame& frame, double z, const EquatorQuadrature& rule);

/// vol_{n-1}(K cap C(xi, z)); the slice integral of rho^{n-1}/(n-1).
double conical_section(const RadialField& body, const EquatorFrame& frame, double z,
                       const EquatorQuadrature& rule);

/// vol_{n-1}(K cap (xi^perp + z xi)) via polar coordinates about the foot point
/// z*xi. Throws TransformError when the foot point is outside K or a section
/// ray meets the boundary more than once.
double hyperplane_section(const RadialField& body, const EquatorFrame& frame, double z,
                          const EquatorQuadrature& rule, const RootOptions& opts = {});

/// sum_i w_i (df/dpsi)(eta_i, 0): integral over the equator of the meridian
/// derivative toward the pole.
double equator_transform(const ScalarField& f, const EquatorFrame& frame, const EquatorQuadrature& rule);

/// Slope at z = 0 of the chosen curve of K, next to the equator transform of
/// the matching field (rho^{n-1}/(n-1) for conical/slice curves,
/// hyperplane_field(K) for hyperplane sections). `transform_rule` defaults to
/// `rule`.
DerivativeAtZero derivative_at_zero(CurveKind kind, const RadialField& body, const EquatorFrame& frame,
                                    const EquatorQuadrature& rule, const FdOptions& fd = {},
                                    const EquatorQuadrature* transform_rule = nullptr);

/// Slice-integral slope of an arbitrary field against its equator transform.
DerivativeAtZero derivative_at_zero(const ScalarField& f, const EquatorFrame& frame, const EquatorQuadrature& rule,
                                    const FdOptions& fd = {}, const EquatorQuadrature* transform_rule = nullptr);

SectionCurve section_curve(CurveKind kind, const RadialField& body, const EquatorFrame& frame,
                           const std::vector<double>& zs, const EquatorQuadrature& rule);
SectionCurve section_curve(const ScalarField& f, const EquatorFrame& frame, const std::vector<double>& zs,
                           const EquatorQuadrature& rule);

}  // namespace starsym
