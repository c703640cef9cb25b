#include "starsym/verify.hpp"

#include "starsym/harmonics.hpp"
#include "starsym/oracle.hpp"
#include "starsym/random.hpp"
#include "starsym/slice_transforms.hpp"
#include "starsym/star_body.hpp"
#include "starsym/symmetry_detector.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>

namespace starsym {

namespace {

constexpr double kPi = std::numbers::pi;

struct Context {
  const VerifyOptions& opts;

  int resolution(int n) const { return n == 3 ? opts.resolution : default_resolution(n); }
  EquatorQuadrature rule(int n) const { return equator_rule(n, resolution(n)); }
  std::mt19937_64 engine(std::uint64_t stream) const { return rng::engine(opts.seed, stream); }
};

Direction random_direction(std::mt19937_64& eng, int n) { return Direction(rng::unit_vector(eng, n)); }

CheckResult make(std::string name, std::string description, double residual, double tol, std::string detail = {}) {
  return CheckResult{std::move(name), std::move(description), residual, tol, residual <= tol, std::move(detail)};
}

// Conical == slice integral of rho^{n-1}/(n-1); hyperplane(0) == conical(0).
CheckResult check_set_identity(const Context& ctx) {
  auto eng = ctx.engine(1);
  double worst = 0.0;
  for (int n : {2, 3, 4}) {
    const EquatorQuadrature rule = ctx.rule(n);
    for (const NamedBody& nb : body_library(n)) {
      const ScalarField f = to_scalar_field(nb.body);
      for (int k = 0; k < 5; ++k) {
        const EquatorFrame frame = make_frame(random_direction(eng, n), k);
        for (double z : {-0.4, 0.0, 0.3}) {
          worst = std::max(worst, std::abs(conical_section(nb.body, frame, z, rule) - slice_integral(f, frame, z, rule)));
        }
        worst = std::max(worst, std::abs(hyperplane_section(nb.body, frame, 0.0, rule) -
                                         conical_section(nb.body, frame, 0.0, rule)));
      }
    }
  }
  return make("set_identity", "conical == slice integral of rho^{n-1}/(n-1); hyperplane(0) == conical(0)", worst,
              1e-10);
}

// FD slope at z = 0 of all three curves against the equator transform,
// the latter evaluated with a rule of twice the resolution.
CheckResult check_eq4(const Context& ctx) {
  auto eng = ctx.engine(2);
  double worst = 0.0;
  std::string where;
  for (int n : {2, 3, 4}) {
    const EquatorQuadrature rule = ctx.rule(n);
    const EquatorQuadrature fine = equator_rule(n, 2 * ctx.resolution(n));
    const int dirs = n == 4 ? 20 : 100;
    for (const NamedBody& nb : body_library(n)) {
      for (int k = 0; k < dirs; ++k) {
        const EquatorFrame frame = make_frame(random_direction(eng, n), k);
        for (CurveKind kind : {CurveKind::conical, CurveKind::slice_integral, CurveKind::hyperplane}) {
          // Root-solved hyperplane curves cost ~100x more per point; use every fifth direction.
          if (kind == CurveKind::hyperplane && k % 5 != 0) continue;
          const DerivativeAtZero d = derivative_at_zero(kind, nb.body, frame, rule, {}, &fine);
          if (d.agreement_residual > worst) {
            worst = d.agreement_residual;
            where = fmt::format("{} n={} {}", nb.name, n, to_string(kind));
          }
        }
      }
    }
  }
  return make("eq4", "d/dz at 0 of conical/slice/hyperplane curves == equator transform of the matching field",
              worst, 1e-6, "worst: " + where);
}

// |slice/cos^{n-2}psi - slice| / |z| <= C |psi| with C = vol(S^{n-2}) sup|f| (n-2) pi / 4.
CheckResult check_tail(const Context& ctx) {
  auto eng = ctx.engine(3);
  double worst = 0.0;
  for (int n : {2, 3, 4}) {
    const EquatorQuadrature rule = ctx.rule(n);
    for (const NamedBody& nb : body_library(n)) {
      const ScalarField f = to_scalar_field(nb.body);
      const double c = sphere_measure(n - 2) * *f.sup_bound() * (n - 2) * kPi / 4;
      const EquatorFrame frame = make_frame(random_direction(eng, n));
      for (double z : {1e-1, -1e-2, 1e-3, -1e-4}) {
        const double psi = std::asin(z);
        const double s = slice_integral(f, frame, z, rule);
        const double ratio = std::abs(s / std::pow(std::cos(psi), n - 2) - s) / std::abs(z);
        const double bound = c * std::abs(psi);
        worst = std::max(worst, bound > 0 ? ratio / bound : (ratio > 0 ? 2.0 : 0.0));
      }
    }
  }
  return make("tail_term", "cos^{n-2} correction term of the difference quotient is O(|psi|)", worst, 1.0,
              "residual = max ratio / (C |psi|)");
}

// |f(eta, psi) - f(eta, 0)| / |sin psi| <= L(f) pi / 2 on random probes.
CheckResult check_majorant(const Context& ctx) {
  auto eng = ctx.engine(4);
  long violations = 0;
  double worst_ratio = 0.0;
  const int probes_per_body = 5000;
  int total = 0;
  for (int n : {2, 3, 4}) {
    for (const NamedBody& nb : body_library(n)) {
      const ScalarField f = to_scalar_field(nb.body);
      const double c = *f.lipschitz_bound() * kPi / 2;
      for (int k = 0; k < probes_per_body; ++k, ++total) {
        const Vector pole = rng::unit_vector(eng, n);
        Vector eta = rng::gaussian_vector(eng, n);
        eta -= pole.dot(eta) * pole;
        eta.normalize();
        double psi = 0.0;
        while (psi == 0.0) psi = 2.0 * rng::uniform(eng) - 1.0;
        const double q = std::abs(f(latitude_point(pole, eta, psi)) - f(eta)) / std::abs(std::sin(psi));
        if (q > c) ++violations;
        if (c > 0) worst_ratio = std::max(worst_ratio, q / c);
      }
    }
  }
  return make("majorant", "difference quotients never exceed c = L(f) pi/2", static_cast<double>(violations), 0.0,
              fmt::format("{} probes, max quotient/c = {:.6g}", total, worst_ratio));
}

// Monte Carlo slab oracles against the quadrature formulas.
CheckResult check_oracle(const Context& ctx) {
  auto eng = ctx.engine(5);
  SlabOptions so;
  so.samples = ctx.opts.oracle_samples;
  so.workers = ctx.opts.workers;
  double worst = 0.0;
  std::string where;
  auto account = [&](double analytic, const SlabEstimate& est, const std::string& label) {
    const double allowed = std::max(3.0 * est.std_error, 0.01 * std::abs(analytic));
    const double r = std::abs(analytic - est.value) / allowed;
    if (r > worst) {
      worst = r;
      where = label;
    }
  };
  // Closed forms on the unit ball.
  const RadialField ball = body_ball(3, 1.0);
  const Direction e3(Vector::Unit(3, 2));
  so.seed = ctx.opts.seed;
  for (double z : {0.0, 0.6}) {
    const SlabEstimate est = mc_cone_section(ball, e3, z, so);
    const double exact = kPi * std::sqrt(1 - z * z);
    worst = std::max(worst, std::abs(est.value - exact) / (0.01 * exact));
  }
  {
    const SlabEstimate est = mc_hyperplane_section(ball, e3, 0.5, so);
    worst = std::max(worst, std::abs(est.value - 0.75 * kPi) / (0.01 * 0.75 * kPi));
  }
  std::vector<NamedBody> pool = body_library(3);
  for (NamedBody& nb : body_library(2)) pool.push_back(std::move(nb));
  for (int k = 0; k < 20; ++k) {
    const NamedBody& nb = pool[k % pool.size()];
    const int n = nb.body.dim();
    const EquatorQuadrature rule = ctx.rule(n);
    const Direction xi = random_direction(eng, n);
    const EquatorFrame frame = make_frame(xi);
    const double z = 0.5 * (2.0 * rng::uniform(eng) - 1.0);
    so.seed = ctx.opts.seed + 101 + k;
    account(conical_section(nb.body, frame, z, rule), mc_cone_section(nb.body, xi, z, so),
            fmt::format("{} cone z={:.3f}", nb.name, z));
    account(hyperplane_section(nb.body, frame, z, rule), mc_hyperplane_section(nb.body, xi, z, so),
            fmt::format("{} hyperplane z={:.3f}", nb.name, z));
  }
  return make("oracle", "quadrature sections agree with Monte Carlo slab oracles within max(3 sigma, 1%)", worst, 1.0,
              "residual = max |analytic - oracle| / allowed; worst: " + where);
}

CheckResult check_even_annihilation(const Context& ctx) {
  double worst = 0.0;
  MultiplierOptions mo{50, ctx.resolution(3), ctx.opts.seed};
  for (int l = 0; l <= kMaxHarmonicDegree; l += 2)
    for (int m = -l; m <= l; ++m) worst = std::max(worst, estimate_multiplier(l, m, mo).max_abs_transform);
  return make("even_annihilation", "|T Y_{l,m}(xi)| vanishes for every even degree l <= 10", worst, 1e-8);
}

CheckResult check_odd_multipliers(const Context& ctx) {
  MultiplierOptions mo{50, ctx.resolution(3), ctx.opts.seed};
  double worst_fit = 0.0, min_lambda = 1e300, lambda1_err = 0.0;
  for (int l = 1; l <= 9; l += 2)
    for (int m = -l; m <= l; ++m) {
      const Multiplier mu = estimate_multiplier(l, m, mo);
      worst_fit = std::max(worst_fit, mu.residual);
      min_lambda = std::min(min_lambda, std::abs(mu.lambda));
      if (l == 1) lambda1_err = std::max(lambda1_err, std::abs(mu.lambda - 2 * kPi));
    }
  // Fold the three criteria into one normalized residual.
  const double residual = std::max({worst_fit / 1e-7, lambda1_err / 1e-6, min_lambda > 1e-3 ? 0.0 : 2.0});
  return make("odd_multipliers", "odd degrees: |lambda| > 1e-3, fit residual <= 1e-7, lambda_1 = 2 pi within 1e-6",
              residual, 1.0,
              fmt::format("max fit residual {:.3g}, min |lambda| {:.6g}, |lambda_1 - 2pi| {:.3g}", worst_fit,
                          min_lambda, lambda1_err));
}

template <class PerField>
double over_library_fields(const Context& ctx, std::uint64_t stream, int dirs, PerField&& per) {
  auto eng = ctx.engine(stream);
  double worst = 0.0;
  for (int n : {2, 3, 4}) {
    const EquatorQuadrature rule = ctx.rule(n);
    for (const NamedBody& nb : body_library(n)) {
      const ScalarField f = to_scalar_field(nb.body);
      for (int k = 0; k < dirs; ++k) worst = std::max(worst, per(nb, f, random_direction(eng, n), rule, eng));
    }
  }
  return worst;
}

CheckResult check_xi_oddness(const Context& ctx) {
  const double worst = over_library_fields(ctx, 6, 8, [](const NamedBody&, const ScalarField& f, const Direction& xi,
                                                          const EquatorQuadrature& rule, std::mt19937_64&) {
    return std::abs(equator_transform(f, make_frame(xi, 1), rule) + equator_transform(f, make_frame(-xi, 2), rule));
  });
  return make("xi_oddness", "A(-xi) = -A(xi)", worst, 1e-8);
}

CheckResult check_odd_part(const Context& ctx) {
  const double worst = over_library_fields(ctx, 7, 8, [](const NamedBody&, const ScalarField& f, const Direction& xi,
                                                          const EquatorQuadrature& rule, std::mt19937_64&) {
    const EquatorFrame frame = make_frame(xi);
    return std::abs(equator_transform(f, frame, rule) - equator_transform(odd_part(f), frame, rule));
  });
  return make("odd_part", "the transform only sees the odd part of f", worst, 1e-8);
}

CheckResult check_linearity(const Context& ctx) {
  auto eng = ctx.engine(8);
  double worst = 0.0;
  for (int n : {2, 3, 4}) {
    const EquatorQuadrature rule = ctx.rule(n);
    const auto lib = body_library(n);
    for (std::size_t i = 0; i + 1 < lib.size(); ++i) {
      const ScalarField f = to_scalar_field(lib[i].body);
      const ScalarField g = to_scalar_field(lib[i + 1].body);
      const double a = 2.0 * rng::uniform(eng) - 1.0, b = 2.0 * rng::uniform(eng) - 1.0;
      const EquatorFrame frame = make_frame(random_direction(eng, n));
      const double lhs = equator_transform(linear_combination(a, f, b, g), frame, rule);
      const double rhs = a * equator_transform(f, frame, rule) + b * equator_transform(g, frame, rule);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return make("linearity", "T(a f + b g) = a T f + b T g", worst, 1e-10);
}

CheckResult check_rotation(const Context& ctx) {
  const double worst = over_library_fields(ctx, 9, 4, [](const NamedBody&, const ScalarField& f, const Direction& xi,
                                                          const EquatorQuadrature& rule, std::mt19937_64& eng) {
    const Matrix q = rng::rotation(eng, xi.dim());
    const double base = equator_transform(f, make_frame(xi, 3), rule);
    const double turned = equator_transform(rotated(f, q), make_frame(Direction(q * xi.coords()), 4), rule);
    return std::abs(base - turned);
  });
  return make("rotation", "transform of the rotated field at the rotated direction is unchanged", worst, 1e-8);
}

CheckResult check_scaling(const Context& ctx) {
  double worst = 0.0;
  bool verdicts_agree = true;
  for (int n : {2, 3}) {
    for (const NamedBody& nb : body_library(n)) {
      SweepOptions so;
      so.num_dirs = 16;
      so.resolution = ctx.resolution(n);
      so.workers = ctx.opts.workers;
      const AsymmetryReport base = detect(nb.body, so);
      for (double lambda : {0.5, 3.0}) {
        const AsymmetryReport big = detect(scaled(nb.body, lambda), so);
        const double factor = std::pow(lambda, n - 1);
        for (std::size_t i = 0; i < base.values.size(); ++i) {
          const double denom = std::max(std::abs(factor * base.values[i]), 1e-300);
          const double rel = std::abs(big.values[i] - factor * base.values[i]);
          worst = std::max(worst, base.max_abs > 1e-12 ? rel / std::max(denom, base.max_abs * factor)
                                                       : rel / factor);
        }
        verdicts_agree = verdicts_agree && big.verdict == base.verdict;
      }
    }
  }
  return make("scaling", "values of lambda*K scale by lambda^{n-1}; verdict unchanged",
              verdicts_agree ? worst : 1.0, 1e-8, verdicts_agree ? "" : "verdict changed under scaling");
}

CheckResult check_n2_oracle(const Context& ctx) {
  auto eng = ctx.engine(10);
  const EquatorQuadrature rule = equator_rule(2, 2);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    FourierSeries s;
    const int band = 1 + static_cast<int>(rng::uniform(eng) * kMaxFourierBand);
    s.a0 = 2.0 * rng::uniform(eng) - 1.0;
    for (int k = 0; k < band; ++k) {
      s.a.push_back(2.0 * rng::uniform(eng) - 1.0);
      s.b.push_back(2.0 * rng::uniform(eng) - 1.0);
    }
    const double theta0 = 2.0 * kPi * rng::uniform(eng);
    const EquatorFrame frame = make_frame(Direction(Vector{{std::cos(theta0), std::sin(theta0)}}), trial);
    worst = std::max(worst, std::abs(equator_transform(fourier_field(s), frame, rule) - fourier_check_n2(s, theta0)));
  }
  return make("n2_oracle", "n = 2 transform equals f'(t0 - pi/2) - f'(t0 + pi/2)", worst, 1e-10);
}

CheckResult check_soundness(const Context& ctx) {
  int wrong = 0;
  std::string detail;
  for (int n : {2, 3, 4}) {
    for (const NamedBody& nb : body_library(n)) {
      SweepOptions so;
      so.num_dirs = 40;
      so.resolution = ctx.resolution(n);
      so.workers = ctx.opts.workers;
      const AsymmetryReport r = detect(nb.body, so);
      const bool expect_sym = nb.even;
      const bool must_flag = !nb.even && r.ground_truth_odd_sup.value_or(0.0) > 0.01;
      if ((expect_sym && r.verdict != Verdict::symmetric) || (must_flag && r.verdict != Verdict::asymmetric)) {
        ++wrong;
        detail += fmt::format("{} (n={}) -> {}; ", nb.name, n, to_string(r.verdict));
      }
    }
  }
  return make("detector_soundness", "even bodies -> symmetric, odd sup > 0.01 -> asymmetric", wrong, 0.0, detail);
}

CheckResult check_injectivity(const Context& ctx) {
  const ScalarField g = linear_combination(1.0, real_harmonic(3, 1), 0.5, real_harmonic(5, 2));
  MultiplierOptions mo{20, ctx.resolution(3), ctx.opts.seed};
  double err;
  try {
    err = injectivity_probe(g, 5, mo).error;
  } catch (const HarmonicsError& e) {
    return make("injectivity", "odd band-limited field is recovered from its transform", 1.0, 1e-5, e.what());
  }
  return make("injectivity", "odd band-limited field is recovered from its transform", err, 1e-5);
}

using CheckFn = CheckResult (*)(const Context&);

const std::vector<std::pair<std::string, CheckFn>>& registry() {
  static const std::vector<std::pair<std::string, CheckFn>> checks = {
      {"set_identity", check_set_identity},
      {"eq4", check_eq4},
      {"tail_term", check_tail},
      {"majorant", check_majorant},
      {"xi_oddness", check_xi_oddness},
      {"odd_part", check_odd_part},
      {"linearity", check_linearity},
      {"rotation", check_rotation},
      {"scaling", check_scaling},
      {"even_annihilation", check_even_annihilation},
      {"odd_multipliers", check_odd_multipliers},
      {"injectivity", check_injectivity},
      {"n2_oracle", check_n2_oracle},
      {"detector_soundness", check_soundness},
      {"oracle", check_oracle},
  };
  return checks;
}

}  // namespace

const std::vector<std::string>& verify_check_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

std::vector<CheckResult> run_verification(const VerifyOptions& opts) {
  if (opts.only) {
    const auto& names = verify_check_names();
    if (std::find(names.begin(), names.end(), *opts.only) == names.end())
      throw std::invalid_argument(fmt::format("unknown check '{}'", *opts.only));
  }
  const Context ctx{opts};
  std::vector<CheckResult> out;
  for (const auto& [name, fn] : registry()) {
    if (opts.only && *opts.only != name) continue;
    try {
      out.push_back(fn(ctx));
    } catch (const std::exception& e) {
      out.push_back(CheckResult{name, "", std::nan(""), 0.0, false, fmt::format("error: {}", e.what())});
    }
  }
  return out;
}

}  // namespace starsym
