#include "starsym/harmonics.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace starsym;
using testing::kPi;

namespace {

/// 2 pi P_l'(0): the multiplier of degree l on S^2, derived independently by
/// applying the transform to the zonal harmonic about xi.
double zonal_multiplier(int l) { return 2 * kPi * testing::legendre(l, 0.0).second; }

}  // namespace

TEST_CASE("low-degree harmonics have the standard closed forms") {
  const double c0 = 1 / std::sqrt(4 * kPi);
  const double c1 = std::sqrt(3 / (4 * kPi));
  std::mt19937_64 gen(1);
  for (int k = 0; k < 20; ++k) {
    const Vector u = testing::random_unit(gen, 3);
    const double x = u[0], y = u[1], z = u[2];
    CHECK(real_harmonic(0, 0)(u) == doctest::Approx(c0));
    CHECK(real_harmonic(1, 0)(u) == doctest::Approx(c1 * z));
    CHECK(real_harmonic(1, 1)(u) == doctest::Approx(c1 * x));
    CHECK(real_harmonic(1, -1)(u) == doctest::Approx(c1 * y));
    CHECK(real_harmonic(2, 0)(u) == doctest::Approx(std::sqrt(5 / (16 * kPi)) * (3 * z * z - 1)));
    CHECK(real_harmonic(2, 1)(u) == doctest::Approx(std::sqrt(15 / (4 * kPi)) * x * z));
    CHECK(real_harmonic(2, -2)(u) == doctest::Approx(std::sqrt(15 / (4 * kPi)) * x * y));
    CHECK(real_harmonic(2, 2)(u) == doctest::Approx(std::sqrt(15 / (16 * kPi)) * (x * x - y * y)));
  }
}

TEST_CASE("real harmonics are orthonormal under an independent quadrature") {
  std::vector<std::pair<int, int>> modes;
  for (int l = 0; l <= 6; ++l)
    for (int m = -l; m <= l; ++m) modes.emplace_back(l, m);
  std::vector<ScalarField> ys;
  for (auto [l, m] : modes) ys.push_back(real_harmonic(l, m));
  double worst = 0.0;
  for (std::size_t i = 0; i < ys.size(); ++i)
    for (std::size_t j = i; j < ys.size(); ++j) {
      const double g = testing::integrate_s2(
          [&](const Eigen::Vector3d& p) { return ys[i](Vector(p)) * ys[j](Vector(p)); }, 16, 32);
      worst = std::max(worst, std::abs(g - (i == j ? 1.0 : 0.0)));
    }
  CHECK(worst < 1e-12);
}

TEST_CASE("harmonics are eigenfunctions of the zonal average (Funk-Hecke sanity)") {
  // Averaging Y over the circle at geodesic angle t from a point p gives P_l(cos t) Y(p).
  std::mt19937_64 gen(2);
  for (int l = 1; l <= 5; ++l) {
    const ScalarField y = real_harmonic(l, l / 2);
    const Vector p = testing::random_unit(gen, 3);
    const EquatorFrame fr = make_frame(Direction(p), l);
    const double t = 0.7;
    double avg = 0.0;
    const int count = 64;
    for (int i = 0; i < count; ++i) {
      const double a = 2 * kPi * i / count;
      avg += y(Vector(std::cos(t) * p + std::sin(t) * (std::cos(a) * fr.basis().col(0) + std::sin(a) * fr.basis().col(1)))) / count;
    }
    CHECK(avg == doctest::Approx(testing::legendre(l, std::cos(t)).first * y(p)).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("sup and gradient bounds dominate sampled values") {
  std::mt19937_64 gen(3);
  for (int l = 0; l <= kMaxHarmonicDegree; ++l)
    for (int m = -l; m <= l; ++m) {
      const ScalarField y = real_harmonic(l, m);
      CHECK(harmonic_max_abs(l, m) <= harmonic_sup_bound(l) * (1 + 1e-12));
      for (int k = 0; k < 200; ++k) {
        const Vector u = testing::random_unit(gen, 3);
        CHECK(std::abs(y(u)) <= harmonic_sup_bound(l) * (1 + 1e-12));
        const Vector g = y.function().gradient(u);
        const Vector tangential = g - g.dot(u) * u;
        CHECK(tangential.norm() <= harmonic_gradient_bound(l) * (1 + 1e-12));
      }
    }
  CHECK_THROWS_AS(real_harmonic(2, 3), HarmonicsError);
  CHECK_THROWS_AS(real_harmonic(kMaxHarmonicDegree + 1, 0), HarmonicsError);
}

TEST_CASE("multiplier of the constant, even and linear degrees") {
  const Multiplier m0 = estimate_multiplier(0, 0);
  CHECK(m0.lambda == 0.0);
  CHECK(m0.residual < 1e-10);
  for (int m = -2; m <= 2; ++m) {
    const Multiplier m2 = estimate_multiplier(2, m);
    CHECK(std::abs(m2.lambda) < 1e-8);
    CHECK(m2.residual < 1e-8);
  }
  for (int m = -1; m <= 1; ++m) CHECK(std::abs(estimate_multiplier(1, m).lambda - 2 * kPi) < 1e-8);
}

TEST_CASE("odd multipliers match 2 pi P_l'(0)") {
  for (int l = 1; l <= 9; l += 2)
    for (int m : {-l, 0, l}) {
      const Multiplier mu = estimate_multiplier(l, m);
      INFO("l=" << l << " m=" << m);
      CHECK(mu.lambda == doctest::Approx(zonal_multiplier(l)).epsilon(1e-10));
      CHECK(mu.residual <= 1e-7);
    }
  // Closed values for the first few.
  CHECK(zonal_multiplier(3) == doctest::Approx(-3 * kPi));
  CHECK(zonal_multiplier(5) == doctest::Approx(2 * kPi * 15 / 8));
}

TEST_CASE("multiplier table: n = 3 is diagonal; n = 2 matches 2k sin(k pi/2)") {
  const MultiplierTable t3 = multiplier_table(3, 4, {20, 512, 1});
  CHECK(t3.rows.size() == 25);
  for (const Multiplier& m : t3.rows) {
    CHECK(m.residual < 1e-8);
    if (m.degree % 2 == 0) CHECK(std::abs(m.lambda) < 1e-8);
  }
  const MultiplierTable t2 = multiplier_table(2, 8);
  for (const Multiplier& m : t2.rows) {
    const int k = std::abs(m.order);
    CHECK(m.lambda == doctest::Approx(2.0 * k * std::sin(k * kPi / 2)).epsilon(1e-12).scale(1.0));
    if (k % 2 == 1) CHECK(std::abs(m.lambda) > 1.0);
  }
  CHECK_THROWS_WITH_AS(multiplier_table(4, 3), doctest::Contains("unsupported for harmonic decomposition"),
                       HarmonicsError);
}

TEST_CASE("fourier_check_n2 closed values") {
  for (int k = 1; k <= 4; ++k) {
    FourierSeries s;
    s.a.assign(2 * k, 0.0);
    s.a[2 * k - 1] = 1.0;  // cos(2k theta)
    for (double t0 : {0.0, 0.4, 2.0}) CHECK(std::abs(fourier_check_n2(s, t0)) < 1e-12);
  }
  FourierSeries c;
  c.a = {1.0};
  CHECK(fourier_check_n2(c, 0.0) == doctest::Approx(2.0));
  FourierSeries k0;
  k0.a0 = 3.0;
  CHECK(fourier_check_n2(k0, 1.1) == 0.0);
  // The field and its derivative agree with the series.
  FourierSeries s;
  s.a0 = 0.5;
  s.a = {0.2, -0.3};
  s.b = {0.1, 0.0, 0.4};
  const ScalarField f = fourier_field(s);
  for (double t : {0.0, 1.0, -2.5}) {
    CHECK(f(Vector{{std::cos(t), std::sin(t)}}) == doctest::Approx(s.value(t)));
    const double h = 1e-5;
    CHECK(s.derivative(t) == doctest::Approx((s.value(t + h) - s.value(t - h)) / (2 * h)).epsilon(1e-8));
  }
}

TEST_CASE("injectivity probe reconstructs odd band-limited fields") {
  CHECK(injectivity_probe(real_harmonic(1, 0), 1).error < 1e-6);
  const ScalarField g = linear_combination(1.0, real_harmonic(3, 1), 0.5, real_harmonic(5, 2));
  const InjectivityResult r = injectivity_probe(g, 5);
  CHECK(r.error < 1e-5);
  CHECK(r.multipliers.size() == 3);
  const ScalarField zero(SphereFunction(
      3, [](const Vector&) { return 0.0; }, [](const Vector&) { return Vector(Vector::Zero(3)); }));
  CHECK(injectivity_probe(zero, 3).error == 0.0);
}
