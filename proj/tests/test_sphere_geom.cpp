#include "starsym/random.hpp"
#include "starsym/sphere_geom.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace starsym;
using testing::kPi;

namespace {

double orthonormality_residual(const EquatorFrame& f) {
  const int n = f.dim();
  Matrix full(n, n);
  full.col(0) = f.pole().coords();
  full.rightCols(n - 1) = f.basis();
  return (full.transpose() * full - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("Direction normalizes and rejects degenerate input") {
  const Direction d(Vector{{3.0, 4.0}});
  CHECK(d.coords().norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(d[0] == doctest::Approx(0.6));
  CHECK((-d)[1] == doctest::Approx(-0.8));
  CHECK_THROWS_AS(Direction(Vector::Zero(3)), GeometryError);
  CHECK_THROWS_AS(Direction(Vector::Ones(1)), GeometryError);
}

TEST_CASE("make_frame: pole e3 gives an orthonormal basis of the xy-plane") {
  const EquatorFrame f = make_frame(Direction(Vector::Unit(3, 2)), 0);
  CHECK(orthonormality_residual(f) < 1e-12);
  CHECK(f.basis().row(2).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("make_frame: n = 2 equator is the line perpendicular to the pole") {
  const EquatorFrame f = make_frame(Direction(Vector{{1.0, 0.0}}), 0);
  REQUIRE(f.basis().cols() == 1);
  CHECK(std::abs(f.basis()(0, 0)) < 1e-15);
  CHECK(std::abs(f.basis()(1, 0)) == doctest::Approx(1.0));
}

TEST_CASE("make_frame: different seeds span the same equator") {
  std::mt19937_64 gen(11);
  for (int n = 2; n <= 6; ++n) {
    const Direction pole(testing::random_unit(gen, n));
    const EquatorFrame a = make_frame(pole, 1), b = make_frame(pole, 2);
    CHECK(orthonormality_residual(a) < 1e-12);
    CHECK(orthonormality_residual(b) < 1e-12);
    // b's basis expressed in a's basis is orthogonal.
    const Matrix q = a.basis().transpose() * b.basis();
    CHECK((q.transpose() * q - Matrix::Identity(n - 1, n - 1)).cwiseAbs().maxCoeff() < 1e-12);
    const Vector eta = testing::random_unit(gen, n - 1);
    CHECK(std::abs(embed(b, eta, 0.0).coords().dot(pole.coords())) < 1e-12);
  }
}

TEST_CASE("embed: equator, pole and the pi/6 latitude") {
  const EquatorFrame f = make_frame(Direction(Vector::Unit(3, 2)), 0);
  const Vector b1 = f.basis().col(0);
  CHECK((embed(f, Vector{{1.0, 0.0}}, 0.0).coords() - b1).norm() < 1e-15);
  CHECK((embed(f, Vector{{1.0, 0.0}}, kPi / 2).coords() - Vector::Unit(3, 2)).norm() < 1e-15);
  const Direction x = embed(f, Vector{{1.0, 0.0}}, kPi / 6);
  const Vector expected = b1 * (std::sqrt(3.0) / 2) + Vector::Unit(3, 2) * 0.5;
  CHECK((x.coords() - expected).norm() < 1e-15);
  CHECK(x.coords().norm() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("embed validates its arguments") {
  const EquatorFrame f = make_frame(Direction(Vector::Unit(3, 2)), 0);
  CHECK_THROWS_AS(embed(f, Vector{{1.0, 0.0}}, 1.6), GeometryError);
  CHECK_THROWS_AS(embed(f, Vector{{1.0, 0.5}}, 0.1), GeometryError);
  CHECK_THROWS_AS(embed(f, Vector{{1.0, 0.0, 0.0}}, 0.1), GeometryError);
}

TEST_CASE("embed is an isometry onto each latitude sphere") {
  std::mt19937_64 gen(5);
  for (int n = 3; n <= 6; ++n) {
    const EquatorFrame f = make_frame(Direction(testing::random_unit(gen, n)), 3);
    for (int k = 0; k < 50; ++k) {
      const Vector e1 = testing::random_unit(gen, n - 1), e2 = testing::random_unit(gen, n - 1);
      const double psi = std::uniform_real_distribution<double>(-kPi / 2, kPi / 2)(gen);
      const double lhs = (embed(f, e1, psi).coords() - embed(f, e2, psi).coords()).norm();
      const double rhs = std::cos(psi) * (f.lift(e1) - f.lift(e2)).norm();
      CHECK(std::abs(lhs - rhs) < 1e-12);
    }
  }
}

TEST_CASE("frame covariance under rotations") {
  std::mt19937_64 gen(17);
  for (int n = 2; n <= 6; ++n) {
    const EquatorFrame f = make_frame(Direction(testing::random_unit(gen, n)), 0);
    auto eng = rng::engine(99, n);
    const Matrix r = rng::rotation(eng, n);
    const EquatorFrame g(Direction(r * f.pole().coords()), r * f.basis());
    for (int k = 0; k < 20; ++k) {
      const Vector eta = testing::random_unit(gen, n - 1);
      const double psi = std::uniform_real_distribution<double>(-1.5, 1.5)(gen);
      CHECK((embed(g, eta, psi).coords() - r * embed(f, eta, psi).coords()).norm() < 1e-12);
    }
  }
}

TEST_CASE("rotation helper returns special orthogonal matrices") {
  auto eng = rng::engine(1, 2);
  for (int n = 2; n <= 6; ++n) {
    const Matrix r = rng::rotation(eng, n);
    CHECK((r.transpose() * r - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(r.determinant() == doctest::Approx(1.0));
  }
}

TEST_CASE("sphere_measure matches closed forms") {
  CHECK(sphere_measure(0) == doctest::Approx(2.0));
  CHECK(sphere_measure(1) == doctest::Approx(2 * kPi));
  CHECK(sphere_measure(2) == doctest::Approx(4 * kPi));
  CHECK(sphere_measure(3) == doctest::Approx(2 * kPi * kPi));
  CHECK(sphere_measure(4) == doctest::Approx(8 * kPi * kPi / 3));
}

TEST_CASE("equator_rule: n = 2 is the two-point counting measure") {
  for (int res : {2, 7, 512}) {
    const EquatorQuadrature q = equator_rule(2, res);
    REQUIRE(q.size() == 2);
    CHECK(q.nodes(0, 0) == doctest::Approx(-q.nodes(0, 1)));
    CHECK(std::abs(q.nodes(0, 0)) == doctest::Approx(1.0));
    CHECK(q.weights[0] == 1.0);
    CHECK(q.weights[1] == 1.0);
  }
}

TEST_CASE("equator_rule: weights sum to the equator measure") {
  CHECK(std::abs(equator_rule(3, 256).weights.sum() - 2 * kPi) < 1e-12);
  CHECK(std::abs(equator_rule(4, 64).weights.sum() - 4 * kPi) < 1e-10);
  CHECK(std::abs(equator_rule(5, 32).weights.sum() - 2 * kPi * kPi) < 1e-10);
  CHECK(std::abs(equator_rule(6, 16).weights.sum() - sphere_measure(4)) < 1e-10);
  for (int n = 3; n <= 6; ++n) CHECK((equator_rule(n, 8).weights.array() > 0).all());
}

TEST_CASE("equator_rule n = 4 agrees with an independent Monte Carlo sphere integral") {
  const EquatorQuadrature q = equator_rule(4, 64);
  auto g = [](const Vector& x) { return std::exp(x[0]) + x[1] * x[1] * x[2]; };
  double rule = 0.0;
  for (int i = 0; i < q.size(); ++i) rule += q.weights[i] * g(q.nodes.col(i));
  std::mt19937_64 gen(2024);
  const int samples = 400000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double v = 4 * kPi * g(testing::random_unit(gen, 3));
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / samples;
  const double se = std::sqrt((sum2 / samples - mean * mean) / samples);
  CHECK(std::abs(rule - mean) < 4 * se);
  // sinh(1) closed form: integral of e^{x1} over S^2 is 4 pi sinh(1).
  CHECK(std::abs(rule - 4 * kPi * std::sinh(1.0)) < 1e-12);
}

TEST_CASE("circle rule is exact for trigonometric polynomials below resolution / 2") {
  const int res = 64;
  const EquatorQuadrature q = equator_rule(3, res);
  for (int k = 0; k < res / 2; ++k) {
    double c = 0.0, s = 0.0;
    for (int i = 0; i < q.size(); ++i) {
      const double th = std::atan2(q.nodes(1, i), q.nodes(0, i));
      c += q.weights[i] * std::cos(k * th);
      s += q.weights[i] * std::sin(k * th);
    }
    CHECK(std::abs(c - (k == 0 ? 2 * kPi : 0.0)) < 1e-12);
    CHECK(std::abs(s) < 1e-12);
  }
}

TEST_CASE("product rules integrate even monomials up to their degree") {
  for (int n : {4, 5, 6}) {
    const EquatorQuadrature q = equator_rule(n, 16);
    const int d = n - 1;  // ambient coordinates of S^{n-2}
    std::vector<std::vector<int>> exps;
    if (d == 3) exps = {{1, 0, 0}, {0, 2, 1}, {3, 1, 2}, {2, 2, 2}};
    if (d == 4) exps = {{1, 0, 0, 0}, {0, 1, 2, 0}, {2, 1, 0, 3}};
    if (d == 5) exps = {{0, 0, 0, 0, 1}, {1, 1, 1, 0, 0}, {2, 0, 1, 0, 1}};
    for (const auto& a : exps) {
      int deg = 0;
      for (int v : a) deg += 2 * v;
      REQUIRE(deg <= q.degree);
      double sum = 0.0;
      for (int i = 0; i < q.size(); ++i) {
        double m = 1.0;
        for (int c = 0; c < d; ++c) m *= std::pow(q.nodes(c, i), 2 * a[c]);
        sum += q.weights[i] * m;
      }
      CHECK(std::abs(sum - testing::sphere_even_moment(a)) < 1e-10);
    }
  }
}

TEST_CASE("gauss_jacobi_symmetric with a = 0 reproduces Gauss-Legendre") {
  Vector x, w;
  gauss_jacobi_symmetric(10, 0.0, x, w);
  std::vector<double> lx, lw;
  testing::gauss_legendre(10, lx, lw);
  std::vector<double> sorted_x(x.data(), x.data() + x.size());
  std::sort(sorted_x.begin(), sorted_x.end());
  std::sort(lx.begin(), lx.end());
  for (int i = 0; i < 10; ++i) CHECK(std::abs(sorted_x[i] - lx[i]) < 1e-13);
  CHECK(w.sum() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK((x.array().pow(18) * w.array()).sum() == doctest::Approx(2.0 / 19).epsilon(1e-13));
}

TEST_CASE("equator_rule rejects out-of-window input") {
  CHECK_THROWS_AS(equator_rule(1, 8), GeometryError);
  CHECK_THROWS_AS(equator_rule(7, 8), GeometryError);
  CHECK_THROWS_AS(equator_rule(3, 1), GeometryError);
}

TEST_CASE("probe_directions are unit vectors in the requested number") {
  for (int n = 2; n <= 6; ++n) {
    const auto probes = probe_directions(n);
    CHECK(probes.size() >= 2000);
    for (const Vector& p : probes) CHECK(std::abs(p.norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("geodesic_distance") {
  const Vector a = Vector::Unit(3, 0), b = Vector::Unit(3, 1);
  CHECK(geodesic_distance(a, b) == doctest::Approx(kPi / 2));
  CHECK(geodesic_distance(a, -a) == doctest::Approx(kPi));
  CHECK(geodesic_distance(a, a) == 0.0);
  const Vector c = Vector{{std::cos(1e-9), std::sin(1e-9), 0.0}};
  CHECK(geodesic_distance(a, c) == doctest::Approx(1e-9).epsilon(1e-6));
}
