#include "starsym/oracle.hpp"
#include "starsym/slice_transforms.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace starsym;
using testing::kPi;

namespace {

SlabOptions samples(std::size_t n, std::uint64_t seed = 1) {
  SlabOptions o;
  o.samples = n;
  o.seed = seed;
  return o;
}

}  // namespace

TEST_CASE("cone oracle on the unit ball") {
  const RadialField ball = body_ball(3, 1.0);
  const Direction e3(Vector::Unit(3, 2));
  const SlabEstimate flat = mc_cone_section(ball, e3, 0.0, samples(1'000'000));
  CHECK(std::abs(flat.value - kPi) < 3 * flat.std_error);
  CHECK(std::abs(flat.value - kPi) < 0.01 * kPi);
  CHECK(flat.samples == 1'000'000);
  CHECK(flat.slab_half_width == 0.01);
  CHECK(flat.std_error > 0.0);
  const SlabEstimate frustum = mc_cone_section(ball, e3, 0.6, samples(1'000'000, 2));
  CHECK(std::abs(frustum.value - 0.8 * kPi) < 0.01 * 0.8 * kPi);
}

TEST_CASE("cone oracle on the shifted disk") {
  const RadialField disk = body_shifted_ball(2, 1.0, Vector{{0.5, 0.0}});
  const SlabEstimate e = mc_cone_section(disk, Direction(Vector{{1.0, 0.0}}), 0.0, samples(1'000'000));
  CHECK(std::abs(e.value - 1.7320508) < 0.01 * 1.7320508);
}

TEST_CASE("hyperplane oracle: ball, cone agreement at z = 0, ellipsoid") {
  const RadialField ball = body_ball(3, 1.0);
  const Direction e3(Vector::Unit(3, 2));
  const SlabEstimate h = mc_hyperplane_section(ball, e3, 0.5, samples(1'000'000));
  CHECK(std::abs(h.value - 0.75 * kPi) < 0.01 * 0.75 * kPi);

  const RadialField k = body_shifted_ball(3, 1.0, Vector{{0.2, 0.1, -0.1}});
  const Direction xi(Vector{{0.3, -0.5, 0.8}});
  const SlabEstimate hz = mc_hyperplane_section(k, xi, 0.0, samples(1'000'000, 3));
  const SlabEstimate cz = mc_cone_section(k, xi, 0.0, samples(1'000'000, 4));
  CHECK(std::abs(hz.value - cz.value) < 3 * std::hypot(hz.std_error, cz.std_error) + 2e-3 * hz.value);

  const RadialField e = body_ellipsoid(Vector{{2.0, 1.0, 1.0}});
  const SlabEstimate he = mc_hyperplane_section(e, Direction(Vector::Unit(3, 0)), 0.0, samples(1'000'000));
  CHECK(std::abs(he.value - kPi) < 0.01 * kPi);
}

TEST_CASE("oracles agree with the quadrature formulas") {
  std::mt19937_64 gen(10);
  for (int n = 2; n <= 4; ++n) {
    const EquatorQuadrature q = equator_rule(n, default_resolution(n));
    for (const NamedBody& nb : body_library(n)) {
      const Vector xi = testing::random_unit(gen, n);
      const double z = std::uniform_real_distribution<double>(-0.4, 0.4)(gen);
      const EquatorFrame fr = make_frame(Direction(xi));
      const SlabEstimate c = mc_cone_section(nb.body, Direction(xi), z, samples(400'000, 5));
      const SlabEstimate h = mc_hyperplane_section(nb.body, Direction(xi), z, samples(400'000, 6));
      const double ca = conical_section(nb.body, fr, z, q), ha = hyperplane_section(nb.body, fr, z, q);
      INFO(nb.name << " n=" << n << " z=" << z);
      CHECK(std::abs(c.value - ca) <= std::max(3 * c.std_error, 0.01 * ca));
      CHECK(std::abs(h.value - ha) <= std::max(3 * h.std_error, 0.01 * ha));
    }
  }
}

TEST_CASE("estimates do not depend on the worker count") {
  const RadialField k = body_ellipsoid(Vector{{1.5, 1.0, 0.8}});
  const Direction xi(Vector{{1.0, 1.0, 0.0}});
  SlabOptions a = samples(100'000), b = samples(100'000);
  a.workers = 1;
  b.workers = 4;
  CHECK(mc_cone_section(k, xi, 0.2, a).value == mc_cone_section(k, xi, 0.2, b).value);
  CHECK(mc_hyperplane_section(k, xi, -0.3, a).value == mc_hyperplane_section(k, xi, -0.3, b).value);
  CHECK(mc_cone_section(k, xi, 0.2, a).std_error == mc_cone_section(k, xi, 0.2, b).std_error);
}

TEST_CASE("invalid oracle parameters are rejected") {
  const RadialField ball = body_ball(3, 1.0);
  const Direction e3(Vector::Unit(3, 2));
  CHECK_THROWS(mc_cone_section(ball, e3, 0.0, samples(100)));
  SlabOptions wide = samples(100'000);
  wide.half_width = 0.2;
  CHECK_THROWS(mc_cone_section(ball, e3, 0.9, wide));
  wide.half_width = 0.0;
  CHECK_THROWS(mc_hyperplane_section(ball, e3, 0.0, wide));
  CHECK_THROWS(mc_hyperplane_section(ball, Direction(Vector::Unit(2, 0)), 0.0, samples(100'000)));
}
