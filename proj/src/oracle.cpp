#include "starsym/oracle.hpp"

#include "starsym/parallel.hpp"
#include "starsym/random.hpp"

#include <fmt/format.h>

#include <array>
#include <cmath>
#include <numbers>
#include <thread>

namespace starsym {

namespace {

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
};

void check_options(double z, const SlabOptions& opts) {
  if (opts.samples < 10'000) throw std::invalid_argument(fmt::format("oracle needs N >= 1e4, got {}", opts.samples));
  if (!(opts.half_width > 0.0)) throw std::invalid_argument("slab half width must be positive");
  if (!(opts.half_width < std::min(1.0 - z, 1.0 + z)))
    throw std::invalid_argument(fmt::format("slab (z = {}, d = {}) leaves the open interval (-1, 1)", z,
                                            opts.half_width));
}

// Uniform point of the equator S^{n-2} of `basis`, lifted into R^n.
Vector equator_sample(const Matrix& basis, std::mt19937_64& eng) {
  if (basis.cols() == 1) return rng::uniform(eng) < 0.5 ? Vector(basis.col(0)) : Vector(-basis.col(0));
  return basis * rng::unit_vector(eng, static_cast<int>(basis.cols()));
}

template <class Sampler>
SlabEstimate run_streams(const SlabOptions& opts, Sampler&& sample) {
  std::array<Moments, kOracleStreams> parts{};
  const int workers = opts.workers > 0 ? opts.workers : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  parallel_for(kOracleStreams, workers, [&](std::size_t s) {
    const std::size_t count = opts.samples / kOracleStreams + (s < opts.samples % kOracleStreams ? 1 : 0);
    auto eng = rng::engine(opts.seed, s);
    Moments m;
    for (std::size_t i = 0; i < count; ++i) {
      const double w = sample(eng);
      m.sum += w;
      m.sum_sq += w * w;
    }
    parts[s] = m;
  });
  Moments total;
  for (const Moments& m : parts) {
    total.sum += m.sum;
    total.sum_sq += m.sum_sq;
  }
  const double n = static_cast<double>(opts.samples);
  const double mean = total.sum / n;
  const double var = std::max(0.0, (total.sum_sq - n * mean * mean) / (n - 1.0));
  return SlabEstimate{mean, std::sqrt(var / n), opts.samples, opts.half_width, workers};
}

}  // namespace

SlabEstimate mc_cone_section(const RadialField& body, const Direction& xi, double z, const SlabOptions& opts) {
  check_options(z, opts);
  const int n = body.dim();
  if (xi.dim() != n) throw GeometryError("direction and body dimensions differ");
  const EquatorFrame frame = make_frame(xi, 0);
  const double d = opts.half_width;
  const double theta_lo = std::acos(z + d);
  const double theta_hi = std::acos(z - d);
  const double radius = body.bounds().max_radius * (1.0 + 1e-9);

  // Surface measure of the angular band and the sin^{n-2} envelope used for rejection.
  Vector t, w;
  gauss_jacobi_symmetric(48, 0.0, t, w);
  double band = 0.0;
  for (int i = 0; i < t.size(); ++i) {
    const double th = 0.5 * (theta_lo + theta_hi) + 0.5 * (theta_hi - theta_lo) * t[i];
    band += 0.5 * (theta_hi - theta_lo) * w[i] * std::pow(std::sin(th), n - 2);
  }
  band *= sphere_measure(n - 2);
  const double half_pi = std::numbers::pi / 2;
  const double envelope = (theta_lo <= half_pi && theta_hi >= half_pi)
                              ? 1.0
                              : std::pow(std::max(std::sin(theta_lo), std::sin(theta_hi)), n - 2);
  const double volume = std::pow(radius, n) / n * band;
  const Vector& pole = xi.coords();

  return run_streams(opts, [&](std::mt19937_64& eng) {
    double theta;
    do {
      theta = theta_lo + (theta_hi - theta_lo) * rng::uniform(eng);
    } while (rng::uniform(eng) * envelope > std::pow(std::sin(theta), n - 2));
    const Vector u = pole * std::cos(theta) + equator_sample(frame.basis(), eng) * std::sin(theta);
    const double r = radius * std::pow(rng::uniform_open_low(eng), 1.0 / n);
    if (r > body(u)) return 0.0;
    return volume * std::sin(theta) / (2.0 * d * r);
  });
}

SlabEstimate mc_hyperplane_section(const RadialField& body, const Direction& xi, double z,
                                   const SlabOptions& opts) {
  check_options(z, opts);
  const int n = body.dim();
  if (xi.dim() != n) throw GeometryError("direction and body dimensions differ");
  const EquatorFrame frame = make_frame(xi, 0);
  const double d = opts.half_width;
  const double radius = body.bounds().max_radius * (1.0 + 1e-9);
  // Slab volume inside the bounding cylinder, divided by the thickness 2d.
  const double area = std::pow(radius, n - 1) * sphere_measure(n - 2) / (n - 1);
  const Vector& pole = xi.coords();

  return run_streams(opts, [&](std::mt19937_64& eng) {
    const double height = z + d * (2.0 * rng::uniform(eng) - 1.0);
    const double t = radius * std::pow(rng::uniform_open_low(eng), 1.0 / (n - 1));
    const Vector x = pole * height + equator_sample(frame.basis(), eng) * t;
    const double r = x.norm();
    return r <= body(Vector(x / r)) ? area : 0.0;
  });
}

}  // namespace starsym
