#include "starsym/symmetry_detector.hpp"

#include "starsym/random.hpp"

#include <fmt/format.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

namespace starsym {

std::string_view to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::fibonacci: return "fibonacci";
    case SamplerKind::random: return "random";
    case SamplerKind::antipodal_paired: return "antipodal";
  }
  return "unknown";
}

SamplerKind parse_sampler_kind(std::string_view name) {
  if (name == "fibonacci") return SamplerKind::fibonacci;
  if (name == "random") return SamplerKind::random;
  if (name == "antipodal" || name == "antipodal_paired") return SamplerKind::antipodal_paired;
  throw std::invalid_argument(fmt::format("unknown direction sampler '{}'", name));
}

std::string_view to_string(Verdict v) { return v == Verdict::symmetric ? "symmetric" : "asymmetric"; }

namespace {

std::vector<Direction> quasi_uniform(int n, int count, std::uint64_t seed) {
  std::vector<Direction> out;
  if (n == 2) {
    for (int i = 0; i < count; ++i) {
      const double phi = 2.0 * std::numbers::pi * (i + 0.5) / count;
      out.emplace_back(Vector{{std::cos(phi), std::sin(phi)}});
    }
  } else if (n == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      const double z = 1.0 - (2.0 * i + 1.0) / count;
      const double r = std::sqrt(1.0 - z * z);
      out.emplace_back(Vector{{r * std::cos(golden * i), r * std::sin(golden * i), z}});
    }
  } else {
    // No low-discrepancy construction in higher dimension; fall back to seeded samples.
    auto eng = rng::engine(seed, 0xd12);
    for (int i = 0; i < count; ++i) out.emplace_back(rng::unit_vector(eng, n));
  }
  return out;
}

// Directions whose antipodes are absent: a half-sphere-friendly set for pairing.
std::vector<Direction> half_set(int n, int count, std::uint64_t seed) {
  if (n == 2) {
    std::vector<Direction> out;
    for (int i = 0; i < count; ++i) {
      const double phi = std::numbers::pi * (i + 0.5) / count;
      out.emplace_back(Vector{{std::cos(phi), std::sin(phi)}});
    }
    return out;
  }
  if (n == 3) {
    // Upper half of a 2*count Fibonacci spiral.
    std::vector<Direction> full = quasi_uniform(3, 2 * count, seed);
    full.erase(full.begin() + count, full.end());
    return full;
  }
  return quasi_uniform(n, count, seed);
}

ScalarField without_gradient(const ScalarField& f) {
  return ScalarField(SphereFunction(f.dim(), f.function().evaluator()), f.lipschitz_bound(), f.sup_bound());
}

std::vector<double> transform_values(const ScalarField& f, const std::vector<Direction>& xis,
                                     const EquatorQuadrature& rule, std::uint64_t frame_seed, int workers) {
  std::vector<double> values(xis.size());
  parallel_for(xis.size(), workers,
               [&](std::size_t i) { values[i] = equator_transform(f, make_frame(xis[i], frame_seed), rule); });
  return values;
}

std::vector<RadialField> even_battery(int n) {
  std::vector<RadialField> out;
  out.push_back(body_ball(n, 1.0));
  out.push_back(body_ball(n, 0.7));
  Vector a1 = Vector::Ones(n);
  a1[0] = 2.0;
  out.push_back(body_ellipsoid(a1));
  Vector a2(n);
  for (int i = 0; i < n; ++i) a2[i] = 1.3 - 0.17 * i;
  out.push_back(body_ellipsoid(a2));
  if (n == 3) {
    out.push_back(body_harmonic_perturbed_ball(0.05, 2, 1));
    out.push_back(body_harmonic_perturbed_ball(0.05, 4, -3));
    out.push_back(body_harmonic_perturbed_ball(0.03, 6, 2));
  }
  return out;
}

}  // namespace

std::vector<Direction> sample_directions(int n, int count, const DirectionSampler& sampler) {
  if (count < 2) throw std::invalid_argument(fmt::format("need at least 2 directions, got {}", count));
  if (n < kMinDim) throw GeometryError("direction sampling needs n >= 2");
  switch (sampler.kind) {
    case SamplerKind::fibonacci: return quasi_uniform(n, count, sampler.seed);
    case SamplerKind::random: {
      auto eng = rng::engine(sampler.seed, 0x4a2d);
      std::vector<Direction> out;
      for (int i = 0; i < count; ++i) out.emplace_back(rng::unit_vector(eng, n));
      return out;
    }
    case SamplerKind::antipodal_paired: {
      std::vector<Direction> out = half_set(n, count / 2, sampler.seed);
      const std::size_t half = out.size();
      for (std::size_t i = 0; i < half; ++i) out.push_back(-out[i]);
      if (count % 2) {
        auto eng = rng::engine(sampler.seed, 0x0dd);
        out.emplace_back(rng::unit_vector(eng, n));
      }
      return out;
    }
  }
  return {};
}

std::string AsymmetryReport::summary() const {
  if (verdict == Verdict::asymmetric)
    return fmt::format("asymmetric: |A(xi)| = {:.6g} exceeds threshold {:.3g} at sampled direction #{}", max_abs,
                       threshold, argmax);
  return fmt::format(
      "symmetric: no asymmetry detected at this resolution (max |A(xi)| = {:.3g} <= threshold {:.3g} over {} "
      "sampled directions)",
      max_abs, threshold, xis.size());
}

double calibrate(int n, int resolution, bool force_fd) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, bool>, double> cache;
  const auto key = std::make_tuple(n, resolution, force_fd);
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const EquatorQuadrature rule = equator_rule(n, resolution);
  const auto xis = sample_directions(n, 48, {SamplerKind::random, 0xca11b});
  double worst = 0.0;
  for (const RadialField& body : even_battery(n)) {
    ScalarField f = to_scalar_field(body);
    if (force_fd) f = without_gradient(f);
    const double scale = f.sup_bound().value_or(1.0);
    for (double v : transform_values(f, xis, rule, 0, 0)) worst = std::max(worst, std::abs(v) / scale);
  }
  const double floor = std::max(10.0 * worst, 1e-12);
  std::lock_guard lock(mu);
  cache[key] = floor;
  return floor;
}

AsymmetryReport sweep(const ScalarField& f, const SweepOptions& opts, std::string body_id) {
  const int n = f.dim();
  const int resolution = opts.resolution > 0 ? opts.resolution : default_resolution(n);
  const EquatorQuadrature rule = equator_rule(n, resolution);
  const ScalarField field = opts.force_fd ? without_gradient(f) : f;

  AsymmetryReport r;
  r.body_id = std::move(body_id);
  r.dim = n;
  r.resolution = resolution;
  r.xis = sample_directions(n, opts.num_dirs, opts.sampler);
  r.values = transform_values(field, r.xis, rule, opts.frame_seed, opts.workers);
  double sq = 0.0;
  for (std::size_t i = 0; i < r.values.size(); ++i) {
    const double a = std::abs(r.values[i]);
    sq += a * a;
    if (a > r.max_abs) {
      r.max_abs = a;
      r.argmax = i;
    }
  }
  r.l2_mean = std::sqrt(sq / r.values.size());
  if (opts.threshold) {
    r.threshold = *opts.threshold;
  } else {
    const double scale = f.sup_bound() ? *f.sup_bound() : probe_sup(f);
    r.threshold = calibrate(n, resolution, opts.force_fd) * scale;
  }
  r.verdict = r.max_abs > r.threshold ? Verdict::asymmetric : Verdict::symmetric;
  return r;
}

AsymmetryReport detect(const RadialField& body, const SweepOptions& opts) {
  const ScalarField f = to_scalar_field(body);
  AsymmetryReport r = sweep(f, opts, body.id());
  r.ground_truth_odd_sup = probe_sup(odd_part(f));
  return r;
}

}  // namespace starsym
