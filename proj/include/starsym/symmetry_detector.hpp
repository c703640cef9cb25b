#pragma once

#include "starsym/parallel.hpp"
#include "starsym/slice_transforms.hpp"
#include "starsym/star_body.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace starsym {

enum class SamplerKind { fibonacci, random, antipodal_paired };

std::string_view to_string(SamplerKind kind);
SamplerKind parse_sampler_kind(std::string_view name);

struct DirectionSampler {
  SamplerKind kind = SamplerKind::antipodal_paired;
  std::uint64_t seed = 0;
};

/// Quasi-uniform (fibonacci), seeded uniform (random) or +-paired samples of
/// S^{n-1}. Paired sets list the first half followed by its negation.
std::vector<Direction> sample_directions(int n, int count, const DirectionSampler& sampler);

enum class Verdict { symmetric, asymmetric };
std::string_view to_string(Verdict v);

struct AsymmetryReport {
  std::string body_id;
  int dim = 0;
  int resolution = 0;
  std::vector<Direction> xis;
  /// Equator transform A(xi) per sampled direction.
  std::vector<double> values;
  double max_abs = 0.0;
  std::size_t argmax = 0;
  double l2_mean = 0.0;
  double threshold = 0.0;
  Verdict verdict = Verdict::symmetric;
  /// sup of |odd part of f| over the probe grid, when computed.
  std::optional<double> ground_truth_odd_sup;

  /// One-line human summary. A symmetric verdict only states that no
  /// asymmetry was detected at this sampling and resolution.
  std::string summary() const;
};

struct SweepOptions {
  int num_dirs = 100;
  DirectionSampler sampler{};
  /// 0 selects default_resolution(n).
  int resolution = 0;
  std::uint64_t frame_seed = 0;
  /// Replaces the calibrated threshold.
  std::optional<double> threshold;
  /// Use finite-difference meridian derivatives even when a gradient exists.
  bool force_fd = false;
  /// Worker threads; 0 selects hardware concurrency. Results do not depend on it.
  int workers = 0;
};

/// Asymmetry noise floor: 10 x max |A(xi)| / sup|f| over a battery of exactly
/// even bodies, clamped below at 1e-12. Multiply by sup|f| to get a threshold
/// in the units of a particular field.
double calibrate(int n, int resolution, bool force_fd = false);

/// Equator transform of f over sampled directions, with statistics and verdict.
AsymmetryReport sweep(const ScalarField& f, const SweepOptions& opts, std::string body_id = "field");

/// to_scalar_field followed by sweep; fills ground_truth_odd_sup.
AsymmetryReport detect(const RadialField& body, const SweepOptions& opts = {});

}  // namespace starsym
