#pragma once

#include "starsym/star_body.hpp"

#include <cstddef>
#include <cstdint>

namespace starsym {

/// Monte Carlo estimate of an (n-1)-dimensional section measure obtained as a
/// thin-slab n-volume divided by the slab thickness.
struct SlabEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  double slab_half_width = 0.0;
  int workers = 1;
};

struct SlabOptions {
  double half_width = 0.01;
  std::size_t samples = 1'000'000;
  std::uint64_t seed = 1;
  /// Threads used; the estimate is bit-identical for every worker count.
  int workers = 0;
};

/// Number of independent random streams the samples are split into.
inline constexpr int kOracleStreams = 16;

/// vol_{n-1}(K cap C(xi, z)) from points of K with z - d < cos(angle(xi, x)) < z + d.
/// Points are drawn uniformly from the bounding ball restricted to that
/// angular band and rejected outside K; each hit is weighted by the inverse
/// local slab thickness sqrt(1 - z'^2) / (2 d |x|).
SlabEstimate mc_cone_section(const RadialField& body, const Direction& xi, double z, const SlabOptions& opts = {});

/// vol_{n-1}(K cap (xi^perp + z xi)) from points of K with |<x, xi> - z| < d,
/// drawn uniformly from the slab inside a bounding cylinder; value =
/// slab volume / (2 d).
SlabEstimate mc_hyperplane_section(const RadialField& body, const Direction& xi, double z,
                                   const SlabOptions& opts = {});

}  // namespace starsym
