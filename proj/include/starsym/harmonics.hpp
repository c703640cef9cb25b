#pragma once

#include "starsym/slice_transforms.hpp"
#include "starsym/star_body.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace starsym {

class HarmonicsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kMaxHarmonicDegree = 10;
inline constexpr int kMaxFourierBand = 20;

/// Real spherical harmonic Y_{l,m} on S^2, orthonormal in L^2(S^2).
/// m > 0 uses cos(m phi), m < 0 uses sin(|m| phi). Evaluated as a homogeneous
/// polynomial in (x, y, z), so the gradient is exact everywhere.
ScalarField real_harmonic(int degree, int order);

/// max |Y_{l,m}| estimated on a dense Fibonacci grid (cached).
double harmonic_max_abs(int degree, int order);
/// sqrt((2l+1)/(4 pi)): a rigorous bound on |Y_{l,m}| for every m.
double harmonic_sup_bound(int degree);
/// sqrt(l(l+1)(2l+1)/(4 pi)): a rigorous bound on the surface gradient.
double harmonic_gradient_bound(int degree);

struct Multiplier {
  int degree = 0;
  int order = 0;
  /// Least-squares scale of T Y against Y over the sampled directions.
  double lambda = 0.0;
  /// max_xi |T Y(xi) - lambda Y(xi)|.
  double residual = 0.0;
  /// max_xi |T Y(xi)|.
  double max_abs_transform = 0.0;
};

struct MultiplierOptions {
  int num_xi = 50;
  /// Equator resolution for n = 3 (n = 2 always uses the two-point rule).
  int resolution = 512;
  std::uint64_t seed = 0;
};

/// Fits T Y_{l,m}(xi) = lambda Y_{l,m}(xi) over random directions (n = 3).
Multiplier estimate_multiplier(int degree, int order, const MultiplierOptions& opts = {});

struct MultiplierTable {
  int n = 3;
  std::vector<Multiplier> rows;
};

/// n = 3: every (l, m) with l <= lmax. n = 2: Fourier modes cos(k theta)
/// (order +k) and sin(k theta) (order -k). Other n throw HarmonicsError.
MultiplierTable multiplier_table(int n, int lmax, const MultiplierOptions& opts = {});

/// Band-limited function on the circle:
/// a0 + sum_k a[k-1] cos(k theta) + b[k-1] sin(k theta).
struct FourierSeries {
  double a0 = 0.0;
  std::vector<double> a;
  std::vector<double> b;

  int band() const { return static_cast<int>(std::max(a.size(), b.size())); }
  double value(double theta) const;
  double derivative(double theta) const;
};

/// The series as a field on S^1 (theta = atan2(x2, x1)), with analytic gradient.
ScalarField fourier_field(const FourierSeries& f);

/// Closed planar form of the equator transform at xi = (cos t0, sin t0):
/// f'(t0 - pi/2) - f'(t0 + pi/2).
double fourier_check_n2(const FourierSeries& f, double theta0);

struct InjectivityResult {
  /// sup over the probe grid of |reconstruction - g|.
  double error = 0.0;
  /// Estimated multiplier per odd degree 1, 3, ..., used for the inversion.
  std::vector<Multiplier> multipliers;
};

/// Applies T to an odd field g with harmonic content up to lmax, expands T g
/// in real harmonics, divides each odd degree by its estimated multiplier,
/// and compares the reconstruction with g. Throws HarmonicsError if some odd
/// degree has |lambda| < 1e-6 (a near-kernel odd mode).
InjectivityResult injectivity_probe(const ScalarField& g, int lmax, const MultiplierOptions& opts = {});

}  // namespace starsym
