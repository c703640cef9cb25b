#pragma once

// Portable random helpers. std::mt19937_64 output is fixed by the standard;
// the std distributions are not, so conversions are done here.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace starsym::rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::mt19937_64 engine(std::uint64_t seed, std::uint64_t stream = 0) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(stream + 0x51ed270b27a1ULL)));
}

/// Uniform on [0, 1).
inline double uniform(std::mt19937_64& e) {
  return static_cast<double>(e() >> 11) * 0x1.0p-53;
}

/// Uniform on (0, 1].
inline double uniform_open_low(std::mt19937_64& e) { return 1.0 - uniform(e); }

inline double normal(std::mt19937_64& e) {
  const double u1 = uniform_open_low(e);
  const double u2 = uniform(e);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

inline Eigen::VectorXd gaussian_vector(std::mt19937_64& e, int dim) {
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = normal(e);
  return v;
}

/// Uniform on the unit sphere S^{dim-1}.
inline Eigen::VectorXd unit_vector(std::mt19937_64& e, int dim) {
  for (;;) {
    Eigen::VectorXd v = gaussian_vector(e, dim);
    const double r = v.norm();
    if (r > 1e-8) return v / r;
  }
}

/// Haar-ish random rotation (orthogonal, det +1) via QR of a Gaussian matrix.
inline Eigen::MatrixXd rotation(std::mt19937_64& e, int dim) {
  Eigen::MatrixXd g(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) g(i, j) = normal(e);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  if (q.determinant() < 0) q.col(0) = -q.col(0);
  return q;
}

}  // namespace starsym::rng
