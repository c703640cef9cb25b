#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace starsym {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Thrown for violated preconditions on geometric inputs (bad dimension,
/// latitude out of range, degenerate vectors).
class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kMinDim = 2;
inline constexpr int kMaxDim = 6;

/// Unit vector in R^n, n >= 2. The constructor normalizes its input.
class Direction {
 public:
  explicit Direction(Vector coords);

  int dim() const { return static_cast<int>(coords_.size()); }
  const Vector& coords() const { return coords_; }
  double operator[](int i) const { return coords_[i]; }

  Direction operator-() const;

 private:
  struct Trusted {};
  Direction(Vector coords, Trusted) : coords_(std::move(coords)) {}
  Vector coords_;
};

/// Orthonormal frame with north pole xi and an orthonormal basis of the
/// equatorial subspace xi^perp, stored as the columns of an n x (n-1) matrix.
/// Points of S^{n-1} are written x = pole*sin(psi) + lift(eta)*cos(psi),
/// with eta on S^{n-2} in frame coordinates and psi the geographic latitude.
class EquatorFrame {
 public:
  /// Validates orthonormality (1e-12) and that the basis is n x (n-1).
  EquatorFrame(Direction pole, Matrix basis);

  int dim() const { return pole_.dim(); }
  const Direction& pole() const { return pole_; }
  const Matrix& basis() const { return basis_; }

  /// Maps frame coordinates (length n-1) into xi^perp.
  template <class Derived>
  Vector lift(const Eigen::MatrixBase<Derived>& eta) const {
    return basis_ * eta;
  }

 private:
  Direction pole_;
  Matrix basis_;
};

/// Completes `pole` to an orthonormal frame by Gram-Schmidt over seeded
/// pseudo-random candidates. Deterministic in (pole, seed).
EquatorFrame make_frame(const Direction& pole, std::uint64_t seed = 0);

/// Checked latitude embedding; psi must lie in [-pi/2, pi/2] and eta must be a
/// unit vector of length n-1.
Direction embed(const EquatorFrame& frame, const Vector& eta, double psi);

/// Unchecked embedding of an already lifted equator point:
/// pole*sin(psi) + lifted*cos(psi).
template <class DerivedPole, class DerivedLift>
Vector latitude_point(const Eigen::MatrixBase<DerivedPole>& pole,
                      const Eigen::MatrixBase<DerivedLift>& lifted, double psi) {
  return pole * std::sin(psi) + lifted * std::cos(psi);
}

/// d/dpsi of latitude_point: the unit meridian tangent pointing toward the pole.
template <class DerivedPole, class DerivedLift>
Vector meridian_tangent(const Eigen::MatrixBase<DerivedPole>& pole,
                        const Eigen::MatrixBase<DerivedLift>& lifted, double psi) {
  return pole * std::cos(psi) - lifted * std::sin(psi);
}

/// Great-circle distance between unit vectors.
template <class A, class B>
double geodesic_distance(const Eigen::MatrixBase<A>& x, const Eigen::MatrixBase<B>& y) {
  // atan2 form stays accurate for nearly equal and nearly antipodal pairs.
  const double s = (x - y).norm() * (x + y).norm() / 2.0;
  return std::atan2(s, x.dot(y));
}

/// (d)-dimensional measure of the unit sphere S^d in R^{d+1}.
double sphere_measure(int d);

/// Quadrature on the equator S^{n-2} of S^{n-1}. Nodes are columns in frame
/// coordinates (n-1 rows). Weights sum to sphere_measure(n-2).
struct EquatorQuadrature {
  int n = 0;
  Matrix nodes;
  Vector weights;
  /// Total polynomial degree integrated exactly.
  int degree = 0;

  int size() const { return static_cast<int>(weights.size()); }
};

/// n = 2: the two-point rule on S^0. n = 3: `resolution` equispaced nodes on
/// the circle. n >= 4: uniform azimuth (`resolution` nodes) times Gauss-Jacobi
/// in every polar angle (`resolution/2` nodes each).
EquatorQuadrature equator_rule(int n, int resolution);

/// Default equator resolution for each supported dimension
/// (2 -> 2, 3 -> 512, 4 -> 64, 5 -> 32, 6 -> 16).
int default_resolution(int n);

/// Product rule on the full sphere S^d (any d >= 1): nodes as columns of a
/// (d+1) x count matrix. Used for probe grids and harmonic projections.
EquatorQuadrature sphere_product_rule(int d, int azimuth_nodes, int polar_nodes);

/// Gauss-Jacobi nodes/weights on [-1, 1] for weight (1-t)^a (1+t)^a,
/// computed with the Golub-Welsch eigenvalue method.
void gauss_jacobi_symmetric(int count, double a, Vector& nodes, Vector& weights);

/// Quasi-uniform probe directions on S^{n-1}: Fibonacci spiral for n = 3,
/// equispaced for n = 2, product grid otherwise. At least `min_count` points.
std::vector<Vector> probe_directions(int n, int min_count = 2000);

}  // namespace starsym
