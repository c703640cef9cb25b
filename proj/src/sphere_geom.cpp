#include "starsym/sphere_geom.hpp"

#include "starsym/random.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <limits>
#include <numbers>

namespace starsym {

namespace {

constexpr double kOrthoTol = 1e-12;

}  // namespace

Direction::Direction(Vector coords) {
  if (coords.size() < kMinDim)
    throw GeometryError(fmt::format("direction needs dimension >= 2, got {}", coords.size()));
  const double r = coords.norm();
  if (!(r > 0.0) || !std::isfinite(r)) throw GeometryError("direction from zero or non-finite vector");
  coords_ = coords / r;
}

Direction Direction::operator-() const { return Direction(-coords_, Trusted{}); }

EquatorFrame::EquatorFrame(Direction pole, Matrix basis) : pole_(std::move(pole)), basis_(std::move(basis)) {
  const int n = pole_.dim();
  if (basis_.rows() != n || basis_.cols() != n - 1)
    throw GeometryError(fmt::format("frame basis must be {}x{}", n, n - 1));
  if ((basis_.transpose() * pole_.coords()).cwiseAbs().maxCoeff() > kOrthoTol)
    throw GeometryError("frame basis is not orthogonal to the pole");
  const Matrix gram = basis_.transpose() * basis_ - Matrix::Identity(n - 1, n - 1);
  if (gram.cwiseAbs().maxCoeff() > kOrthoTol) throw GeometryError("frame basis is not orthonormal");
}

EquatorFrame make_frame(const Direction& pole, std::uint64_t seed) {
  const int n = pole.dim();
  auto eng = rng::engine(seed, 0xf7a3e);
  Matrix q(n, n);
  q.col(0) = pole.coords();
  int filled = 1;
  while (filled < n) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = 2.0 * rng::uniform(eng) - 1.0;
    // Two Gram-Schmidt passes keep the residual at rounding level.
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j < filled; ++j) v -= q.col(j).dot(v) * q.col(j);
    const double r = v.norm();
    if (r < 1e-3) continue;  // nearly dependent candidate: draw again
    q.col(filled++) = v / r;
  }
  return EquatorFrame(pole, q.rightCols(n - 1));
}

Direction embed(const EquatorFrame& frame, const Vector& eta, double psi) {
  constexpr double half_pi = std::numbers::pi / 2;
  if (!(psi >= -half_pi && psi <= half_pi))
    throw GeometryError(fmt::format("latitude {} outside [-pi/2, pi/2]", psi));
  if (eta.size() != frame.dim() - 1)
    throw GeometryError(fmt::format("equator point needs {} frame coordinates", frame.dim() - 1));
  if (std::abs(eta.norm() - 1.0) > 1e-10) throw GeometryError("equator point is not a unit vector");
  return Direction(latitude_point(frame.pole().coords(), frame.lift(eta), psi));
}

double sphere_measure(int d) {
  if (d < 0) throw GeometryError("sphere dimension must be >= 0");
  const double k = (d + 1) / 2.0;
  return 2.0 * std::pow(std::numbers::pi, k) / std::tgamma(k);
}

void gauss_jacobi_symmetric(int count, double a, Vector& nodes, Vector& weights) {
  if (count < 1) throw GeometryError("Gauss-Jacobi rule needs at least one node");
  if (a <= -0.5) throw GeometryError("symmetric Gauss-Jacobi requires a > -1/2");
  Matrix jac = Matrix::Zero(count, count);
  for (int k = 1; k < count; ++k) {
    const double s = 2.0 * k + 2.0 * a;
    const double beta = 4.0 * k * (k + a) * (k + a) * (k + 2.0 * a) / (s * s * (s + 1.0) * (s - 1.0));
    jac(k, k - 1) = jac(k - 1, k) = std::sqrt(beta);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(jac);
  const double mu0 = std::pow(2.0, 2.0 * a + 1.0) * std::tgamma(a + 1.0) * std::tgamma(a + 1.0) /
                     std::tgamma(2.0 * a + 2.0);
  nodes = eig.eigenvalues();
  weights = mu0 * eig.eigenvectors().row(0).transpose().array().square();
  // Symmetrize: the rule is exactly symmetric about 0.
  for (int i = 0; i < count / 2; ++i) {
    const int j = count - 1 - i;
    const double t = 0.5 * (nodes[j] - nodes[i]);
    const double w = 0.5 * (weights[i] + weights[j]);
    nodes[i] = -t;
    nodes[j] = t;
    weights[i] = weights[j] = w;
  }
  if (count % 2 == 1) nodes[count / 2] = 0.0;
}

EquatorQuadrature sphere_product_rule(int d, int azimuth_nodes, int polar_nodes) {
  EquatorQuadrature q;
  q.n = d + 2;
  if (d == 0) {
    q.nodes = Matrix(1, 2);
    q.nodes << 1.0, -1.0;
    q.weights = Vector::Ones(2);
    q.degree = std::numeric_limits<int>::max();
    return q;
  }
  if (azimuth_nodes < 2) throw GeometryError("quadrature resolution must be >= 2");
  if (d == 1) {
    q.nodes = Matrix(2, azimuth_nodes);
    for (int i = 0; i < azimuth_nodes; ++i) {
      const double phi = 2.0 * std::numbers::pi * i / azimuth_nodes;
      q.nodes(0, i) = std::cos(phi);
      q.nodes(1, i) = std::sin(phi);
    }
    q.weights = Vector::Constant(azimuth_nodes, 2.0 * std::numbers::pi / azimuth_nodes);
    q.degree = azimuth_nodes - 1;
    return q;
  }
  polar_nodes = std::max(1, polar_nodes);
  const EquatorQuadrature sub = sphere_product_rule(d - 1, azimuth_nodes, polar_nodes);
  Vector t, wt;
  gauss_jacobi_symmetric(polar_nodes, (d - 2) / 2.0, t, wt);
  const int m = sub.size();
  q.nodes = Matrix(d + 1, m * polar_nodes);
  q.weights = Vector(m * polar_nodes);
  for (int k = 0; k < polar_nodes; ++k) {
    const double s = std::sqrt(std::max(0.0, 1.0 - t[k] * t[k]));
    for (int i = 0; i < m; ++i) {
      const int col = k * m + i;
      q.nodes.col(col).head(d) = s * sub.nodes.col(i);
      q.nodes(d, col) = t[k];
      q.weights[col] = wt[k] * sub.weights[i];
    }
  }
  q.weights *= sphere_measure(d) / q.weights.sum();
  q.degree = std::min(sub.degree, 2 * polar_nodes - 1);
  return q;
}

EquatorQuadrature equator_rule(int n, int resolution) {
  if (n < kMinDim || n > kMaxDim)
    throw GeometryError(fmt::format("dimension {} outside supported window [{}, {}]", n, kMinDim, kMaxDim));
  if (resolution < 2) throw GeometryError(fmt::format("quadrature resolution must be >= 2, got {}", resolution));
  EquatorQuadrature q = sphere_product_rule(n - 2, resolution, resolution / 2);
  q.n = n;
  return q;
}

int default_resolution(int n) {
  switch (n) {
    case 2: return 2;
    case 3: return 512;
    case 4: return 64;
    case 5: return 32;
    case 6: return 16;
    default:
      throw GeometryError(fmt::format("dimension {} outside supported window [{}, {}]", n, kMinDim, kMaxDim));
  }
}

std::vector<Vector> probe_directions(int n, int min_count) {
  std::vector<Vector> out;
  if (n == 2) {
    for (int i = 0; i < min_count; ++i) {
      const double phi = 2.0 * std::numbers::pi * (i + 0.5) / min_count;
      out.emplace_back(Vector{{std::cos(phi), std::sin(phi)}});
    }
    return out;
  }
  if (n == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < min_count; ++i) {
      const double z = 1.0 - (2.0 * i + 1.0) / min_count;
      const double r = std::sqrt(1.0 - z * z);
      const double phi = golden * i;
      out.emplace_back(Vector{{r * std::cos(phi), r * std::sin(phi), z}});
    }
    return out;
  }
  for (int az = 4;; az += 2) {
    const EquatorQuadrature q = sphere_product_rule(n - 1, az, az / 2);
    if (q.size() >= min_count) {
      for (int i = 0; i < q.size(); ++i) out.emplace_back(q.nodes.col(i));
      return out;
    }
  }
}

}  // namespace starsym
