// Planar port-grid geometry, the 2D<->1D index mapping, the spherical-Bessel
// spatial correlation matrix, and its repaired Cholesky factorization.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "faswpcn/specfun.hpp"

namespace faswpcn {

/// Planar fluid-antenna geometry: n1 x n2 ports uniformly spaced over an
/// aperture of w1 x w2 wavelengths.  A 1x1 grid degenerates to a fixed
/// single antenna.
struct PortGrid {
  int n1 = 1;
  int n2 = 1;
  double w1 = 0.0;
  double w2 = 0.0;

  int ports() const { return n1 * n2; }

  void validate() const {
    if (n1 < 1 || n2 < 1)
      throw std::invalid_argument("PortGrid: port counts must be >= 1");
    if (!(w1 >= 0.0) || !(w2 >= 0.0) || !std::isfinite(w1) || !std::isfinite(w2))
      throw std::invalid_argument("PortGrid: apertures must be finite and >= 0");
  }
};

struct Port2d {
  int k1 = 1;
  int k2 = 1;
};

/// Row-major 1-based mapping: k = (k1-1)*n2 + k2.
inline Port2d map_index(const PortGrid& g, int k) {
  g.validate();
  if (k < 1 || k > g.ports())
    throw std::out_of_range("map_index: port index out of range");
  return {(k - 1) / g.n2 + 1, (k - 1) % g.n2 + 1};
}

inline int map_index_inverse(const PortGrid& g, int k1, int k2) {
  g.validate();
  if (k1 < 1 || k1 > g.n1 || k2 < 1 || k2 > g.n2)
    throw std::out_of_range("map_index_inverse: 2-D port index out of range");
  return (k1 - 1) * g.n2 + k2;
}

/// Spatial correlation of ports k and m: j0 of 2*pi times their Euclidean
/// separation in wavelengths.  A singleton dimension contributes zero offset
/// (the normalization (n-1) is vacuous there since both indices equal 1).
inline double port_correlation(const PortGrid& g, int k, int m) {
  const Port2d a = map_index(g, k);
  const Port2d b = map_index(g, m);
  const double d1 = g.n1 > 1 ? double(a.k1 - b.k1) / (g.n1 - 1) * g.w1 : 0.0;
  const double d2 = g.n2 > 1 ? double(a.k2 - b.k2) / (g.n2 - 1) * g.w2 : 0.0;
  return specfun::spherical_bessel_j0(2.0 * std::numbers::pi * std::hypot(d1, d2));
}

/// Symmetric unit-diagonal correlation matrix together with the Cholesky
/// factor of its PSD-repaired form.  Immutable after construction.
struct CorrelationMatrix {
  int dim = 0;
  std::vector<double> entries;   // row-major, symmetric, unit diagonal
  std::vector<double> cholesky;  // row-major lower triangle, L L^T = entries
  double repair_shift = 0.0;     // largest eigenvalue clip applied, 0 if none

  double at(int i, int j) const { return entries[size_t(i) * dim + j]; }
  double chol(int i, int j) const { return cholesky[size_t(i) * dim + j]; }
};

/// Repairs an arbitrary symmetric matrix with unit-ish diagonal into a valid
/// correlation matrix and factorizes it: eigenvalues below 1e-10 are clipped
/// to 1e-10, the matrix is reassembled and rescaled back to a unit diagonal.
inline CorrelationMatrix correlation_from_entries(int dim,
                                                  const std::vector<double>& raw) {
  if (dim < 1) throw std::invalid_argument("correlation_from_entries: dim < 1");
  if (raw.size() != size_t(dim) * dim)
    throw std::invalid_argument("correlation_from_entries: size mismatch");

  using Eigen::MatrixXd;
  MatrixXd a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = raw[size_t(i) * dim + j];
  a = 0.5 * (a + a.transpose()).eval();

  constexpr double kEigenFloor = 1e-10;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(a);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("correlation_from_entries: eigendecomposition failed");
  Eigen::VectorXd lam = es.eigenvalues();
  double shift = 0.0;
  for (int i = 0; i < dim; ++i) {
    if (lam(i) < kEigenFloor) {
      shift = std::max(shift, kEigenFloor - lam(i));
      lam(i) = kEigenFloor;
    }
  }
  MatrixXd repaired =
      es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
  // Rescale to a unit diagonal; congruence keeps the matrix PSD.
  Eigen::VectorXd dinv = repaired.diagonal().array().sqrt().inverse();
  repaired = (dinv.asDiagonal() * repaired * dinv.asDiagonal()).eval();
  for (int i = 0; i < dim; ++i) {
    repaired(i, i) = 1.0;
    for (int j = 0; j < i; ++j) {
      const double v = 0.5 * (repaired(i, j) + repaired(j, i));
      repaired(i, j) = v;
      repaired(j, i) = v;
    }
  }

  Eigen::LLT<MatrixXd> llt(repaired);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error(
        "correlation_from_entries: Cholesky failed after repair");
  const MatrixXd l = llt.matrixL();

  CorrelationMatrix out;
  out.dim = dim;
  out.repair_shift = shift;
  out.entries.assign(size_t(dim) * dim, 0.0);
  out.cholesky.assign(size_t(dim) * dim, 0.0);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      out.entries[size_t(i) * dim + j] = repaired(i, j);
      if (j <= i) out.cholesky[size_t(i) * dim + j] = l(i, j);
    }
  return out;
}

inline CorrelationMatrix identity_correlation(int dim) {
  if (dim < 1) throw std::invalid_argument("identity_correlation: dim < 1");
  CorrelationMatrix out;
  out.dim = dim;
  out.entries.assign(size_t(dim) * dim, 0.0);
  out.cholesky.assign(size_t(dim) * dim, 0.0);
  for (int i = 0; i < dim; ++i) {
    out.entries[size_t(i) * dim + i] = 1.0;
    out.cholesky[size_t(i) * dim + i] = 1.0;
  }
  return out;
}

inline CorrelationMatrix build_correlation_matrix(const PortGrid& g) {
  g.validate();
  const int n = g.ports();
  std::vector<double> raw(size_t(n) * n);
  for (int k = 1; k <= n; ++k)
    for (int m = 1; m <= k; ++m) {
      const double v = port_correlation(g, k, m);
      raw[size_t(k - 1) * n + (m - 1)] = v;
      raw[size_t(m - 1) * n + (k - 1)] = v;
    }
  return correlation_from_entries(n, raw);
}

}  // namespace faswpcn
