#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fgcn/matrix.hpp"
#include "fgcn/rng.hpp"

namespace fgcn {

/// Largest singular value by power iteration on MᵀM (never formed; each
/// step is one multiply by M and one by Mᵀ). The start vector is drawn from
/// a fixed internal seed so repeated calls agree bit-for-bit. Convergence is
/// the Rayleigh-quotient criterion |s_{k+1} - s_k| < tol * s_k.
inline double largest_singular_value(const DenseMatrix& m, double tol = 1e-10,
                                     std::size_t max_iter = 10000) {
  if (tol <= 0.0) throw std::invalid_argument("largest_singular_value: tol must be > 0");
  if (!all_finite(m)) throw std::invalid_argument("largest_singular_value: non-finite input");
  SeededRng rng(0x5eedULL);
  std::vector<double> v(m.cols);
  for (double& x : v) x = rng.normal();
  double nrm = 0.0;
  for (double x : v) nrm += x * x;
  nrm = std::sqrt(nrm);
  for (double& x : v) x /= nrm;

  std::vector<double> u(m.rows), w(m.cols);
  double s_prev = -1.0;
  for (std::size_t it = 0; it < max_iter; ++it) {
    // u = M v
    for (std::size_t i = 0; i < m.rows; ++i) {
      double acc = 0.0;
      const double* row = &m.data[i * m.cols];
      for (std::size_t j = 0; j < m.cols; ++j) acc += row[j] * v[j];
      u[i] = acc;
    }
    double s = 0.0;
    for (double x : u) s += x * x;
    s = std::sqrt(s);
    if (s == 0.0) return 0.0;  // v in the null space of a (near) zero matrix
    // w = Mᵀ u
    std::fill(w.begin(), w.end(), 0.0);
    for (std::size_t i = 0; i < m.rows; ++i) {
      const double* row = &m.data[i * m.cols];
      const double ui = u[i];
      for (std::size_t j = 0; j < m.cols; ++j) w[j] += row[j] * ui;
    }
    double wn = 0.0;
    for (double x : w) wn += x * x;
    wn = std::sqrt(wn);
    if (wn == 0.0) return s;
    for (std::size_t j = 0; j < m.cols; ++j) v[j] = w[j] / wn;
    if (s_prev >= 0.0 && std::abs(s - s_prev) < tol * s) return s;
    s_prev = s;
  }
  throw std::runtime_error("largest_singular_value: no convergence after " +
                           std::to_string(max_iter) + " iterations");
}

/// All eigenvalues of a symmetric matrix, ascending.
inline std::vector<double> symmetric_eigenvalues(const DenseMatrix& m) {
  require_shape(m.rows == m.cols, "symmetric_eigenvalues");
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
      map(m.data.data(), static_cast<Eigen::Index>(m.rows), static_cast<Eigen::Index>(m.cols));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(map, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("symmetric_eigenvalues: eigensolver failed");
  std::vector<double> out(static_cast<std::size_t>(solver.eigenvalues().size()));
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = solver.eigenvalues()(static_cast<Eigen::Index>(i));
  return out;
}

/// Smallest eigenvalue above the zero threshold (1e-9) of a symmetric PSD
/// matrix, via dense symmetric eigendecomposition.
inline double smallest_nonzero_eig(const DenseMatrix& m, std::size_t dense_limit = 5000,
                                   double zero_tol = 1e-9) {
  if (m.rows > dense_limit)
    throw std::invalid_argument("smallest_nonzero_eig: matrix exceeds dense-solver limit");
  const std::vector<double> ev = symmetric_eigenvalues(m);
  for (double e : ev)
    if (e > zero_tol) return e;
  throw std::runtime_error("smallest_nonzero_eig: all eigenvalues are zero");
}

}  // namespace fgcn
