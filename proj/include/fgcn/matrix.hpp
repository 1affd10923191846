#pragma once

#include <cblas.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "fgcn/rng.hpp"

namespace fgcn {

/// Row-major dense matrix, 64-bit entries throughout. Deep products of
/// random matrices amplify rounding, so there is no single-precision path
/// by default.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;  // rows * cols, row-major

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  bool same_shape(const DenseMatrix& o) const { return rows == o.rows && cols == o.cols; }
};

inline void require_shape(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("dimension mismatch: " + what);
}

/// i.i.d. N(0, 1/cols) entries. The variance fan is the output dimension:
/// the analysis assumes width-d outputs feeding the next layer, and for
/// square hidden matrices the two conventions coincide.
inline DenseMatrix glorot_init(std::size_t rows, std::size_t cols, SeededRng& rng) {
  if (rows == 0 || cols == 0)
    throw std::invalid_argument("glorot_init: zero dimension");
  DenseMatrix m(rows, cols);
  const double sigma = 1.0 / std::sqrt(static_cast<double>(cols));
  for (double& v : m.data) v = sigma * rng.normal();
  return m;
}

/// A * B via dgemm.
inline DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  require_shape(a.cols == b.rows, "matmul " + std::to_string(a.rows) + "x" +
                                      std::to_string(a.cols) + " * " +
                                      std::to_string(b.rows) + "x" + std::to_string(b.cols));
  DenseMatrix c(a.rows, b.cols);
  if (a.rows == 0 || b.cols == 0 || a.cols == 0) return c;
  cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, static_cast<int>(a.rows),
              static_cast<int>(b.cols), static_cast<int>(a.cols), 1.0, a.data.data(),
              static_cast<int>(a.cols), b.data.data(), static_cast<int>(b.cols), 0.0,
              c.data.data(), static_cast<int>(c.cols));
  return c;
}

/// A^T * B without materializing the transpose.
inline DenseMatrix matmul_at_b(const DenseMatrix& a, const DenseMatrix& b) {
  require_shape(a.rows == b.rows, "matmul_at_b");
  DenseMatrix c(a.cols, b.cols);
  if (a.cols == 0 || b.cols == 0 || a.rows == 0) return c;
  cblas_dgemm(CblasRowMajor, CblasTrans, CblasNoTrans, static_cast<int>(a.cols),
              static_cast<int>(b.cols), static_cast<int>(a.rows), 1.0, a.data.data(),
              static_cast<int>(a.cols), b.data.data(), static_cast<int>(b.cols), 0.0,
              c.data.data(), static_cast<int>(c.cols));
  return c;
}

/// A * B^T without materializing the transpose.
inline DenseMatrix matmul_a_bt(const DenseMatrix& a, const DenseMatrix& b) {
  require_shape(a.cols == b.cols, "matmul_a_bt");
  DenseMatrix c(a.rows, b.rows);
  if (a.rows == 0 || b.rows == 0 || a.cols == 0) return c;
  cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasTrans, static_cast<int>(a.rows),
              static_cast<int>(b.rows), static_cast<int>(a.cols), 1.0, a.data.data(),
              static_cast<int>(a.cols), b.data.data(), static_cast<int>(b.cols), 0.0,
              c.data.data(), static_cast<int>(c.cols));
  return c;
}

inline DenseMatrix transpose(const DenseMatrix& m) {
  DenseMatrix t(m.cols, m.rows);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
  return t;
}

inline DenseMatrix relu(const DenseMatrix& m) {
  DenseMatrix r = m;
  for (double& v : r.data) v = v > 0.0 ? v : 0.0;
  return r;
}

/// Row-wise softmax, stabilized by row-max subtraction.
inline DenseMatrix softmax_rows(const DenseMatrix& m) {
  require_shape(m.cols > 0, "softmax_rows: empty rows");
  DenseMatrix s(m.rows, m.cols);
  for (std::size_t i = 0; i < m.rows; ++i) {
    const double* row = &m.data[i * m.cols];
    double mx = row[0];
    for (std::size_t j = 1; j < m.cols; ++j) mx = std::max(mx, row[j]);
    double sum = 0.0;
    for (std::size_t j = 0; j < m.cols; ++j) {
      const double e = std::exp(row[j] - mx);
      s(i, j) = e;
      sum += e;
    }
    for (std::size_t j = 0; j < m.cols; ++j) s(i, j) /= sum;
  }
  return s;
}

inline double frobenius_norm(const DenseMatrix& m) {
  double acc = 0.0;
  for (double v : m.data) acc += v * v;
  return std::sqrt(acc);
}

inline double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  require_shape(a.same_shape(b), "max_abs_diff");
  double mx = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i)
    mx = std::max(mx, std::abs(a.data[i] - b.data[i]));
  return mx;
}

inline bool all_finite(const DenseMatrix& m) {
  for (double v : m.data)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace fgcn
