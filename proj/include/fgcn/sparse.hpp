#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "fgcn/matrix.hpp"

namespace fgcn {

/// Compressed-row sparse matrix. Column indices are sorted within each row;
/// duplicate triplets are summed at build time.
struct CsrMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> row_ptr;   // rows + 1
  std::vector<std::uint32_t> col_idx; // nnz
  std::vector<double> values;         // nnz

  std::size_t nnz() const { return values.size(); }

  static CsrMatrix from_triplets(std::size_t rows, std::size_t cols,
                                 const std::vector<std::uint32_t>& ti,
                                 const std::vector<std::uint32_t>& tj,
                                 const std::vector<double>& tv) {
    CsrMatrix m;
    m.rows = rows;
    m.cols = cols;
    // counting sort by row, then merge duplicates within each sorted row
    std::vector<std::size_t> count(rows + 1, 0);
    for (std::uint32_t i : ti) count[i + 1]++;
    for (std::size_t r = 0; r < rows; ++r) count[r + 1] += count[r];
    std::vector<std::uint32_t> cj(ti.size());
    std::vector<double> cv(ti.size());
    {
      std::vector<std::size_t> cursor(count.begin(), count.end() - 1);
      for (std::size_t k = 0; k < ti.size(); ++k) {
        const std::size_t pos = cursor[ti[k]]++;
        cj[pos] = tj[k];
        cv[pos] = tv[k];
      }
    }
    m.row_ptr.assign(rows + 1, 0);
    for (std::size_t r = 0; r < rows; ++r) {
      const std::size_t b = count[r], e = count[r + 1];
      std::vector<std::pair<std::uint32_t, double>> row;
      row.reserve(e - b);
      for (std::size_t k = b; k < e; ++k) row.emplace_back(cj[k], cv[k]);
      std::sort(row.begin(), row.end(),
                [](const auto& a, const auto& b2) { return a.first < b2.first; });
      for (std::size_t k = 0; k < row.size(); ++k) {
        if (!m.col_idx.empty() && m.row_ptr[r + 1] > m.row_ptr[r] &&
            m.col_idx.back() == row[k].first) {
          m.values.back() += row[k].second;  // duplicate edge: sum
        } else {
          m.col_idx.push_back(row[k].first);
          m.values.push_back(row[k].second);
          m.row_ptr[r + 1]++;
        }
      }
      m.row_ptr[r + 1] += m.row_ptr[r];
    }
    return m;
  }

  DenseMatrix to_dense() const {
    DenseMatrix d(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
        d(r, col_idx[k]) += values[k];
    return d;
  }
};

/// Sparse * dense product.
inline DenseMatrix spmm(const CsrMatrix& a, const DenseMatrix& h) {
  require_shape(a.cols == h.rows, "spmm");
  DenseMatrix out(a.rows, h.cols);
  const std::size_t c = h.cols;
  for (std::size_t r = 0; r < a.rows; ++r) {
    double* dst = &out.data[r * c];
    for (std::size_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) {
      const double v = a.values[k];
      const double* src = &h.data[static_cast<std::size_t>(a.col_idx[k]) * c];
      for (std::size_t j = 0; j < c; ++j) dst[j] += v * src[j];
    }
  }
  return out;
}

}  // namespace fgcn
