#pragma once

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "fgcn/graph.hpp"
#include "fgcn/matrix.hpp"
#include "fgcn/model.hpp"
#include "fgcn/spectral.hpp"

namespace fgcn {

/// Orthonormal basis of the oversmoothing subspace M: one degree-scaled
/// indicator vector D̂^{1/2}·1_c per connected component. Representations
/// inside M are maximally smoothed.
struct SubspaceBasis {
  DenseMatrix basis;  // N x num_components, orthonormal columns
  std::size_t num_components = 0;
};

inline SubspaceBasis oversmoothing_basis(const NormalizedAdjacency& adj) {
  int count = 0;
  const std::vector<int> comp = connected_components(adj.mat, &count);
  SubspaceBasis sb;
  sb.num_components = static_cast<std::size_t>(count);
  sb.basis = DenseMatrix(adj.num_nodes(), sb.num_components);
  std::vector<double> norms(sb.num_components, 0.0);
  for (std::size_t i = 0; i < adj.num_nodes(); ++i)
    norms[static_cast<std::size_t>(comp[i])] += adj.degrees[i];
  for (std::size_t i = 0; i < adj.num_nodes(); ++i) {
    const auto c = static_cast<std::size_t>(comp[i]);
    sb.basis(i, c) = std::sqrt(adj.degrees[i]) / std::sqrt(norms[c]);
  }
  return sb;
}

/// Frobenius distance from H to span(basis), by orthogonal projection of
/// each column.
inline double subspace_distance(const DenseMatrix& h, const SubspaceBasis& sb) {
  require_shape(h.rows == sb.basis.rows, "subspace_distance");
  const DenseMatrix coef = matmul_at_b(sb.basis, h);    // c x d
  const DenseMatrix proj = matmul(sb.basis, coef);      // N x d
  double acc = 0.0;
  for (std::size_t i = 0; i < h.data.size(); ++i) {
    const double r = h.data[i] - proj.data[i];
    acc += r * r;
  }
  return std::sqrt(acc);
}

struct SingularValueProduct {
  std::vector<double> per_layer;  // s_lh, largest singular value per weight
  double product = 1.0;           // s_l
};

inline SingularValueProduct singular_value_product(const ModelParams& p, double tol = 1e-8) {
  SingularValueProduct out;
  for (const DenseMatrix& w : p.weights) {
    out.per_layer.push_back(largest_singular_value(w, tol));
    out.product *= out.per_layer.back();
  }
  return out;
}

enum class LambdaMode {
  paper,  // smallest non-zero eigenvalue of I - Â
  alt     // largest non-principal |eigenvalue| of Â
};

struct SmoothingLayerRow {
  std::size_t layer = 0;
  double d_before = 0.0;
  double d_after = 0.0;
  double s_lh = 0.0;
  double lambda = 0.0;
  bool bound_holds = false;  // d_after <= s_lh * lambda * d_before
};

struct SmoothingReport {
  std::vector<SmoothingLayerRow> rows;
  double lambda = 0.0;
  LambdaMode mode = LambdaMode::paper;
  std::size_t violations() const {
    std::size_t v = 0;
    for (const auto& r : rows) v += r.bound_holds ? 0 : 1;
    return v;
  }
};

inline double contraction_lambda(const NormalizedAdjacency& adj, LambdaMode mode) {
  DenseMatrix a = adj.mat.to_dense();
  if (mode == LambdaMode::paper) {
    DenseMatrix ima(a.rows, a.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
      for (std::size_t j = 0; j < a.cols; ++j)
        ima(i, j) = (i == j ? 1.0 : 0.0) - a(i, j);
    return smallest_nonzero_eig(ima);
  }
  int count = 0;
  connected_components(adj.mat, &count);
  std::vector<double> ev = symmetric_eigenvalues(a);  // ascending
  // drop the principal eigenvalue 1 of each component
  ev.resize(ev.size() - static_cast<std::size_t>(count));
  if (ev.empty()) return 0.0;
  return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

/// Per-layer check of the d_M contraction inequality. Results are a report,
/// not an assertion: with the literal lambda definition the bound need not
/// hold layer-by-layer on arbitrary graphs.
inline SmoothingReport contraction_check(const ModelParams& p, const NormalizedAdjacency& adj,
                                         const DenseMatrix& x, LambdaMode mode,
                                         double sv_tol = 1e-8) {
  SmoothingReport report;
  report.mode = mode;
  report.lambda = contraction_lambda(adj, mode);
  const SubspaceBasis sb = oversmoothing_basis(adj);
  ForwardCache cache;
  forward(p, adj, x, cache);
  const SingularValueProduct sv = singular_value_product(p, sv_tol);
  for (std::size_t l = 0; l < p.depth(); ++l) {
    SmoothingLayerRow row;
    row.layer = l;
    row.d_before = subspace_distance(cache.h[l], sb);
    row.d_after = subspace_distance(cache.h[l + 1], sb);
    row.s_lh = sv.per_layer[l];
    row.lambda = report.lambda;
    row.bound_holds = row.d_after <= row.s_lh * row.lambda * row.d_before + 1e-12;
    report.rows.push_back(row);
  }
  return report;
}

/// Mean cosine similarity and mean Euclidean distance over all node pairs,
/// computed from one Gram matrix. Zero rows contribute similarity 0.
inline std::pair<double, double> pairwise_similarity(const DenseMatrix& h) {
  if (h.rows < 2) throw std::invalid_argument("pairwise_similarity: need >= 2 rows");
  const DenseMatrix g = matmul_a_bt(h, h);
  const std::size_t n = h.rows;
  double cos_sum = 0.0, dist_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double gii = g(i, i), gjj = g(j, j), gij = g(i, j);
      if (gii > 0.0 && gjj > 0.0) cos_sum += gij / std::sqrt(gii * gjj);
      dist_sum += std::sqrt(std::max(0.0, gii + gjj - 2.0 * gij));
    }
  }
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  return {cos_sum / pairs, dist_sum / pairs};
}

inline void write_smoothing_csv(std::ostream& os, const SmoothingReport& r) {
  os << "layer,d_M_before,d_M_after,s_lh,lambda,bound_holds\n";
  for (const auto& row : r.rows)
    os << row.layer << ',' << row.d_before << ',' << row.d_after << ',' << row.s_lh << ','
       << row.lambda << ',' << (row.bound_holds ? 1 : 0) << '\n';
}

}  // namespace fgcn
