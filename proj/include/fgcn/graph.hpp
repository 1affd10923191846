#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "fgcn/matrix.hpp"
#include "fgcn/rng.hpp"
#include "fgcn/sparse.hpp"

namespace fgcn {

struct Edge {
  std::uint32_t src = 0;
  std::uint32_t dst = 0;
  double weight = 1.0;
};

/// One node-classification dataset: undirected weighted graph, dense node
/// features, class labels (-1 = unlabeled) and disjoint train/val/test masks.
/// Bundles are immutable once built and safe to share across workers.
struct GraphBundle {
  std::size_t num_nodes = 0;
  std::vector<Edge> edges;  // each undirected edge listed once
  DenseMatrix features;     // num_nodes x C
  std::vector<int> labels;  // per node, in [0, num_classes) or -1
  int num_classes = 0;
  std::vector<std::uint8_t> train_mask, val_mask, test_mask;
};

inline void validate_bundle(const GraphBundle& b) {
  if (b.features.rows != b.num_nodes)
    throw std::invalid_argument("bundle: feature row count != num_nodes");
  if (b.labels.size() != b.num_nodes || b.train_mask.size() != b.num_nodes ||
      b.val_mask.size() != b.num_nodes || b.test_mask.size() != b.num_nodes)
    throw std::invalid_argument("bundle: per-node array length != num_nodes");
  for (const Edge& e : b.edges)
    if (e.src >= b.num_nodes || e.dst >= b.num_nodes)
      throw std::invalid_argument("bundle: edge node index out of range");
  for (std::size_t i = 0; i < b.num_nodes; ++i) {
    if (b.train_mask[i] + b.val_mask[i] + b.test_mask[i] > 1)
      throw std::invalid_argument("bundle: masks overlap at node " + std::to_string(i));
    if (b.labels[i] >= b.num_classes)
      throw std::invalid_argument("bundle: label out of range at node " + std::to_string(i));
    if (b.train_mask[i] && b.labels[i] < 0)
      throw std::invalid_argument("bundle: train node " + std::to_string(i) + " unlabeled");
  }
}

/// Â = D̂^{-1/2} (A + I) D̂^{-1/2} with D̂ the degree matrix of A + I.
/// The CSR matrix is symmetric and every diagonal entry is positive.
struct NormalizedAdjacency {
  CsrMatrix mat;
  std::vector<double> degrees;  // d̂_i, degrees after self-loop addition

  std::size_t num_nodes() const { return mat.rows; }
};

/// Builds Â from an undirected edge list. Each listed edge (s, d, w)
/// contributes w to both A_sd and A_ds (once to A_ss if s == d); listing a
/// pair twice therefore sums, which is the weighted-adjacency reading of
/// duplicates. Self-loops present in the input merge with the added identity.
inline NormalizedAdjacency normalize_adjacency(const std::vector<Edge>& edges,
                                               std::size_t num_nodes) {
  std::vector<std::uint32_t> ti, tj;
  std::vector<double> tv;
  ti.reserve(edges.size() * 2 + num_nodes);
  tj.reserve(edges.size() * 2 + num_nodes);
  tv.reserve(edges.size() * 2 + num_nodes);
  for (const Edge& e : edges) {
    if (e.src >= num_nodes || e.dst >= num_nodes)
      throw std::invalid_argument("normalize_adjacency: node index out of range");
    if (e.weight < 0.0)
      throw std::invalid_argument("normalize_adjacency: negative edge weight");
    ti.push_back(e.src);
    tj.push_back(e.dst);
    tv.push_back(e.weight);
    if (e.src != e.dst) {
      ti.push_back(e.dst);
      tj.push_back(e.src);
      tv.push_back(e.weight);
    }
  }
  for (std::uint32_t i = 0; i < num_nodes; ++i) {  // self-loops: A + I
    ti.push_back(i);
    tj.push_back(i);
    tv.push_back(1.0);
  }
  CsrMatrix a = CsrMatrix::from_triplets(num_nodes, num_nodes, ti, tj, tv);
  NormalizedAdjacency adj;
  adj.degrees.assign(num_nodes, 0.0);
  for (std::size_t r = 0; r < num_nodes; ++r)
    for (std::size_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k)
      adj.degrees[r] += a.values[k];
  for (std::size_t r = 0; r < num_nodes; ++r)
    for (std::size_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k)
      a.values[k] /= std::sqrt(adj.degrees[r] * adj.degrees[a.col_idx[k]]);
  adj.mat = std::move(a);
  return adj;
}

/// Connected components of the (self-looped) graph; returns per-node
/// component id in [0, count).
inline std::vector<int> connected_components(const CsrMatrix& a, int* count_out = nullptr) {
  std::vector<int> comp(a.rows, -1);
  int count = 0;
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < a.rows; ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = count;
    stack.push_back(s);
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t k = a.row_ptr[u]; k < a.row_ptr[u + 1]; ++k) {
        const std::size_t v = a.col_idx[k];
        if (comp[v] < 0) {
          comp[v] = count;
          stack.push_back(v);
        }
      }
    }
    ++count;
  }
  if (count_out) *count_out = count;
  return comp;
}

/// Zeroes the features of every node outside the train mask; graph
/// structure, labels and masks are untouched.
inline GraphBundle cold_start_transform(const GraphBundle& b) {
  GraphBundle out = b;
  for (std::size_t i = 0; i < b.num_nodes; ++i)
    if (!b.train_mask[i])
      for (std::size_t j = 0; j < out.features.cols; ++j) out.features(i, j) = 0.0;
  return out;
}

struct Masks {
  std::vector<std::uint8_t> train, val, test;
};

/// Deterministic split: per_class_train nodes from each class into train,
/// then num_val of the remaining labeled nodes into val, remainder test.
/// Unlabeled nodes enter no mask.
inline Masks make_split(const GraphBundle& b, std::size_t per_class_train, std::size_t num_val,
                        std::uint64_t seed) {
  Masks m;
  m.train.assign(b.num_nodes, 0);
  m.val.assign(b.num_nodes, 0);
  m.test.assign(b.num_nodes, 0);
  SeededRng rng(seed);
  std::vector<std::vector<std::uint32_t>> by_class(static_cast<std::size_t>(b.num_classes));
  for (std::size_t i = 0; i < b.num_nodes; ++i)
    if (b.labels[i] >= 0) by_class[static_cast<std::size_t>(b.labels[i])].push_back(i);
  auto shuffle = [&rng](std::vector<std::uint32_t>& v) {
    for (std::size_t i = v.size(); i > 1; --i)
      std::swap(v[i - 1], v[rng.below(i)]);
  };
  for (int c = 0; c < b.num_classes; ++c) {
    auto& nodes = by_class[static_cast<std::size_t>(c)];
    if (nodes.size() < per_class_train)
      throw std::invalid_argument("make_split: class " + std::to_string(c) + " has " +
                                  std::to_string(nodes.size()) + " nodes, need " +
                                  std::to_string(per_class_train));
    shuffle(nodes);
    for (std::size_t k = 0; k < per_class_train; ++k) m.train[nodes[k]] = 1;
  }
  std::vector<std::uint32_t> rest;
  for (std::size_t i = 0; i < b.num_nodes; ++i)
    if (b.labels[i] >= 0 && !m.train[i]) rest.push_back(i);
  if (rest.size() < num_val)
    throw std::invalid_argument("make_split: not enough labeled nodes for validation");
  shuffle(rest);
  for (std::size_t k = 0; k < rest.size(); ++k) {
    if (k < num_val)
      m.val[rest[k]] = 1;
    else
      m.test[rest[k]] = 1;
  }
  return m;
}

inline void apply_masks(GraphBundle& b, const Masks& m) {
  b.train_mask = m.train;
  b.val_mask = m.val;
  b.test_mask = m.test;
}

/// Stochastic block model fixture: Bernoulli edges with probability p_in
/// inside a block and p_out across blocks, labels = block ids, features
/// Gaussian around a per-block mean. Masks start empty.
inline GraphBundle synth_sbm(const std::vector<std::size_t>& block_sizes, double p_in,
                             double p_out, std::size_t feature_dim, std::uint64_t seed) {
  if (p_in < 0 || p_in > 1 || p_out < 0 || p_out > 1)
    throw std::invalid_argument("synth_sbm: probabilities must be in [0,1]");
  for (std::size_t s : block_sizes)
    if (s == 0) throw std::invalid_argument("synth_sbm: empty block");
  GraphBundle b;
  b.num_classes = static_cast<int>(block_sizes.size());
  std::vector<int> block_of;
  for (std::size_t c = 0; c < block_sizes.size(); ++c)
    for (std::size_t k = 0; k < block_sizes[c]; ++k) block_of.push_back(static_cast<int>(c));
  b.num_nodes = block_of.size();
  b.labels = block_of;
  SeededRng rng(seed);
  for (std::uint32_t i = 0; i < b.num_nodes; ++i)
    for (std::uint32_t j = i + 1; j < b.num_nodes; ++j) {
      const double p = block_of[i] == block_of[j] ? p_in : p_out;
      if (rng.uniform01() < p) b.edges.push_back({i, j, 1.0});
    }
  DenseMatrix means(block_sizes.size(), feature_dim);
  for (double& v : means.data) v = rng.normal();
  b.features = DenseMatrix(b.num_nodes, feature_dim);
  for (std::size_t i = 0; i < b.num_nodes; ++i)
    for (std::size_t j = 0; j < feature_dim; ++j)
      b.features(i, j) = means(static_cast<std::size_t>(block_of[i]), j) + 0.5 * rng.normal();
  b.train_mask.assign(b.num_nodes, 0);
  b.val_mask.assign(b.num_nodes, 0);
  b.test_mask.assign(b.num_nodes, 0);
  return b;
}

}  // namespace fgcn
