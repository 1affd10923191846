#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fgcn/graph.hpp"
#include "fgcn/matrix.hpp"
#include "fgcn/rng.hpp"
#include "fgcn/sparse.hpp"

namespace fgcn {

enum class LayerKind { graph_conv, dense };
enum class Activation { relu, none };

struct LayerSpec {
  LayerKind kind = LayerKind::graph_conv;
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  bool trainable = false;
  Activation activation = Activation::relu;
};

/// Weights plus their layer specs. Layers without the trainable flag keep
/// their Glorot initialization for the whole life of the model; train()
/// verifies that bit-for-bit.
struct ModelParams {
  std::vector<LayerSpec> specs;
  std::vector<DenseMatrix> weights;

  std::size_t depth() const { return specs.size(); }
  std::size_t lowest_trainable() const {  // L if nothing is trainable
    for (std::size_t l = 0; l < specs.size(); ++l)
      if (specs[l].trainable) return l;
    return specs.size();
  }
};

/// Signals a non-finite activation during the forward pass.
struct DivergenceError : std::runtime_error {
  std::size_t layer;
  explicit DivergenceError(std::size_t l)
      : std::runtime_error("non-finite activation at layer " + std::to_string(l)), layer(l) {}
};

inline ModelParams build_model(const std::vector<LayerSpec>& specs, SeededRng& rng) {
  if (specs.empty()) throw std::invalid_argument("build_model: need at least one layer");
  for (std::size_t l = 0; l + 1 < specs.size(); ++l)
    if (specs[l].out_dim != specs[l + 1].in_dim)
      throw std::invalid_argument("build_model: dimension chain break between layers " +
                                  std::to_string(l) + " and " + std::to_string(l + 1));
  if (specs.back().activation != Activation::none)
    throw std::invalid_argument("build_model: final layer must emit raw logits");
  ModelParams p;
  p.specs = specs;
  p.weights.reserve(specs.size());
  for (const LayerSpec& s : specs) p.weights.push_back(glorot_init(s.in_dim, s.out_dim, rng));
  return p;
}

/// h[l] is the input to layer l; h[depth] is the logits. A partially filled
/// cache (prefix training) leaves the unused lower entries empty.
struct ForwardCache {
  std::vector<DenseMatrix> h;
};

/// Runs layers [start_layer, depth) taking cache.h[start_layer] as input,
/// filling cache.h[start_layer+1 .. depth]. No bias terms anywhere.
inline void forward_from(const ModelParams& p, const NormalizedAdjacency& adj,
                         ForwardCache& cache, std::size_t start_layer) {
  cache.h.resize(p.depth() + 1);
  for (std::size_t l = start_layer; l < p.depth(); ++l) {
    const DenseMatrix& h = cache.h[l];
    require_shape(h.cols == p.specs[l].in_dim, "forward layer " + std::to_string(l));
    DenseMatrix z = matmul(h, p.weights[l]);
    if (p.specs[l].kind == LayerKind::graph_conv) z = spmm(adj.mat, z);
    if (p.specs[l].activation == Activation::relu)
      for (double& v : z.data) v = v > 0.0 ? v : 0.0;
    if (!all_finite(z)) throw DivergenceError(l);
    cache.h[l + 1] = std::move(z);
  }
}

/// Full forward pass; the cache retains every intermediate representation
/// for backprop and for the oversmoothing diagnostics.
inline DenseMatrix forward(const ModelParams& p, const NormalizedAdjacency& adj,
                           const DenseMatrix& x, ForwardCache& cache) {
  cache.h.assign(p.depth() + 1, DenseMatrix());
  cache.h[0] = x;
  forward_from(p, adj, cache, 0);
  return cache.h.back();
}

/// Forward pass without retaining intermediates (evaluation, embeddings).
inline DenseMatrix forward_nocache(const ModelParams& p, const NormalizedAdjacency& adj,
                                   const DenseMatrix& x) {
  DenseMatrix h = x;
  for (std::size_t l = 0; l < p.depth(); ++l) {
    require_shape(h.cols == p.specs[l].in_dim, "forward layer " + std::to_string(l));
    DenseMatrix z = matmul(h, p.weights[l]);
    if (p.specs[l].kind == LayerKind::graph_conv) z = spmm(adj.mat, z);
    if (p.specs[l].activation == Activation::relu)
      for (double& v : z.data) v = v > 0.0 ? v : 0.0;
    if (!all_finite(z)) throw DivergenceError(l);
    h = std::move(z);
  }
  return h;
}

struct LossGrads {
  double loss = 0.0;
  std::vector<DenseMatrix> grads;  // one slot per layer; empty unless trainable
};

/// Mean cross entropy of softmax(logits) over the masked nodes, plus an
/// optional (wd/2)·||W||² term per trainable weight. Backprop traverses all
/// layers down to the lowest trainable one — gradients pass through frozen
/// weights above it — but emits gradient matrices only for trainable layers.
inline LossGrads loss_and_grads(const ModelParams& p, const NormalizedAdjacency& adj,
                                const ForwardCache& cache, const std::vector<int>& labels,
                                const std::vector<std::uint8_t>& mask,
                                double weight_decay = 0.0) {
  const DenseMatrix& logits = cache.h.back();
  const std::size_t n = logits.rows;
  const std::size_t k = logits.cols;
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) count += mask[i] ? 1 : 0;
  if (count == 0) throw std::invalid_argument("loss_and_grads: empty mask");

  LossGrads out;
  out.grads.resize(p.depth());
  DenseMatrix g(n, k);  // dL/dlogits
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!mask[i]) continue;
    const double* row = &logits.data[i * k];
    double mx = row[0];
    for (std::size_t j = 1; j < k; ++j) mx = std::max(mx, row[j]);
    double sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) sum += std::exp(row[j] - mx);
    const int y = labels[i];
    if (y < 0) throw std::invalid_argument("loss_and_grads: masked node without label");
    loss += -(row[static_cast<std::size_t>(y)] - mx - std::log(sum));
    for (std::size_t j = 0; j < k; ++j) {
      const double soft = std::exp(row[j] - mx) / sum;
      g(i, j) = (soft - (static_cast<int>(j) == y ? 1.0 : 0.0)) / static_cast<double>(count);
    }
  }
  out.loss = loss / static_cast<double>(count);

  const std::size_t stop = p.lowest_trainable();
  if (stop == p.depth()) return out;  // fully frozen model: loss only

  for (std::size_t l = p.depth(); l-- > stop;) {
    // g currently holds dL/dh[l+1]; fold in the activation derivative
    if (p.specs[l].activation == Activation::relu) {
      const DenseMatrix& act = cache.h[l + 1];
      for (std::size_t i = 0; i < g.data.size(); ++i)
        if (act.data[i] <= 0.0) g.data[i] = 0.0;
    }
    DenseMatrix dp = p.specs[l].kind == LayerKind::graph_conv ? spmm(adj.mat, g)
                                                              : std::move(g);
    if (p.specs[l].trainable) {
      out.grads[l] = matmul_at_b(cache.h[l], dp);
      if (weight_decay != 0.0) {
        const DenseMatrix& w = p.weights[l];
        double sq = 0.0;
        for (double v : w.data) sq += v * v;
        out.loss += 0.5 * weight_decay * sq;
        for (std::size_t i = 0; i < w.data.size(); ++i)
          out.grads[l].data[i] += weight_decay * w.data[i];
      }
    }
    if (l > stop) g = matmul_a_bt(dp, p.weights[l]);
  }
  return out;
}

inline double accuracy_from_logits(const DenseMatrix& logits, const std::vector<int>& labels,
                                   const std::vector<std::uint8_t>& mask) {
  std::size_t count = 0, correct = 0;
  for (std::size_t i = 0; i < logits.rows; ++i) {
    if (!mask[i]) continue;
    ++count;
    // ties break toward the lowest class index; NaN never wins
    std::size_t best = 0;
    double bv = logits(i, 0);
    for (std::size_t j = 1; j < logits.cols; ++j)
      if (logits(i, j) > bv) {
        bv = logits(i, j);
        best = j;
      }
    if (static_cast<int>(best) == labels[i]) ++correct;
  }
  if (count == 0) throw std::invalid_argument("accuracy: empty mask");
  return static_cast<double>(correct) / static_cast<double>(count);
}

/// Argmax accuracy over the masked nodes.
inline double evaluate(const ModelParams& p, const NormalizedAdjacency& adj,
                       const DenseMatrix& x, const std::vector<int>& labels,
                       const std::vector<std::uint8_t>& mask) {
  return accuracy_from_logits(forward_nocache(p, adj, x), labels, mask);
}

}  // namespace fgcn
