#pragma once

// Small random models + graphs for gradient checking: N <= 10 nodes,
// widths <= 8, depths 2..4, every trainable-position choice, both layer
// kinds. Shared by the unit suite and the acceptance runner.

#include <cstdint>
#include <vector>

#include "fgcn/graph.hpp"
#include "fgcn/model.hpp"
#include "fgcn/rng.hpp"

namespace miniatures {

struct Miniature {
  fgcn::NormalizedAdjacency adj;
  fgcn::DenseMatrix x;
  std::vector<int> labels;
  std::vector<std::uint8_t> mask;
  fgcn::ModelParams params;
  double weight_decay = 0.0;
};

/// Deterministic miniature number `index`. Cycles trainable position,
/// trainable-layer kind and depth so that a run of consecutive indices
/// covers every combination.
inline Miniature make(std::uint64_t index) {
  fgcn::SeededRng rng(0xA11CE + index);
  Miniature m;

  const std::size_t n = 4 + rng.below(7);  // 4..10 nodes
  std::vector<fgcn::Edge> edges;
  for (std::uint32_t i = 1; i < n; ++i)  // spanning tree keeps it connected
    edges.push_back({static_cast<std::uint32_t>(rng.below(i)), i, 0.5 + rng.uniform01()});
  for (std::size_t k = 0; k < n; ++k)
    edges.push_back({static_cast<std::uint32_t>(rng.below(n)),
                     static_cast<std::uint32_t>(rng.below(n)), rng.uniform01()});
  m.adj = fgcn::normalize_adjacency(edges, n);

  const std::size_t depth = 2 + index % 3;          // 2..4
  const std::size_t width = 3 + rng.below(6);       // 3..8
  const std::size_t in_dim = 2 + rng.below(7);      // 2..8
  const int k_classes = 2 + static_cast<int>(rng.below(3));
  const std::size_t position = 1 + index % depth;   // 1-based trainable position
  const fgcn::LayerKind train_kind =
      (index / 2) % 2 == 0 ? fgcn::LayerKind::graph_conv : fgcn::LayerKind::dense;
  const bool two_trainable = index % 7 == 3 && depth >= 3;

  std::vector<fgcn::LayerSpec> specs;
  for (std::size_t l = 0; l < depth; ++l) {
    fgcn::LayerSpec s;
    s.in_dim = l == 0 ? in_dim : width;
    s.out_dim = l + 1 == depth ? static_cast<std::size_t>(k_classes) : width;
    s.trainable = (l + 1 == position) || (two_trainable && l + 2 == position);
    s.kind = s.trainable ? train_kind : fgcn::LayerKind::graph_conv;
    s.activation = l + 1 == depth ? fgcn::Activation::none : fgcn::Activation::relu;
    specs.push_back(s);
  }
  m.params = fgcn::build_model(specs, rng);

  m.x = fgcn::DenseMatrix(n, in_dim);
  for (double& v : m.x.data) v = rng.normal();
  m.labels.resize(n);
  for (auto& l : m.labels) l = static_cast<int>(rng.below(static_cast<std::uint64_t>(k_classes)));
  m.mask.assign(n, 0);
  std::size_t masked = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (rng.uniform01() < 0.6) {
      m.mask[i] = 1;
      ++masked;
    }
  if (masked == 0) m.mask[0] = 1;
  m.weight_decay = index % 3 == 0 ? 5e-4 : 0.0;
  return m;
}

/// Cross-entropy + L2 loss evaluated from scratch; the finite-difference
/// oracle perturbs weight entries and calls this.
inline double loss_by_forward(const Miniature& m) {
  const fgcn::DenseMatrix logits = fgcn::forward_nocache(m.params, m.adj, m.x);
  double loss = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < logits.rows; ++i) {
    if (!m.mask[i]) continue;
    ++count;
    const double* row = &logits.data[i * logits.cols];
    double mx = row[0];
    for (std::size_t j = 1; j < logits.cols; ++j) mx = std::max(mx, row[j]);
    double sum = 0.0;
    for (std::size_t j = 0; j < logits.cols; ++j) sum += std::exp(row[j] - mx);
    loss += -(row[static_cast<std::size_t>(m.labels[i])] - mx - std::log(sum));
  }
  loss /= static_cast<double>(count);
  if (m.weight_decay != 0.0)
    for (std::size_t l = 0; l < m.params.depth(); ++l)
      if (m.params.specs[l].trainable) {
        double sq = 0.0;
        for (double v : m.params.weights[l].data) sq += v * v;
        loss += 0.5 * m.weight_decay * sq;
      }
  return loss;
}

/// Largest relative gradient error over all trainable entries, against
/// central finite differences with the given step.
inline double max_grad_rel_error(Miniature& m, double step = 1e-5) {
  fgcn::ForwardCache cache;
  fgcn::forward(m.params, m.adj, m.x, cache);
  const fgcn::LossGrads lg =
      fgcn::loss_and_grads(m.params, m.adj, cache, m.labels, m.mask, m.weight_decay);
  double worst = 0.0;
  for (std::size_t l = 0; l < m.params.depth(); ++l) {
    if (!m.params.specs[l].trainable) continue;
    fgcn::DenseMatrix& w = m.params.weights[l];
    for (std::size_t i = 0; i < w.data.size(); ++i) {
      const double saved = w.data[i];
      w.data[i] = saved + step;
      const double up = loss_by_forward(m);
      w.data[i] = saved - step;
      const double down = loss_by_forward(m);
      w.data[i] = saved;
      const double fd = (up - down) / (2.0 * step);
      const double an = lg.grads[l].data[i];
      const double rel = std::abs(an - fd) / std::max({std::abs(an), std::abs(fd), 1e-3});
      worst = std::max(worst, rel);
    }
  }
  return worst;
}

}  // namespace miniatures
