#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fgcn/graph.hpp"
#include "fgcn/model.hpp"

namespace fgcn {

enum class Optimizer { adam, sgd };

struct TrainConfig {
  double learning_rate = 0.1;
  std::size_t epochs = 200;
  double weight_decay = 0.0;  // L2 on trainable weights only
  Optimizer optimizer = Optimizer::adam;
  std::uint64_t seed = 0;

  void validate() const {
    if (learning_rate <= 0.0) throw std::invalid_argument("train: learning_rate must be > 0");
    if (epochs < 1) throw std::invalid_argument("train: epochs must be >= 1");
  }
};

struct TrainReport {
  std::vector<double> train_loss;    // per epoch
  std::vector<double> val_accuracy;  // per epoch (empty mask -> stays empty)
  double test_accuracy = 0.0;
  double wall_seconds = 0.0;
  std::optional<std::size_t> diverged_epoch;
};

namespace detail {

inline std::uint64_t fnv1a(const DenseMatrix& m) {
  const unsigned char* p = reinterpret_cast<const unsigned char*>(m.data.data());
  std::uint64_t h = 1469598103934665603ULL;
  for (std::size_t i = 0; i < m.data.size() * sizeof(double); ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

struct AdamState {
  DenseMatrix m, v;
};

}  // namespace detail

/// Full-batch training on the bundle's train mask. Only layers flagged
/// trainable receive updates; everything below the lowest trainable layer is
/// constant across epochs and is forwarded exactly once. Frozen weights are
/// hash-checked against their initialization after the run.
inline TrainReport train(ModelParams& params, const NormalizedAdjacency& adj,
                         const GraphBundle& bundle, const TrainConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  TrainReport report;

  std::vector<std::uint64_t> frozen_hash(params.depth(), 0);
  for (std::size_t l = 0; l < params.depth(); ++l)
    if (!params.specs[l].trainable) frozen_hash[l] = detail::fnv1a(params.weights[l]);

  const std::size_t p0 = params.lowest_trainable();
  ForwardCache cache;
  cache.h.assign(params.depth() + 1, DenseMatrix());
  bool has_val = false;
  for (std::uint8_t v : bundle.val_mask) has_val |= v != 0;

  std::vector<detail::AdamState> adam(params.depth());
  if (cfg.optimizer == Optimizer::adam)
    for (std::size_t l = 0; l < params.depth(); ++l)
      if (params.specs[l].trainable) {
        adam[l].m = DenseMatrix(params.weights[l].rows, params.weights[l].cols);
        adam[l].v = DenseMatrix(params.weights[l].rows, params.weights[l].cols);
      }
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;

  try {
    // constant prefix: layers below the lowest trainable one never change
    cache.h[0] = bundle.features;
    if (p0 > 0) forward_from(params, adj, cache, 0);  // fills up to h[depth]; reuse h[p0]
    const std::size_t start = std::min(p0, params.depth());

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
      forward_from(params, adj, cache, start);
      LossGrads lg = loss_and_grads(params, adj, cache, bundle.labels, bundle.train_mask,
                                    cfg.weight_decay);
      if (!std::isfinite(lg.loss)) {
        report.diverged_epoch = epoch;
        break;
      }
      report.train_loss.push_back(lg.loss);
      if (has_val)
        report.val_accuracy.push_back(
            accuracy_from_logits(cache.h.back(), bundle.labels, bundle.val_mask));

      const double t = static_cast<double>(epoch + 1);
      for (std::size_t l = 0; l < params.depth(); ++l) {
        if (!params.specs[l].trainable) continue;
        DenseMatrix& w = params.weights[l];
        const DenseMatrix& g = lg.grads[l];
        if (cfg.optimizer == Optimizer::adam) {
          DenseMatrix& m = adam[l].m;
          DenseMatrix& v = adam[l].v;
          const double c1 = 1.0 - std::pow(kBeta1, t);
          const double c2 = 1.0 - std::pow(kBeta2, t);
          for (std::size_t i = 0; i < w.data.size(); ++i) {
            m.data[i] = kBeta1 * m.data[i] + (1.0 - kBeta1) * g.data[i];
            v.data[i] = kBeta2 * v.data[i] + (1.0 - kBeta2) * g.data[i] * g.data[i];
            w.data[i] -=
                cfg.learning_rate * (m.data[i] / c1) / (std::sqrt(v.data[i] / c2) + kEps);
          }
        } else {
          for (std::size_t i = 0; i < w.data.size(); ++i)
            w.data[i] -= cfg.learning_rate * g.data[i];
        }
      }
    }
    forward_from(params, adj, cache, start);  // final-epoch weights
    bool has_test = false;
    for (std::uint8_t v : bundle.test_mask) has_test |= v != 0;
    report.test_accuracy =
        has_test ? accuracy_from_logits(cache.h.back(), bundle.labels, bundle.test_mask)
                 : std::numeric_limits<double>::quiet_NaN();
  } catch (const DivergenceError&) {
    if (!report.diverged_epoch) report.diverged_epoch = report.train_loss.size();
    report.test_accuracy = std::numeric_limits<double>::quiet_NaN();
  }

  for (std::size_t l = 0; l < params.depth(); ++l)
    if (!params.specs[l].trainable && detail::fnv1a(params.weights[l]) != frozen_hash[l])
      throw std::runtime_error("train: frozen weight " + std::to_string(l) + " changed");

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace fgcn
