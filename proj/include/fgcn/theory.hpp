#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fgcn/matrix.hpp"
#include "fgcn/rng.hpp"
#include "fgcn/spectral.hpp"

namespace fgcn {

/// One Monte Carlo verdict. The default pass rule is |empirical - target| <
/// k * stderr; checks against limit values (where the estimator has a real
/// finite-size offset) set tol_abs instead and pass on |empirical - target|
/// <= tol_abs.
struct MonteCarloReport {
  std::string statistic;
  double empirical = 0.0;
  double target = 0.0;
  double stderr_ = 0.0;
  std::size_t n = 0;
  double k = 4.0;
  double tol_abs = 0.0;
  bool pass = false;

  static MonteCarloReport from_stderr(std::string name, double emp, double target,
                                      double stderr_v, std::size_t n, double k = 4.0) {
    MonteCarloReport r;
    r.statistic = std::move(name);
    r.empirical = emp;
    r.target = target;
    r.stderr_ = stderr_v;
    r.n = n;
    r.k = k;
    r.pass = std::abs(emp - target) < k * stderr_v;
    return r;
  }

  static MonteCarloReport from_tolerance(std::string name, double emp, double target,
                                         double tol, double stderr_v, std::size_t n) {
    MonteCarloReport r;
    r.statistic = std::move(name);
    r.empirical = emp;
    r.target = target;
    r.stderr_ = stderr_v;
    r.n = n;
    r.tol_abs = tol;
    r.pass = std::abs(emp - target) <= tol;
    return r;
  }
};

inline void write_report_csv_header(std::ostream& os) {
  os << "statistic,empirical,target,stderr,n,pass\n";
}

inline void write_report_csv_row(std::ostream& os, const MonteCarloReport& r) {
  os << r.statistic << ',' << r.empirical << ',' << r.target << ',' << r.stderr_ << ','
     << r.n << ',' << (r.pass ? 1 : 0) << '\n';
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// One-sample Kolmogorov-Smirnov distance against the standard normal.
/// Sorts a copy of the samples.
inline double ks_distance_std_normal(std::vector<double> samples) {
  if (samples.empty()) throw std::invalid_argument("ks: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double cdf = normal_cdf(samples[i]);
    d = std::max(d, std::abs(cdf - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - cdf));
  }
  return d;
}

/// Asymptotic KS critical value at significance alpha for n samples.
inline double ks_critical_value(double alpha, std::size_t n) {
  return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(n));
}

// ---------------------------------------------------------------------------
// Lemma machinery: F = Q - R with Q, R ~ chi^2_1, realized exactly as squared
// standard normals. F is symmetric Variance-Gamma (1/2, 0, 1/2, 0) with
// E[F] = 0, Var(F) = 4.
// ---------------------------------------------------------------------------

inline std::vector<double> sample_vg_difference(std::size_t n, SeededRng& rng) {
  if (n < 1) throw std::invalid_argument("sample_vg_difference: n must be >= 1");
  std::vector<double> out(n);
  for (double& v : out) {
    const double z1 = rng.normal();
    const double z2 = rng.normal();
    v = z1 * z1 - z2 * z2;
  }
  return out;
}

/// Raw moment E[X^p] with a sample-based standard error.
inline MonteCarloReport raw_moment_report(const std::vector<double>& samples, int power,
                                          std::string name, double target, double k = 4.0) {
  const double n = static_cast<double>(samples.size());
  double m = 0.0, m2 = 0.0;
  for (double v : samples) {
    const double x = std::pow(v, power);
    m += x;
    m2 += x * x;
  }
  m /= n;
  m2 /= n;
  const double stderr_v = std::sqrt(std::max(0.0, m2 - m * m) / n);
  return MonteCarloReport::from_stderr(std::move(name), m, target, stderr_v,
                                       samples.size(), k);
}

// ---------------------------------------------------------------------------
// Products of untrained Glorot matrices
// ---------------------------------------------------------------------------

struct DistributionCheck {
  MonteCarloReport mean;
  MonteCarloReport variance;
  double ks_to_glorot = 0.0;  // KS distance to N(0, 1/d) (samples scaled by sqrt(d))
  std::size_t d = 0;
};

/// Samples single entries of W1*W2 directly: sums of d products of two
/// N(0, 1/d) draws. Each sample is independent.
inline DistributionCheck gaussian_product_element_check(std::size_t d, std::size_t n_samples,
                                                        SeededRng& rng) {
  if (d < 2) throw std::invalid_argument("gaussian_product_element_check: d must be >= 2");
  const double sigma = 1.0 / std::sqrt(static_cast<double>(d));
  std::vector<double> samples(n_samples);
  for (double& s : samples) {
    double acc = 0.0;
    for (std::size_t i = 0; i < d; ++i)
      acc += (sigma * rng.normal()) * (sigma * rng.normal());
    s = acc;
  }
  DistributionCheck out;
  out.d = d;
  out.mean = raw_moment_report(samples, 1, "product_entry_mean_d" + std::to_string(d), 0.0);
  out.variance = raw_moment_report(samples, 2, "product_entry_var_d" + std::to_string(d),
                                   1.0 / static_cast<double>(d));
  for (double& s : samples) s *= std::sqrt(static_cast<double>(d));
  out.ks_to_glorot = ks_distance_std_normal(std::move(samples));
  return out;
}

/// Product of k independent Glorot d x d matrices.
inline DenseMatrix glorot_chain_product(std::size_t k, std::size_t d, SeededRng& rng) {
  DenseMatrix p = glorot_init(d, d, rng);
  for (std::size_t i = 1; i < k; ++i) p = matmul(p, glorot_init(d, d, rng));
  return p;
}

struct ChainProductCheck {
  DistributionCheck entries;
  double largest_singular = 0.0;
  std::size_t k = 0;
};

/// Entry-distribution check of a full k-fold matrix product. Entries of one
/// product are identically distributed but not independent; the reported
/// standard errors are the i.i.d. ones (entries are uncorrelated).
inline ChainProductCheck chain_product_check(std::size_t k, std::size_t d, SeededRng& rng) {
  if (k < 1) throw std::invalid_argument("chain_product_check: k must be >= 1");
  const DenseMatrix p = glorot_chain_product(k, d, rng);
  ChainProductCheck out;
  out.k = k;
  out.entries.d = d;
  const std::string suffix = "_k" + std::to_string(k) + "_d" + std::to_string(d);
  out.entries.mean = raw_moment_report(p.data, 1, "chain_entry_mean" + suffix, 0.0);
  out.entries.variance =
      raw_moment_report(p.data, 2, "chain_entry_var" + suffix, 1.0 / static_cast<double>(d));
  std::vector<double> scaled = p.data;
  for (double& v : scaled) v *= std::sqrt(static_cast<double>(d));
  out.entries.ks_to_glorot = ks_distance_std_normal(std::move(scaled));
  out.largest_singular = largest_singular_value(p, 1e-6);
  return out;
}

/// KS distance of k-fold product entries to N(0, 1/d), pooled over as many
/// independent products as needed to reach n_target entries. Only the
/// required rows of the leading factor are generated; the remaining factors
/// stay full d x d so each pooled row is a genuine product-matrix row.
inline double product_entry_ks(std::size_t k, std::size_t d, std::size_t n_target,
                               SeededRng& rng) {
  std::vector<double> pool;
  pool.reserve(n_target);
  while (pool.size() < n_target) {
    const std::size_t rows =
        std::min<std::size_t>(d, (n_target - pool.size() + d - 1) / d);
    DenseMatrix p = glorot_init(rows, d, rng);
    for (std::size_t i = 1; i < k; ++i) p = matmul(p, glorot_init(d, d, rng));
    const std::size_t take = std::min(p.data.size(), n_target - pool.size());
    pool.insert(pool.end(), p.data.begin(), p.data.begin() + static_cast<long>(take));
  }
  for (double& v : pool) v *= std::sqrt(static_cast<double>(d));
  return ks_distance_std_normal(std::move(pool));
}

// ---------------------------------------------------------------------------
// Bai-Yin: s_max of an N x N Glorot matrix tends to 2
// ---------------------------------------------------------------------------

struct BaiYinCheck {
  std::vector<double> s_values;  // one s_max per trial
  MonteCarloReport report;       // mean against the limit target
};

/// Samples s_max over independent trials. With unit_variance the entries are
/// N(0,1) and the target is the unscaled law sqrt(N) + sqrt(N).
inline BaiYinCheck bai_yin_check(std::size_t n, std::size_t trials, SeededRng& rng,
                                 bool unit_variance = false, double tol_abs = 0.10) {
  if (n < 100) throw std::invalid_argument("bai_yin_check: N must be >= 100");
  BaiYinCheck out;
  const double sigma = unit_variance ? 1.0 : 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t t = 0; t < trials; ++t) {
    DenseMatrix m(n, n);
    for (double& v : m.data) v = sigma * rng.normal();
    out.s_values.push_back(largest_singular_value(m, 1e-6, 50000));
  }
  double mean = 0.0;
  for (double v : out.s_values) mean += v;
  mean /= static_cast<double>(trials);
  double var = 0.0;
  for (double v : out.s_values) var += (v - mean) * (v - mean);
  const double stderr_v =
      trials > 1 ? std::sqrt(var / static_cast<double>(trials - 1) /
                             static_cast<double>(trials))
                 : 0.0;
  const double target = unit_variance ? 2.0 * std::sqrt(static_cast<double>(n)) : 2.0;
  const double tol = unit_variance ? tol_abs * std::sqrt(static_cast<double>(n)) : tol_abs;
  out.report = MonteCarloReport::from_tolerance(
      unit_variance ? "bai_yin_smax_mean_unit_var_N" + std::to_string(n)
                    : "bai_yin_smax_mean_N" + std::to_string(n),
      mean, target, tol, stderr_v, trials);
  return out;
}

// ---------------------------------------------------------------------------
// Lemma 5: rows of B * W are jointly Gaussian with covariance (1/d) B B^T
// ---------------------------------------------------------------------------

struct ProjectedCovarianceCheck {
  double max_rel_dev = 0.0;  // over the top_k magnitude entries of (1/d) B B^T
  std::size_t top_k = 0;
  DenseMatrix empirical;  // estimated row covariance of B W
  DenseMatrix target;     // (1/d) B B^T
  MonteCarloReport report;
};

inline ProjectedCovarianceCheck projected_covariance_check(const DenseMatrix& b,
                                                           std::size_t d, std::size_t trials,
                                                           SeededRng& rng,
                                                           std::size_t top_k = 100,
                                                           double tol = 0.10) {
  if (d < 2) throw std::invalid_argument("projected_covariance_check: d must be >= 2");
  bool nonzero = false;
  for (double v : b.data) nonzero |= v != 0.0;
  if (!nonzero) throw std::invalid_argument("projected_covariance_check: B is all-zero");

  const std::size_t nb = b.rows;
  DenseMatrix acc(nb, nb);
  const std::uint64_t base = rng.next_u64();
  for (std::size_t t = 0; t < trials; ++t) {
    SeededRng sub = SeededRng::substream(base, t);
    const DenseMatrix y = matmul(b, glorot_init(b.cols, d, sub));
    const DenseMatrix yyt = matmul_a_bt(y, y);
    for (std::size_t i = 0; i < acc.data.size(); ++i) acc.data[i] += yyt.data[i];
  }
  const double scale = 1.0 / (static_cast<double>(trials) * static_cast<double>(d));
  ProjectedCovarianceCheck out;
  out.target = matmul_a_bt(b, b);
  for (double& v : out.target.data) v /= static_cast<double>(d);  // (1/d) B B^T
  out.empirical = acc;
  for (double& v : out.empirical.data) v *= scale;

  std::vector<std::size_t> order(out.target.data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y2) {
    return std::abs(out.target.data[x]) > std::abs(out.target.data[y2]);
  });
  out.top_k = std::min(top_k, order.size());
  for (std::size_t r = 0; r < out.top_k; ++r) {
    const std::size_t i = order[r];
    const double t_val = out.target.data[i];
    const double e_val = out.empirical.data[i];
    if (t_val == 0.0) continue;  // top-magnitude entries of a nonzero B B^T
    out.max_rel_dev = std::max(out.max_rel_dev, std::abs(e_val - t_val) / std::abs(t_val));
  }
  out.report = MonteCarloReport::from_tolerance(
      "projected_covariance_max_rel_dev_top" + std::to_string(out.top_k), out.max_rel_dev,
      0.0, tol, std::sqrt(2.0 / (static_cast<double>(d) * static_cast<double>(trials))),
      trials * d);
  return out;
}

// ---------------------------------------------------------------------------
// Row-correlation sweep over widths (the N/d damping picture)
// ---------------------------------------------------------------------------

struct CorrelationRow {
  std::size_t width = 0;
  double mean_abs_corr = 0.0;  // averaged over trials
  double spread = 0.0;         // std of the statistic across trials
  bool valid = false;          // false when correlations are undefined (< 2 rows)
};

inline double mean_abs_row_correlation(const DenseMatrix& y) {
  const std::size_t n = y.rows, d = y.cols;
  std::vector<double> mean(n, 0.0), var(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) mean[i] += y(i, j);
    mean[i] /= static_cast<double>(d);
    for (std::size_t j = 0; j < d; ++j) {
      const double c = y(i, j) - mean[i];
      var[i] += c * c;
    }
  }
  double acc = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      ++pairs;
      if (var[i] <= 0.0 || var[j] <= 0.0) {
        bool equal = true;
        for (std::size_t c = 0; c < d && equal; ++c) equal = y(i, c) == y(j, c);
        acc += equal ? 1.0 : 0.0;
        continue;
      }
      double cov = 0.0;
      for (std::size_t c = 0; c < d; ++c) cov += (y(i, c) - mean[i]) * (y(j, c) - mean[j]);
      acc += std::abs(cov / std::sqrt(var[i] * var[j]));
    }
  return acc / static_cast<double>(pairs);
}

/// For each width d: mean absolute pairwise Pearson correlation of the rows
/// of B*W over Monte Carlo draws of W. The table is reported as-is; no
/// monotonicity in the mean is asserted anywhere (the trial spread, however,
/// shrinks as d grows).
inline std::vector<CorrelationRow> correlation_vs_width_sweep(const DenseMatrix& b,
                                                              const std::vector<std::size_t>& widths,
                                                              std::size_t trials,
                                                              SeededRng& rng) {
  for (std::size_t i = 1; i < widths.size(); ++i)
    if (widths[i] <= widths[i - 1])
      throw std::invalid_argument("correlation_vs_width_sweep: widths must ascend");
  std::vector<CorrelationRow> rows;
  for (std::size_t d : widths) {
    CorrelationRow row;
    row.width = d;
    if (b.rows < 2) {
      rows.push_back(row);  // n/a: correlation undefined for a single row
      continue;
    }
    std::vector<double> stats;
    const std::uint64_t base = rng.next_u64();
    for (std::size_t t = 0; t < trials; ++t) {
      SeededRng sub = SeededRng::substream(base, t);
      stats.push_back(mean_abs_row_correlation(matmul(b, glorot_init(b.cols, d, sub))));
    }
    double m = 0.0;
    for (double v : stats) m += v;
    m /= static_cast<double>(stats.size());
    double var = 0.0;
    for (double v : stats) var += (v - m) * (v - m);
    row.mean_abs_corr = m;
    row.spread = stats.size() > 1 ? std::sqrt(var / static_cast<double>(stats.size() - 1)) : 0.0;
    row.valid = true;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace fgcn
