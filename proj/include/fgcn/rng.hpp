#pragma once

#include <cstdint>
#include <cmath>
#include <random>

namespace fgcn {

namespace detail {
// splitmix64 finalizer, used to spread user seeds and derive substreams.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace detail

/// Deterministic random source: mt19937_64 stream with a hand-rolled
/// Box-Muller transform so that the normal stream is identical for a given
/// seed on every platform (std::normal_distribution is not portable).
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : gen_(detail::mix64(seed)) {}

  /// Independent substream for trial `index` of a run seeded with `seed`.
  static SeededRng substream(std::uint64_t seed, std::uint64_t index) {
    return SeededRng(detail::mix64(seed) ^ detail::mix64(index + 1));
  }

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; generates pairs, caches the spare.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // modulo bias is < 2^-53 for any n we ever use; fine for experiments
    return gen_() % n;
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace fgcn
