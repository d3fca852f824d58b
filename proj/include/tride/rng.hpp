#ifndef TRIDE_RNG_HPP
#define TRIDE_RNG_HPP

#include <cmath>
#include <cstdint>

#include <Eigen/Core>

namespace tride {

// Purpose tags keep independent consumers of the same seed on disjoint
// streams. Values are arbitrary but frozen: changing them changes every
// seeded result.
enum class StreamKind : std::uint64_t {
  kScene = 1,
  kEvidence = 2,
  kCorrupt = 3,
  kInit = 4,
  kSweep = 5,
  kTheory = 6,
  kEval = 7,
};

/// Counter-based splittable random stream.
///
/// A stream is fully determined by (seed, kind, a, b): the same key yields
/// the same sequence on any platform and in any evaluation order, which is
/// what makes per-edge work order-independent and runs byte-reproducible.
/// The core is the SplitMix64 finalizer; distributions are implemented
/// here rather than with <random> so that output does not depend on the
/// standard library.
class StreamRng {
 public:
  StreamRng(std::uint64_t seed, StreamKind kind, std::uint64_t a = 0,
            std::uint64_t b = 0) {
    state_ = 0x9E3779B97F4A7C15ull;
    absorb(seed);
    absorb(static_cast<std::uint64_t>(kind));
    absorb(a);
    absorb(b);
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    return finalize(state_);
  }

  /// Uniform in [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). Lemire multiply-shift, no modulo bias worth
  /// caring about at the n used here (n < 2^32).
  int uniform_index(int n) {
    const auto wide = static_cast<unsigned __int128>(next_u64()) *
                      static_cast<unsigned __int128>(n);
    return static_cast<int>(wide >> 64);
  }

  /// Standard normal via Box-Muller. One value per call, two words consumed;
  /// the sine branch is unused.
  double gaussian() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  Eigen::Vector3d gaussian3() {
    const double x = gaussian();
    const double y = gaussian();
    const double z = gaussian();
    return {x, y, z};
  }

  /// Uniform on the unit sphere (normalized Gaussian). Not sign-canonical.
  Eigen::Vector3d unit_vector() {
    while (true) {
      const Eigen::Vector3d v = gaussian3();
      const double n = v.norm();
      if (n > 1e-12) return v / n;
    }
  }

 private:
  static std::uint64_t finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  void absorb(std::uint64_t word) { state_ = finalize(state_ ^ word); }

  std::uint64_t state_;
};

}  // namespace tride

#endif  // TRIDE_RNG_HPP
