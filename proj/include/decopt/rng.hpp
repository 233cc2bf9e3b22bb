#ifndef DECOPT_RNG_HPP
#define DECOPT_RNG_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>

namespace decopt {

// Counter-based deterministic generator. A stream is keyed by
// (seed, node, round); drawing never mutates anything but the local
// counter, so per-node streams can be created inside a parallel node
// loop and the run stays bit-identical to sequential execution.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t node = 0,
                     std::uint64_t round = 0)
      : key_(derive_key(seed, node, round)) {}

  std::uint64_t next_u64() {
    std::uint64_t z = key_ + (++counter_) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on (0, 1): never returns exactly 0 or 1.
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform integer in [0, n). n must be >= 1.
  std::size_t uniform_int(std::size_t n) {
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // Standard normal via Box-Muller; two fresh uniforms per draw, no
  // cached spare, so the draw count per call is fixed.
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t node,
                                  std::uint64_t round) {
    auto mix = [](std::uint64_t z) {
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      return z ^ (z >> 31);
    };
    std::uint64_t k = mix(seed + 0x9e3779b97f4a7c15ULL);
    k = mix(k ^ (node + 0xbf58476d1ce4e5b9ULL));
    k = mix(k ^ (round + 0x94d049bb133111ebULL));
    return k;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace decopt

#endif
