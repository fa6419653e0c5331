#pragma once

#include <cstdint>
#include <cmath>
#include <string_view>

namespace dimlab {

// SplitMix64 (Steele, Lea, Flood 2014). Counter-based core: the seed fully
// determines the stream, child streams are derived by hashing a tag into the
// seed, and copies of the engine are cheap value types.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0,1) with 53 random bits.
  double next_u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool next_bernoulli(double p) { return next_u01() < p; }

  double next_uniform(double lo, double hi) { return lo + next_u01() * (hi - lo); }

  // Standard normal via Box-Muller; consumes two uniforms per call.
  double next_gaussian() {
    double u1 = next_u01();
    double u2 = next_u01();
    while (u1 <= 0.0) u1 = next_u01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

  // Derive an independent child seed for a named sub-task.
  std::uint64_t fork_seed(std::string_view tag) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a over the tag
    for (unsigned char c : tag) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    Rng child(state_ ^ h);
    return child.next_u64();
  }

 private:
  std::uint64_t state_;
};

}  // namespace dimlab
