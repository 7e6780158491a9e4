#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace horient {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

/// Deterministic child seed for a named stream. Every random draw in the
/// project goes through a stream derived from one root seed via this
/// function, which is what makes whole-pipeline runs reproducible.
constexpr std::uint64_t split_seed(std::uint64_t root, std::string_view purpose,
                                   std::uint64_t index = 0) {
  return splitmix64(root ^ splitmix64(fnv1a64(purpose) +
                                      0x9E3779B97F4A7C15ull * index));
}

/// mt19937_64 with hand-rolled distributions. The standard pins the engine
/// output bit-for-bit but not the library distributions, so uniform/normal
/// are implemented here to keep artifacts byte-stable across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  Rng(std::uint64_t root, std::string_view purpose, std::uint64_t index = 0)
      : eng_(split_seed(root, purpose, index)) {}

  std::uint64_t bits() { return eng_(); }

  /// Uniform in [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  /// Unbiased integer in [0, n), n > 0.
  std::uint64_t uniform_int(std::uint64_t n) {
    const std::uint64_t limit = ~0ull - ~0ull % n;
    std::uint64_t x = eng_();
    while (x >= limit) x = eng_();
    return x % n;
  }

  /// Standard normal via Box-Muller, one value per call (cos branch only,
  /// so draw order stays independent of how results are consumed).
  double normal() {
    double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi_ * u2);
  }

  double normal(double mean, double sigma) { return mean + sigma * normal(); }

 private:
  static constexpr double kTwoPi_ = 6.28318530717958647692;
  std::mt19937_64 eng_;
};

}  // namespace horient
