#pragma once

#include <cstdint>

namespace bkr {

// SplitMix64 (Steele/Lea/Flood). Fully specified, so seeded runs reproduce
// bit-exactly on any platform, unlike the std:: distributions.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform value in [0, bound) by rejection; bound must be nonzero.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % bound;
    std::uint64_t value;
    do {
      value = next();
    } while (value >= limit);
    return value % bound;
  }

  bool next_bool() { return next() >> 63; }

  /// True with probability num/den.
  bool next_bernoulli(std::uint64_t num, std::uint64_t den) {
    return next_below(den) < num;
  }

 private:
  std::uint64_t state_;
};

/// Independent per-trial seed stream: shard-safe, order-free.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  SplitMix64 g(master ^ (0xA0761D6478BD642Full + index * 0xE7037ED1A0B428DBull));
  return g.next();
}

}  // namespace bkr
