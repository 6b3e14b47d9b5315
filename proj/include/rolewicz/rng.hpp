#pragma once

#include <cstdint>
#include <random>

namespace rolewicz {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Bit-reproducible across platforms: mt19937_64's output sequence is pinned by
// the standard, and draws below avoid std::uniform_int_distribution, whose
// mapping is implementation-defined. Modulo bias is irrelevant at the ranges
// used here; determinism is what matters.
class DetRng {
 public:
  explicit DetRng(std::uint64_t seed) : eng_(seed) {}

  // Independent, order-insensitive substreams: sample block B always sees the
  // same draws no matter how many blocks ran before it.
  static DetRng substream(std::uint64_t seed, std::uint64_t block) {
    return DetRng(splitmix64(splitmix64(seed) ^ (block + 0x9E3779B97F4A7C15ull)));
  }

  std::uint64_t next() { return eng_(); }
  std::uint64_t below(std::uint64_t n) { return n ? eng_() % n : 0; }
  long between(long lo, long hi) {  // inclusive bounds
    if (hi < lo) throw std::invalid_argument("empty draw range");
    return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace rolewicz
