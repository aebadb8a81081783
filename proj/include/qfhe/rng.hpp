#pragma once

#include <cstdint>
#include <string_view>

namespace qfhe {

/// Splittable deterministic generator (splitmix64 core). Every source of
/// randomness in the library flows from one of these; a fixed seed makes a
/// whole run bit-reproducible. split() derives an independent child stream,
/// so concurrent tasks never share generator state.
class SeededGenerator {
 public:
  explicit SeededGenerator(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, bound) by rejection; bound > 0.
  uint64_t below(uint64_t bound) {
    const uint64_t limit = bound * (UINT64_MAX / bound);
    uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % bound;
  }

  /// Uniform double in [0, 1).
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  SeededGenerator split() { return SeededGenerator(next() ^ 0xd1b54a32d192ed03ULL); }

  SeededGenerator split(std::string_view label) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : label) {
      h ^= static_cast<uint8_t>(c);
      h *= 0x100000001b3ULL;
    }
    return SeededGenerator(next() ^ h);
  }

 private:
  uint64_t state_;
};

}  // namespace qfhe
