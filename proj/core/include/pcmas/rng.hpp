#pragma once

#include <cstdint>
#include <cstring>
#include <random>

namespace pcmas {

/// The project-wide random generator ("pcmas-rng-v1").
///
/// Wraps std::mt19937_64, whose output sequence is pinned by the C++
/// standard, and derives uniform doubles from the top 53 bits directly
/// instead of going through std::uniform_real_distribution (whose output
/// is implementation-defined). Streams are therefore bit-identical
/// across platforms and toolchains for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform double in [0, 1).
  double next_double() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(gen_()) * n) >> 64);
  }

 private:
  std::mt19937_64 gen_;
};

/// One splitmix64 step. Used only for seed derivation.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Bit pattern of a double, for hashing x-axis values into seeds.
inline std::uint64_t double_bits(double x) {
  std::uint64_t bits;
  static_assert(sizeof(bits) == sizeof(x));
  std::memcpy(&bits, &x, sizeof(bits));
  return bits;
}

/// Deterministic sub-stream seed: hash of (base, a, b).
/// Used to give every trial of every sweep point its own seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                                 std::uint64_t b = 0) {
  std::uint64_t s = splitmix64(base);
  s = splitmix64(s ^ a);
  s = splitmix64(s ^ b);
  return s;
}

}  // namespace pcmas
