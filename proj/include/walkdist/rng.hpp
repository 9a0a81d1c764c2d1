#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include <boost/multiprecision/cpp_int.hpp>

namespace walkdist {

using BigInt = boost::multiprecision::cpp_int;

// splitmix64 step: the mixing function used to derive per-task seeds from a
// master seed. Fully specified, so derived streams are identical across
// platforms and thread schedules.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Deterministic seed derivation: master seed + task coordinates -> stream
// seed. Tasks indexed the same way get the same stream no matter how work
// is scheduled. Two mixing rounds decorrelate nearby coordinates.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0) {
  // Each coordinate is injected into the fully mixed image of the previous
  // state, never into a raw XOR/sum: feeding the mix output forward is what
  // prevents distinct (master, a, b) triples from canceling to the same
  // stream seed.
  std::uint64_t s = master;
  s = splitmix64(s);
  s ^= 0xA0761D6478BD642Full + a;
  s = splitmix64(s);
  s ^= 0xE7037ED1A0B428DBull + b;
  return splitmix64(s);
}

// mt19937_64 is bit-exact per the standard; only the std distributions are
// implementation-defined, so all conversions below are hand-rolled.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform integer in [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    for (;;) {
      std::uint64_t x = next_u64();
      if (x < limit) return x % bound;
    }
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller (deterministic, unlike
  // std::normal_distribution).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1, u2;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  // Uniform big integer in [0, bound) by top-bit rejection; bound > 0.
  BigInt big_below(const BigInt& bound) {
    const unsigned bits = static_cast<unsigned>(msb(bound)) + 1;
    const unsigned words = (bits + 63) / 64;
    for (;;) {
      BigInt x = 0;
      for (unsigned w = 0; w < words; ++w) {
        x <<= 64;
        x |= BigInt(next_u64());
      }
      x >>= (words * 64 - bits);
      if (x < bound) return x;
    }
  }

private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace walkdist
