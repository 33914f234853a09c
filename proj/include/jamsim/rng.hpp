#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace jamsim {

/// splitmix64 finalizer; used for key derivation and generator seeding.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Tags separating the independent random streams of one coherence block.
enum class StreamTag : std::uint64_t {
  pilot_assignment = 1,
  jammer_sequence = 2,
  channels = 3,
  pilot_noise = 4,
  data_noise = 5,
  data_symbols = 6,
};

/// Counter-keyed xoshiro256++ stream.
///
/// Every (seed, block, tag, lane) tuple names an independent stream, so
/// trials can run in any order, on any thread, and still produce identical
/// draws. Gaussian variates use an explicit Box-Muller so the byte stream is
/// identical across standard libraries.
class RngStream {
 public:
  explicit RngStream(std::uint64_t key) {
    std::uint64_t z = key;
    for (auto& word : state_) word = mix64(z++);
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
  }

  static RngStream derive(std::uint64_t seed, std::uint64_t block, StreamTag tag,
                          std::uint64_t lane = 0) {
    std::uint64_t k = mix64(seed);
    k = mix64(k ^ block);
    k = mix64(k ^ static_cast<std::uint64_t>(tag));
    k = mix64(k ^ lane);
    return RngStream(k);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Unbiased integer in [0, n).
  std::uint64_t bounded(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform in (0, 1]; safe as a log argument.
  double uniform_pos() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal, Box-Muller pair with one variate cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
    const double phi = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(phi);
    has_spare_ = true;
    return r * std::cos(phi);
  }

  /// Circularly symmetric complex Gaussian CN(0, variance): real and
  /// imaginary parts are independent N(0, variance/2).
  std::complex<double> cgauss(double variance) {
    if (variance <= 0.0) return {0.0, 0.0};
    const double r = std::sqrt(-variance * std::log(uniform_pos()));
    const double phi = 2.0 * std::numbers::pi * uniform();
    return {r * std::cos(phi), r * std::sin(phi)};
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace jamsim
