#pragma once

#include <cstdint>

namespace ppx {

// SplitMix64 finalizer (Vigna). Bijective, full avalanche; also used as the
// stream-key derivation hash.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ull;

// Key for the index-th stream under a root seed. Replicate paths get
// derive_stream(root, path); nested uses (independent batches inside one
// estimator) tag the root first with derive_stream(root, tag).
constexpr std::uint64_t derive_stream(std::uint64_t root, std::uint64_t index) noexcept {
  return mix64(root + kGoldenGamma * (index + 1));
}

// Sequential SplitMix64 stream. One instance per path; never shared across
// threads, so estimators stay reproducible under any parallel schedule.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += kGoldenGamma);
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform on the open interval (0,1), 53-bit resolution. Zero is rejected
  // so downstream inverse transforms cannot produce 0 or infinity.
  double next_unit() noexcept {
    for (;;) {
      const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
      if (u > 0.0) return u;
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace ppx
