#pragma once

#include <cstdint>

namespace diqpq {

// Counter-based splitmix64 stream. Each protocol round derives its own
// stream from (seed, stream id, round index), so results do not depend on
// how rounds are distributed across workers.
class RoundRng {
  public:
    RoundRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index)
        : state_(mix(mix(mix(seed) ^ stream) ^ index)) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix_out(state_);
    }

    // Uniform in [0, 1) with 53 bits of precision.
    double next_u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool next_bool() { return (next_u64() >> 63) != 0; }

    bool bernoulli(double p) { return next_u01() < p; }

  private:
    static std::uint64_t mix_out(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    static std::uint64_t mix(std::uint64_t z) {
        return mix_out(z + 0x9e3779b97f4a7c15ULL);
    }

    std::uint64_t state_;
};

// Stream ids, kept distinct so certification, key establishment and
// auxiliary draws never reuse a round stream.
inline constexpr std::uint64_t kStreamCertification = 0x11d1;
inline constexpr std::uint64_t kStreamKeyPhase = 0x22d2;
inline constexpr std::uint64_t kStreamTransmission = 0x33d3;
inline constexpr std::uint64_t kStreamPolicy = 0x44d4;

}  // namespace diqpq
