#ifndef LCR_RNG_HPP
#define LCR_RNG_HPP

#include <cstdint>

namespace lcr {

// SplitMix64 mixing step (Steele, Lea, Flood; public domain reference constants).
// Used both as a generator and as the key-derivation hash for substreams, so
// every random draw in the toolkit is a pure function of (master seed, path).
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix64(std::uint64_t x) {
    std::uint64_t s = x;
    return splitmix64_next(s);
}

// Substream key derivation: feed each path component through the mixer.
// derive(seed, a) != derive(seed, b) for a != b with overwhelming probability,
// and the result is independent of how the caller schedules work.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t a) {
    return mix64(seed ^ mix64(a ^ 0x6a09e667f3bcc909ULL));
}
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return derive_stream(derive_stream(seed, a), b);
}
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                                   std::uint64_t c) {
    return derive_stream(derive_stream(seed, a, b), c);
}

// Minimal counter-less generator over SplitMix64. Portable: output depends
// only on the seed, never on the platform or standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return splitmix64_next(state_); }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

}  // namespace lcr

#endif
