#pragma once

#include <cstdint>
#include <random>

namespace ppassoc {

// Seed for a reproducible experiment. Derived substreams make every replicate
// independent of scheduling: replicate i always sees the same stream.
struct RngSeed {
    std::uint64_t value = 0;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline RngSeed substream(RngSeed seed, std::uint64_t index) {
    return RngSeed{splitmix64(splitmix64(seed.value) ^ splitmix64(index + 0x9E3779B97F4A7C15ULL))};
}

inline std::mt19937_64 make_engine(RngSeed seed) {
    return std::mt19937_64(splitmix64(seed.value ^ 0xA5A5A5A5A5A5A5A5ULL));
}

// Uniform on the open interval (0, 1): keeps inverse-CDF samples off the
// window boundaries and off exact source-event times.
inline double uniform_open01(std::mt19937_64& engine) {
    return (static_cast<double>(engine() >> 12) + 0.5) * 0x1.0p-52;
}

}  // namespace ppassoc
