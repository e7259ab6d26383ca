#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace efl {

// All randomness in the toolkit flows through named sub-streams derived from a
// single run seed, so that adding a training stage never reshuffles the draws
// of earlier stages. Stream derivation uses SplitMix64 over (seed, FNV-1a of
// the stream name, stream index); the generator itself is std::mt19937_64,
// whose output sequence is fixed by the standard. Uniform doubles are produced
// by the 53-bit mantissa mapping below, so draws are identical across
// platforms and standard libraries.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // uniform in [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::mt19937_64 eng_;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view s);

// Derive the seed of sub-stream (name, index) from a run seed.
std::uint64_t derive_stream_seed(std::uint64_t seed, std::string_view name,
                                 std::uint64_t index = 0);

inline RngStream substream(std::uint64_t seed, std::string_view name,
                           std::uint64_t index = 0) {
    return RngStream(derive_stream_seed(seed, name, index));
}

}  // namespace efl
