#include "efl/rng.hpp"

namespace efl {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t derive_stream_seed(std::uint64_t seed, std::string_view name,
                                 std::uint64_t index) {
    std::uint64_t h = splitmix64(seed ^ fnv1a64(name));
    return splitmix64(h ^ splitmix64(index));
}

}  // namespace efl
