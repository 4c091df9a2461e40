#include "circletrack/rng.hpp"

namespace circletrack {

namespace {

// splitmix64 finalizer; good avalanche for seed derivation.
std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t substream_seed(std::uint64_t root, std::string_view name, std::uint64_t index) {
    std::uint64_t h = mix(root);
    for (unsigned char c : name) {
        h = mix(h ^ c);
    }
    return mix(h ^ index);
}

}  // namespace circletrack
