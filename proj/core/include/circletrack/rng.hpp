#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace circletrack {

/// Deterministic random stream. The engine is mt19937_64 (fully specified by
/// the standard) and the uniform/normal transforms are done by hand, so a
/// given seed produces the same draws on every platform and toolchain.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform draw in [0, 1) with 53-bit resolution.
    double uniform() { return (engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 6.283185307179586477 * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Derives a child seed from a root seed, a stream name, and an index, so
/// every component of a run draws from its own independent stream.
std::uint64_t substream_seed(std::uint64_t root, std::string_view name, std::uint64_t index = 0);

}  // namespace circletrack
