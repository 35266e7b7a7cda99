#pragma once

#include <cmath>
#include <cstdint>

namespace viewmetric {

/// Deterministic 64-bit generator (splitmix64, Steele et al.).
/// The algorithm is fixed by this header: integer state updates only, so a
/// given seed reproduces the same stream on every platform. Gaussian draws
/// use the Box-Muller transform on top of the uniform stream.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * (1.0 / 9007199254740992.0);
    }

    /// Uniform double in (0, 1]; safe as a log() argument.
    double next_double_open() {
        return static_cast<double>((next_u64() >> 11) + 1) * (1.0 / 9007199254740992.0);
    }

    /// Uniform index in {0, ..., n-1}; n must be positive.
    std::size_t next_index(std::size_t n) {
        std::size_t i = static_cast<std::size_t>(next_double() * static_cast<double>(n));
        return i < n ? i : n - 1;
    }

    /// Standard normal deviate. Box-Muller; consumes two uniforms per pair
    /// of gaussians, the second is cached.
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_double_open();
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace viewmetric
