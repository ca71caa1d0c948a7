#pragma once

#include <cmath>
#include <cstdint>

namespace gig {

// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Counter-based stream derived from (seed, path). Every path owns an
// independent, reproducible sequence, so serial and parallel execution of a
// simulation agree bit for bit regardless of scheduling.
class PathRng {
public:
    PathRng(std::uint64_t seed, std::uint64_t path)
        : state_(mix64(mix64(seed + 0x9E3779B97F4A7C15ull) ^
                       (path * 0xD1B54A32D192ED03ull + 0x8BB84B93962EACC9ull))) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        return mix64(state_);
    }

    // Uniform on (0, 1].
    double next_unit() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    // Standard normal via Box-Muller; consumes two uniforms per draw.
    double next_normal() {
        double u1 = next_unit();
        double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

private:
    static constexpr double kPi = 3.14159265358979323846;
    std::uint64_t state_;
};

}  // namespace gig
