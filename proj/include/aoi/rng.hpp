#pragma once

#include <cstdint>
#include <random>

namespace aoi {

/// Reproducible random stream. Each (seed, stream) pair seeds an
/// independent mt19937_64 through std::seed_seq; both are specified
/// bit-exactly by the standard, so draws are identical on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on (0, 1], 53-bit resolution.
    double uniform_open0() {
        return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    }

    /// Exp(rate) by inversion.
    double exponential(double rate);

private:
    std::mt19937_64 engine_;
};

}  // namespace aoi
