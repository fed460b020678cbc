#pragma once

#include <cstdint>
#include <random>

namespace sagin {

/// Seeded random stream with portable samplers.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The distributions are implemented here rather than taken from
/// <random> because the library distributions are implementation-defined, and
/// traces must be byte-identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    /// Independent sub-stream keyed by (seed, stream, index).
    static Rng derive(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0);

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform();
    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t uniform_index(std::uint64_t n);
    bool bernoulli(double p) { return uniform() < p; }
    /// Standard normal (Marsaglia polar method).
    double normal();
    /// Gamma(shape, scale) via Marsaglia-Tsang; shape < 1 uses the boost trick.
    double gamma(double shape, double scale);

private:
    std::mt19937_64 engine_;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

/// SplitMix64 finalizer, used for seed derivation.
std::uint64_t mix64(std::uint64_t x);

}  // namespace sagin
