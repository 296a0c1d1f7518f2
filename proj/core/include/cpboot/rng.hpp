#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace cpboot {

/// Deterministic, splittable random stream.
///
/// Streams form a tree: a substream is identified by a 64-bit key derived
/// from (parent key, role, index). Replicate j of a run therefore sees the
/// same draws no matter which worker executes it or in what order, which is
/// what makes the bootstrap engine reproducible under parallelism.
///
/// Generation is xoshiro256** seeded from the key via splitmix64; all draw
/// primitives are implemented here so results do not depend on the standard
/// library's distribution internals.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed);

    /// Child stream keyed by (this stream's key, role, index).
    [[nodiscard]] RngStream derive(std::string_view role, std::uint64_t index) const;

    [[nodiscard]] std::uint64_t key() const noexcept { return key_; }

    std::uint64_t next_u64();

    /// Uniform double in [0, 1).
    double next_unit();

    /// Uniform integer in [0, bound); bound must be nonzero. Debiased
    /// multiply-shift (Lemire), exact uniformity.
    std::uint64_t next_index(std::uint64_t bound);

    /// Normal draw via Box-Muller; consumes exactly two uniforms per call.
    double next_normal(double mean, double stddev);

private:
    std::array<std::uint64_t, 4> state_;
    std::uint64_t key_;
};

}  // namespace cpboot
