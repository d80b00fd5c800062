#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace morpho {

/// Philox4x32-10 (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3").
/// A keyed bijection of a 128-bit counter; every output is a pure function of
/// (key, counter), so independent streams need no shared state.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter block(Counter ctr, Key key);
};

/// Random stream used throughout the engine.
///
/// The 64-bit seed is the Philox key; the stream id occupies the upper half of
/// the counter and the draw index the lower half. Two streams with the same
/// seed and different ids never overlap, which is how per-task generators are
/// derived without touching scheduling order.
class Rng {
public:
    static constexpr std::string_view kName = "philox4x32-10";

    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint32_t next_u32();
    std::uint64_t next_u64();
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    double uniform(double low, double high);
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);
    /// Standard normal via Box-Muller; the second variate of each pair is kept.
    double normal();
    double normal(double mean, double sd) { return mean + sd * normal(); }

private:
    void refill();

    Philox4x32::Key key_{};
    std::uint64_t stream_ = 0;
    std::uint64_t block_index_ = 0;
    Philox4x32::Counter buffer_{};
    int used_ = 4;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

/// Mixes several integers into one 64-bit seed (splitmix64 finaliser chain).
/// Used to give every (design, method, repetition) run its own seed.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c = 0,
                       std::uint64_t d = 0);

}  // namespace morpho
