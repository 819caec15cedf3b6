#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace modelavg {

/// SplitMix64 finalizer; used to turn structured keys into well-mixed seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Deterministic random stream keyed by a 64-bit value.
///
/// Child streams are derived from the key alone (never from the engine
/// state), so `split(i)` yields the same stream no matter how many draws the
/// parent has made or which thread asks for it. This is what makes every
/// Monte Carlo result independent of the worker schedule.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t key);

    /// Stream keyed by `seed` followed by a path of indices.
    static RandomStream derive(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

    RandomStream split(std::uint64_t index) const;
    RandomStream split(std::initializer_list<std::uint64_t> path) const;

    std::uint64_t key() const noexcept { return key_; }

    double normal();
    /// Uniform on the open interval (lo, hi).
    double uniform(double lo, double hi);
    /// Uniform index in {0, ..., n-1}; n must be positive.
    std::size_t index(std::size_t n);

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::uint64_t key_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace modelavg
