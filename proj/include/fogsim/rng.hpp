#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace fogsim
{
    /// splitmix64 finalizer; used to derive independent stream seeds.
    constexpr std::uint64_t mix64(std::uint64_t x) noexcept
    {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index = 0) noexcept
    {
        return mix64(mix64(mix64(base) ^ stream) ^ index);
    }

    /// Seeded generator with platform-independent variates.
    ///
    /// std::uniform_*_distribution output is implementation-defined, so the
    /// conversions from raw engine bits are done here to keep runs
    /// byte-identical across standard libraries.
    class Rng
    {
    public:
        explicit Rng(std::uint64_t seed) : engine_(seed) {}

        /// Uniform on [0, 1).
        double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

        /// Uniform on [lo, hi).
        double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

        /// Uniform integer on [0, n); n must be > 0.
        std::uint64_t below(std::uint64_t n)
        {
            const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                        std::numeric_limits<std::uint64_t>::max() % n;
            std::uint64_t x;
            do
            {
                x = engine_();
            } while (x >= limit);
            return x % n;
        }

    private:
        std::mt19937_64 engine_;
    };

} // namespace fogsim
