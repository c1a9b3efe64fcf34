#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace geofl {

/// 64-bit avalanche mix (splitmix64 finalizer).
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Combines a seed with a stream key into a new seed. Derived streams depend
/// only on (seed, key), never on how much of the parent stream was consumed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t key) {
    return mix64(seed ^ mix64(key));
}

/// Seedable, splittable random source.
///
/// The engine is std::mt19937_64, whose raw output is pinned down by the
/// standard. Standard-library *distributions* are not, so the draws below are
/// implemented directly to keep results bit-identical across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    /// Independent child stream addressed by key; stable regardless of how
    /// many values the parent has produced.
    Rng derive(std::uint64_t key) const { return Rng(mix_seed(seed_, key)); }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    /// Unbiased uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("Rng::below: empty range");
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

    /// Poisson draw by chunked multiplicative inversion; exact for any mean
    /// (a Poisson(m) variable is a sum of independent smaller-mean ones).
    long poisson(double mean) {
        if (mean < 0 || !std::isfinite(mean)) throw std::invalid_argument("Rng::poisson: bad mean");
        long total = 0;
        double remaining = mean;
        while (remaining > 0) {
            const double chunk = remaining > 16.0 ? 16.0 : remaining;
            remaining -= chunk;
            const double limit = std::exp(-chunk);
            long count = -1;
            double prod = 1.0;
            do {
                prod *= next_unit();
                ++count;
            } while (prod > limit);
            total += count;
        }
        return total;
    }

    /// Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

} // namespace geofl
