#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace fusim {

// splitmix64 finalizer, used for seed derivation and mixing.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Derives an independent stream seed from (seed, index). Used so that
/// per-sample simulation seeds do not depend on worker count or ordering.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(seed ^ splitmix64(index * 0xD6E8FEB86659FD93ull + 0xA5A5A5A5A5A5A5A5ull));
}

/// Deterministic random source. The engine sequence is fixed by the
/// standard; all value transforms below are hand-rolled so that draws are
/// bit-identical across standard library implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform index in [0, n). n must be > 0.
    std::size_t index(std::size_t n) {
        return static_cast<std::size_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    /// Standard normal via Box-Muller (cached second value).
    double normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        // 1 - u keeps the log argument in (0, 1].
        const double u1 = 1.0 - uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.14159265358979323846 * u2;
        cached_ = r * std::sin(a);
        has_cached_ = true;
        return r * std::cos(a);
    }

    /// Poisson draw with the exact distribution for any mean >= 0.
    /// Large means are split into chunks (sums of independent Poissons
    /// are Poisson) to keep exp(-mean) away from underflow.
    std::uint64_t poisson(double mean) {
        std::uint64_t k = 0;
        while (mean > 500.0) {
            k += poisson_knuth(500.0);
            mean -= 500.0;
        }
        return k + poisson_knuth(mean);
    }

  private:
    std::uint64_t poisson_knuth(double mean) {
        if (mean <= 0.0) return 0;
        const double limit = std::exp(-mean);
        std::uint64_t k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform01();
        } while (p > limit);
        return k - 1;
    }

    std::mt19937_64 eng_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

/// FNV-1a 64-bit hash; used for payload checksums and reproducibility checks.
inline std::uint64_t fnv1a64(const unsigned char* data, std::size_t n,
                             std::uint64_t h = 14695981039346656037ull) {
    for (std::size_t i = 0; i < n; ++i) {
        h ^= data[i];
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace fusim
