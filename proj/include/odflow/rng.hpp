#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace odflow {

// splitmix64 (Steele, Lea, Flood 2014). Used to derive independent stream
// seeds from a master seed; the constants are part of the file contract,
// do not change them or archived runs stop reproducing.
inline std::uint64_t splitmix64(std::uint64_t state) {
    std::uint64_t z = state + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Seedable generator with fully specified output. The core is std::mt19937_64
// (its sequence is pinned by the C++ standard); all real-valued draws below
// are built from raw 64-bit words instead of std::*_distribution, whose
// output is implementation-defined.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Derived stream: same master seed + same salt -> same stream anywhere.
    static Rng derive(std::uint64_t master, std::uint64_t salt) {
        return Rng(splitmix64(master ^ splitmix64(salt)));
    }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1): 53 random mantissa bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform integer in [0, n), n >= 1. Rejection sampling keeps it unbiased.
    std::uint64_t uniform_int(std::uint64_t n) {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t draw;
        do {
            draw = next_u64();
        } while (draw >= limit);
        return draw % n;
    }

    double exponential() { return -std::log1p(-uniform01()); }

    // Uniform point on the probability simplex of dimension n
    // (normalized i.i.d. exponentials).
    std::vector<double> simplex(std::size_t n) {
        std::vector<double> w(n);
        double total = 0.0;
        for (auto& v : w) {
            v = exponential();
            total += v;
        }
        // An all-zero draw has probability zero; guard anyway.
        if (total <= 0.0) {
            for (auto& v : w) v = 1.0;
            total = static_cast<double>(n);
        }
        for (auto& v : w) v /= total;
        return w;
    }

    // k distinct values from [0, n), in draw order.
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k) {
        std::vector<std::size_t> pool(n);
        for (std::size_t i = 0; i < n; ++i) pool[i] = i;
        std::vector<std::size_t> out;
        out.reserve(k);
        for (std::size_t i = 0; i < k && i < n; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(uniform_int(n - i));
            std::swap(pool[i], pool[j]);
            out.push_back(pool[i]);
        }
        return out;
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace odflow
