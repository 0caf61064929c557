#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace spca {

/// Seedable random stream with platform-independent output.
///
/// The engine is std::mt19937_64, whose sequence is pinned by the C++
/// standard. Uniform doubles take the top 53 bits of each draw and
/// normals come from a hand-rolled Box-Muller transform, so the same
/// seed reproduces the same instances on every platform; the
/// distribution adapters in <random> give no such guarantee.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller; one spare value is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        spare_ = mag * std::sin(2.0 * kPi * u2);
        has_spare_ = true;
        return mag * std::cos(2.0 * kPi * u2);
    }

    /// Distinct indices drawn from [0, p), partial Fisher-Yates.
    std::vector<int> sample_indices(int p, int s) {
        std::vector<int> pool(p);
        for (int i = 0; i < p; ++i) pool[i] = i;
        for (int i = 0; i < s; ++i) {
            const int j = i + index_below(p - i);
            std::swap(pool[i], pool[j]);
        }
        pool.resize(s);
        return pool;
    }

    /// Uniform integer in [0, n) by rejection on the raw 64-bit stream.
    int index_below(int n) {
        const std::uint64_t bound = UINT64_MAX - UINT64_MAX % static_cast<std::uint64_t>(n);
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= bound);
        return static_cast<int>(x % static_cast<std::uint64_t>(n));
    }

private:
    static constexpr double kPi = 3.14159265358979323846;
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace spca
