#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

// Random helpers built on std::mt19937_64 (whose output sequence is fixed by
// the standard) with hand-rolled value mappings, because the std::*_distribution
// classes are allowed to differ between standard libraries.

namespace uqseg {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Seed for stream `stream` under `master`; distinct streams stay decorrelated
// even for adjacent indices.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t s = master + 0x9e3779b97f4a7c15ull * (stream + 1);
    return splitmix64(s);
}

// Uniform double in [0, 1) using the top 53 bits.
inline double unit_double(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1p-53;
}

inline double uniform_in(std::mt19937_64& gen, double lo, double hi) {
    return lo + (hi - lo) * unit_double(gen);
}

inline bool coin(std::mt19937_64& gen) {
    return (gen() >> 63) != 0;
}

// Standard normal samples via Box-Muller; pairs are generated together so
// consumption order is reproducible.
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : gen_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = unit_double(gen_);
        while (u1 == 0.0) u1 = unit_double(gen_);
        const double u2 = unit_double(gen_);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(angle);
        have_spare_ = true;
        return r * std::cos(angle);
    }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace uqseg
