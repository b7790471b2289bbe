#include "uqseg/core.hpp"

#include <cmath>
#include <stdexcept>

namespace uqseg::core {

BinaryMask threshold(const ProbabilityMap& map, double h) {
    if (!(h >= 0.0 && h <= 1.0))
        throw std::invalid_argument("threshold: h must be in [0,1]");
    std::vector<std::uint8_t> out(map.pixel_count());
    const auto values = map.values();
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = values[i] >= h ? 1 : 0;
    return BinaryMask(map.height(), map.width(), std::move(out));
}

double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::domain_error("binary_entropy: p must be in [0,1]");
    const double a = p == 0.0 ? 0.0 : -p * std::log(p);
    const double q = 1.0 - p;
    const double b = q == 0.0 ? 0.0 : -q * std::log(q);
    return a + b;
}

double dsc(const BinaryMask& a, const BinaryMask& b) {
    if (!same_shape(a, b))
        throw std::invalid_argument("dsc: mask dimensions differ");
    std::size_t sum_a = 0;
    std::size_t sum_b = 0;
    std::size_t both = 0;
    const auto va = a.values();
    const auto vb = b.values();
    for (std::size_t i = 0; i < va.size(); ++i) {
        sum_a += va[i];
        sum_b += vb[i];
        both += va[i] & vb[i];
    }
    if (sum_a + sum_b == 0) return 1.0;  // agreement on absence
    return 2.0 * static_cast<double>(both) / static_cast<double>(sum_a + sum_b);
}

}  // namespace uqseg::core
