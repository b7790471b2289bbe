#include "uqseg/metrics.hpp"

#include <algorithm>
#include <stdexcept>

#include "uqseg/core.hpp"

namespace uqseg::metrics {

namespace {

constexpr double kNegativeTolerance = 1e-12;

// Mean across samples at pixel i. When all samples agree the mean is that
// exact value, so the degenerate pixel survives rounding bit-for-bit.
double sample_mean_at(const core::SampleStack& stack, std::size_t i) {
    const std::size_t t_count = stack.sample_count();
    double lo = stack.sample(0).at(i);
    double hi = lo;
    double sum = lo;
    for (std::size_t t = 1; t < t_count; ++t) {
        const double v = stack.sample(t).at(i);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        sum += v;
    }
    if (lo == hi) return lo;
    return sum / static_cast<double>(t_count);
}

}  // namespace

core::UncertaintyMap pixel_variance(const core::SampleStack& stack) {
    const std::size_t n = stack.pixel_count();
    const std::size_t t_count = stack.sample_count();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double lo = stack.sample(0).at(i);
        double hi = lo;
        double sum = lo;
        for (std::size_t t = 1; t < t_count; ++t) {
            const double v = stack.sample(t).at(i);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            sum += v;
        }
        if (lo == hi) {
            out[i] = 0.0;
            continue;
        }
        const double mean = sum / static_cast<double>(t_count);
        double acc = 0.0;
        for (std::size_t t = 0; t < t_count; ++t) {
            const double d = stack.sample(t).at(i) - mean;
            acc += d * d;
        }
        out[i] = acc / static_cast<double>(t_count);
    }
    return core::UncertaintyMap(stack.height(), stack.width(), std::move(out));
}

core::ProbabilityMap build_atlas(const core::SampleStack& stack) {
    const std::size_t n = stack.pixel_count();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = sample_mean_at(stack, i);
    return core::ProbabilityMap(stack.height(), stack.width(), std::move(out));
}

core::UncertaintyMap predictive_entropy(const core::SampleStack& stack) {
    const core::ProbabilityMap atlas = build_atlas(stack);
    std::vector<double> out(atlas.pixel_count());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = core::binary_entropy(atlas.at(i));
    return core::UncertaintyMap(stack.height(), stack.width(), std::move(out));
}

core::UncertaintyMap mutual_information(const core::SampleStack& stack) {
    const std::size_t n = stack.pixel_count();
    const std::size_t t_count = stack.sample_count();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double lo = stack.sample(0).at(i);
        double hi = lo;
        double sum = lo;
        for (std::size_t t = 1; t < t_count; ++t) {
            const double v = stack.sample(t).at(i);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            sum += v;
        }
        if (lo == hi) {
            out[i] = 0.0;  // identical samples carry no disagreement
            continue;
        }
        const double mean = sum / static_cast<double>(t_count);
        double entropy_sum = 0.0;
        for (std::size_t t = 0; t < t_count; ++t)
            entropy_sum += core::binary_entropy(stack.sample(t).at(i));
        double mi = core::binary_entropy(mean) - entropy_sum / static_cast<double>(t_count);
        if (mi < 0.0 && mi >= -kNegativeTolerance) mi = 0.0;
        out[i] = mi;
    }
    return core::UncertaintyMap(stack.height(), stack.width(), std::move(out));
}

AtlasScore atlas_score(const core::SampleStack& stack, const core::BinaryMask& reference,
                       double h) {
    if (!core::same_shape(stack, reference))
        throw std::invalid_argument("atlas_score: reference dimensions do not match stack");
    const core::BinaryMask thresholded = core::threshold(build_atlas(stack), h);
    AtlasScore score;
    score.threshold = h;
    score.dsc_h = core::dsc(thresholded, reference);
    score.uncertainty = 1.0 - score.dsc_h;
    return score;
}

}  // namespace uqseg::metrics
