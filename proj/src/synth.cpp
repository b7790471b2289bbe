#include "uqseg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "uqseg/core.hpp"
#include "uqseg/rng.hpp"

namespace uqseg::synth {

namespace {

constexpr double kGlobalGain = 3.0;
constexpr double kBoundaryGain = 60.0;
constexpr long kBlurRadius = 3;

// Separable box blur (window 2*radius+1) with clamp-to-edge, run `passes`
// times. Box kernels keep the generator free of transcendental functions.
void box_blur(std::vector<double>& v, std::size_t height, std::size_t width, int passes) {
    std::vector<double> tmp(v.size());
    const double inv = 1.0 / static_cast<double>(2 * kBlurRadius + 1);
    for (int pass = 0; pass < passes; ++pass) {
        for (std::size_t r = 0; r < height; ++r) {
            for (std::size_t c = 0; c < width; ++c) {
                double acc = 0.0;
                for (long k = -kBlurRadius; k <= kBlurRadius; ++k) {
                    const long cc = std::clamp<long>(static_cast<long>(c) + k, 0,
                                                     static_cast<long>(width) - 1);
                    acc += v[r * width + static_cast<std::size_t>(cc)];
                }
                tmp[r * width + c] = acc * inv;
            }
        }
        for (std::size_t r = 0; r < height; ++r) {
            for (std::size_t c = 0; c < width; ++c) {
                double acc = 0.0;
                for (long k = -kBlurRadius; k <= kBlurRadius; ++k) {
                    const long rr = std::clamp<long>(static_cast<long>(r) + k, 0,
                                                     static_cast<long>(height) - 1);
                    acc += tmp[static_cast<std::size_t>(rr) * width + c];
                }
                v[r * width + c] = acc * inv;
            }
        }
    }
}

// Boundary weight: local contrast of the base map, widened by blurring and
// scaled to peak 1. Nonzero only around the segmentation boundary, also for
// a binary base.
std::vector<double> boundary_weight(const core::ProbabilityMap& base) {
    const std::size_t height = base.height();
    const std::size_t width = base.width();
    std::vector<double> w(base.pixel_count(), 0.0);
    for (std::size_t r = 0; r < height; ++r) {
        for (std::size_t c = 0; c < width; ++c) {
            const double v0 = base(r, c);
            double contrast = 0.0;
            if (r > 0) contrast = std::max(contrast, std::abs(base(r - 1, c) - v0));
            if (r + 1 < height) contrast = std::max(contrast, std::abs(base(r + 1, c) - v0));
            if (c > 0) contrast = std::max(contrast, std::abs(base(r, c - 1) - v0));
            if (c + 1 < width) contrast = std::max(contrast, std::abs(base(r, c + 1) - v0));
            w[r * width + c] = contrast;
        }
    }
    box_blur(w, height, width, 2);
    const double peak = *std::max_element(w.begin(), w.end());
    if (peak > 0.0)
        for (double& x : w) x /= peak;
    return w;
}

void fill_noise(std::vector<double>& v, std::mt19937_64& gen) {
    for (double& x : v) x = uniform_in(gen, -1.0, 1.0);
}

}  // namespace

Phantom generate_phantom(const PhantomSpec& spec) {
    if (spec.height == 0 || spec.width == 0)
        throw std::invalid_argument("phantom: dimensions must be positive");
    if (!(spec.semi_axis_x > 0.0 && spec.semi_axis_y > 0.0))
        throw std::invalid_argument("phantom: semi-axes must be positive");
    if (!(spec.boundary_softness >= 0.0))
        throw std::invalid_argument("phantom: boundary softness must be >= 0");
    if (!(spec.severity >= 0.0 && spec.severity <= 1.0))
        throw std::invalid_argument("phantom: severity must be in [0,1]");
    const double max_x = static_cast<double>(spec.width) - 1.0;
    const double max_y = static_cast<double>(spec.height) - 1.0;
    if (!(spec.center_x - spec.semi_axis_x >= 2.0 && spec.center_x + spec.semi_axis_x <= max_x - 2.0 &&
          spec.center_y - spec.semi_axis_y >= 2.0 && spec.center_y + spec.semi_axis_y <= max_y - 2.0))
        throw std::invalid_argument("phantom: ellipse must fit inside the image with a 2 px margin");

    const std::size_t n = spec.height * spec.width;
    std::vector<std::uint8_t> gt(n);
    std::vector<double> base(n);
    const double ramp_width = spec.boundary_softness;
    const double scale = std::min(spec.semi_axis_x, spec.semi_axis_y);
    for (std::size_t r = 0; r < spec.height; ++r) {
        for (std::size_t c = 0; c < spec.width; ++c) {
            const double qx = (static_cast<double>(c) - spec.center_x) / spec.semi_axis_x;
            const double qy = (static_cast<double>(r) - spec.center_y) / spec.semi_axis_y;
            const double q = qx * qx + qy * qy;
            const bool inside = q <= 1.0;
            gt[r * spec.width + c] = inside ? 1 : 0;
            if (ramp_width == 0.0) {
                base[r * spec.width + c] = inside ? 1.0 : 0.0;
            } else {
                // Signed boundary distance proxy: negative inside, in pixels.
                const double d = (std::sqrt(q) - 1.0) * scale;
                base[r * spec.width + c] = 1.0 / (1.0 + std::exp(d / ramp_width));
            }
        }
    }
    return Phantom{core::BinaryMask(spec.height, spec.width, std::move(gt)),
                   core::ProbabilityMap(spec.height, spec.width, std::move(base))};
}

core::SampleStack perturb_stack(const core::ProbabilityMap& base, std::size_t t_count,
                                double severity, std::uint64_t seed) {
    if (t_count == 0)
        throw std::invalid_argument("perturb_stack: need at least one sample");
    if (!(severity >= 0.0 && severity <= 1.0))
        throw std::invalid_argument("perturb_stack: severity must be in [0,1]");

    std::vector<core::ProbabilityMap> samples;
    samples.reserve(t_count);
    if (severity == 0.0) {
        for (std::size_t t = 0; t < t_count; ++t) samples.push_back(base);
        return core::SampleStack(std::move(samples));
    }

    const std::size_t height = base.height();
    const std::size_t width = base.width();
    const std::size_t n = base.pixel_count();
    const std::vector<double> bw = boundary_weight(base);
    std::vector<double> global_field(n);
    std::vector<double> boundary_field(n);
    for (std::size_t t = 0; t < t_count; ++t) {
        std::mt19937_64 gen(derive_seed(seed, t));
        fill_noise(global_field, gen);
        fill_noise(boundary_field, gen);
        box_blur(global_field, height, width, 2);
        box_blur(boundary_field, height, width, 2);
        std::vector<double> values(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double shift = severity * (kGlobalGain * global_field[i] +
                                             kBoundaryGain * boundary_field[i] * bw[i]);
            values[i] = std::clamp(base.at(i) + shift, 0.0, 1.0);
        }
        samples.emplace_back(height, width, std::move(values));
    }
    return core::SampleStack(std::move(samples));
}

std::string cohort_image_id(std::size_t index, std::size_t n_images) {
    std::size_t digits = 3;
    for (std::size_t v = n_images > 0 ? n_images - 1 : 0; v >= 1000; v /= 10) ++digits;
    std::string number = std::to_string(index);
    if (number.size() < digits) number.insert(0, digits - number.size(), '0');
    return "img_" + number;
}

CohortImage generate_cohort_image(const CohortConfig& config, std::size_t index) {
    if (config.n_images < 2)
        throw std::invalid_argument("cohort: need at least 2 images");
    if (index >= config.n_images)
        throw std::invalid_argument("cohort: image index out of range");
    if (!(config.severity_lo >= 0.0 && config.severity_lo <= config.severity_hi &&
          config.severity_hi <= 1.0))
        throw std::invalid_argument("cohort: severity range must satisfy 0 <= lo <= hi <= 1");
    if (config.samples == 0)
        throw std::invalid_argument("cohort: need at least one sample per image");
    if (config.height < 32 || config.width < 32)
        throw std::invalid_argument("cohort: image size must be at least 32x32");

    const double step = static_cast<double>(index) / static_cast<double>(config.n_images - 1);
    const double severity = config.severity_lo + (config.severity_hi - config.severity_lo) * step;

    const std::uint64_t image_seed = derive_seed(config.seed, index);
    std::mt19937_64 geometry(derive_seed(image_seed, 1));

    PhantomSpec spec;
    spec.height = config.height;
    spec.width = config.width;
    const double w = static_cast<double>(config.width);
    const double h = static_cast<double>(config.height);
    const double jitter = 0.05 * std::min(w, h);
    spec.center_x = (w - 1.0) / 2.0 + uniform_in(geometry, -jitter, jitter);
    spec.center_y = (h - 1.0) / 2.0 + uniform_in(geometry, -jitter, jitter);
    spec.semi_axis_x = uniform_in(geometry, 0.18, 0.26) * w;
    spec.semi_axis_y = uniform_in(geometry, 0.12, 0.19) * h;
    // Binary base: a pristine image carries exactly zero uncertainty under
    // every metric, entropy included.
    spec.boundary_softness = 0.0;
    spec.severity = severity;
    spec.seed = image_seed;

    Phantom phantom = generate_phantom(spec);
    core::SampleStack stack =
        perturb_stack(phantom.base, config.samples, severity, derive_seed(image_seed, 2));
    core::BinaryMask reference = core::threshold(stack.sample(0), 0.5);
    return CohortImage{cohort_image_id(index, config.n_images), severity, std::move(phantom.gt),
                       std::move(reference), std::move(stack)};
}

std::vector<CohortImage> generate_cohort(std::size_t n_images, double severity_lo,
                                         double severity_hi, std::uint64_t seed) {
    CohortConfig config;
    config.n_images = n_images;
    config.severity_lo = severity_lo;
    config.severity_hi = severity_hi;
    config.seed = seed;
    std::vector<CohortImage> cohort;
    cohort.reserve(n_images);
    for (std::size_t i = 0; i < n_images; ++i) cohort.push_back(generate_cohort_image(config, i));
    return cohort;
}

}  // namespace uqseg::synth
