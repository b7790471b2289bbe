#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "oracle.hpp"
#include "uqseg/metrics.hpp"
#include "uqseg/tta.hpp"

using namespace uqseg;

namespace {

// Smooth analytic test pattern: a Gaussian bump centered in the frame, so
// rotation's zero-fill corners land where the signal is already near zero.
tta::InputImage gaussian_blob(std::size_t size, double sigma) {
    std::vector<double> values(size * size);
    const double c = (static_cast<double>(size) - 1.0) / 2.0;
    for (std::size_t r = 0; r < size; ++r) {
        for (std::size_t col = 0; col < size; ++col) {
            const double dr = static_cast<double>(r) - c;
            const double dc = static_cast<double>(col) - c;
            values[r * size + col] = std::exp(-(dr * dr + dc * dc) / (2.0 * sigma * sigma));
        }
    }
    return tta::InputImage(size, size, std::move(values));
}

core::ProbabilityMap as_probability(const tta::InputImage& img) {
    std::vector<double> values(img.values().begin(), img.values().end());
    for (double& v : values) v = std::clamp(v, 0.0, 1.0);
    return core::ProbabilityMap(img.height(), img.width(), std::move(values));
}

}  // namespace

TEST_CASE("transform sampling is deterministic and identity-first") {
    const std::vector<tta::TransformSpec> a = tta::sample_transforms(20, 99);
    const std::vector<tta::TransformSpec> b = tta::sample_transforms(20, 99);
    REQUIRE(a.size() == 20);
    CHECK(a[0].rotation_deg == 0.0);
    CHECK(a[0].hflip == false);
    CHECK(a[0].noise_sigma == 0.0);
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].rotation_deg == b[k].rotation_deg);
        CHECK(a[k].hflip == b[k].hflip);
        CHECK(a[k].noise_sigma == b[k].noise_sigma);
        CHECK(a[k].noise_seed == b[k].noise_seed);
    }

    const std::vector<tta::TransformSpec> other = tta::sample_transforms(20, 100);
    bool any_difference = false;
    for (std::size_t k = 1; k < a.size(); ++k)
        any_difference = any_difference || a[k].rotation_deg != other[k].rotation_deg;
    CHECK(any_difference);
}

TEST_CASE("sampled rotations stay in bounds and look uniform; flips look fair") {
    tta::AugmentConfig config;
    config.max_rotation_deg = 20.0;
    const std::size_t count = 10001;
    const std::vector<tta::TransformSpec> specs = tta::sample_transforms(count, 4242, config);
    double rotation_sum = 0.0;
    std::size_t flips = 0;
    for (std::size_t k = 1; k < specs.size(); ++k) {
        CHECK(std::abs(specs[k].rotation_deg) <= 20.0);
        rotation_sum += specs[k].rotation_deg;
        flips += specs[k].hflip ? 1 : 0;
    }
    const double n = static_cast<double>(count - 1);
    CHECK(std::abs(rotation_sum / n) < 0.5);
    CHECK(std::abs(static_cast<double>(flips) / n - 0.5) < 0.02);
}

TEST_CASE("transform sampling rejects bad configuration") {
    CHECK_THROWS_AS(tta::sample_transforms(0, 1), std::invalid_argument);
    tta::AugmentConfig too_far;
    too_far.max_rotation_deg = 25.0;
    CHECK_THROWS_AS(tta::sample_transforms(3, 1, too_far), std::invalid_argument);
    tta::AugmentConfig negative_noise;
    negative_noise.noise_sigma = -0.1;
    CHECK_THROWS_AS(tta::sample_transforms(3, 1, negative_noise), std::invalid_argument);
}

TEST_CASE("identity transform returns a bit-identical image") {
    const tta::InputImage img = gaussian_blob(32, 6.0);
    const tta::InputImage out = tta::apply_transform(img, tta::TransformSpec{});
    for (std::size_t i = 0; i < img.pixel_count(); ++i) CHECK(out.at(i) == img.at(i));
}

TEST_CASE("horizontal flip is an exact involution") {
    const tta::InputImage img = gaussian_blob(17, 4.0);  // odd width too
    tta::TransformSpec flip;
    flip.hflip = true;
    const tta::InputImage once = tta::apply_transform(img, flip);
    CHECK(once(3, 0) == img(3, 16));
    const tta::InputImage twice = tta::apply_transform(once, flip);
    for (std::size_t i = 0; i < img.pixel_count(); ++i) CHECK(twice.at(i) == img.at(i));
}

TEST_CASE("flip inversion recovers the prediction exactly") {
    std::mt19937_64 gen(55);
    std::vector<double> values(24 * 24);
    for (auto& v : values) v = static_cast<double>(gen() >> 11) * 0x1p-53;
    const core::ProbabilityMap pred(24, 24, values);

    tta::TransformSpec flip;
    flip.hflip = true;
    // The model's prediction on a flipped input is the flipped prediction.
    std::vector<double> flipped(24 * 24);
    for (std::size_t r = 0; r < 24; ++r)
        for (std::size_t c = 0; c < 24; ++c) flipped[r * 24 + c] = values[r * 24 + (23 - c)];
    const core::ProbabilityMap recovered =
        tta::invert_prediction(core::ProbabilityMap(24, 24, flipped), flip);
    for (std::size_t i = 0; i < pred.pixel_count(); ++i) CHECK(recovered.at(i) == pred.at(i));
}

TEST_CASE("rotation round-trip error is small on interior pixels") {
    const std::size_t size = 128;
    const tta::InputImage blob = gaussian_blob(size, 14.0);
    for (const double degrees : {-20.0, -7.5, 3.25, 12.0, 20.0}) {
        tta::TransformSpec spec;
        spec.rotation_deg = degrees;
        const tta::InputImage rotated = tta::apply_transform(blob, spec);
        const core::ProbabilityMap recovered =
            tta::invert_prediction(as_probability(rotated), spec);
        double abs_err = 0.0;
        std::size_t counted = 0;
        const std::size_t margin = 8;
        for (std::size_t r = margin; r < size - margin; ++r) {
            for (std::size_t c = margin; c < size - margin; ++c) {
                abs_err += std::abs(recovered(r, c) - blob(r, c));
                ++counted;
            }
        }
        CHECK(abs_err / static_cast<double>(counted) < 0.02);
    }
}

TEST_CASE("noise is reproducible from its seed and actually perturbs") {
    const tta::InputImage img = gaussian_blob(16, 4.0);
    tta::TransformSpec noisy;
    noisy.noise_sigma = 0.05;
    noisy.noise_seed = 777;
    const tta::InputImage a = tta::apply_transform(img, noisy);
    const tta::InputImage b = tta::apply_transform(img, noisy);
    bool any_change = false;
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        CHECK(a.at(i) == b.at(i));
        any_change = any_change || a.at(i) != img.at(i);
    }
    CHECK(any_change);

    tta::TransformSpec reseeded = noisy;
    reseeded.noise_seed = 778;
    const tta::InputImage c = tta::apply_transform(img, reseeded);
    bool differs = false;
    for (std::size_t i = 0; i < img.pixel_count(); ++i) differs = differs || a.at(i) != c.at(i);
    CHECK(differs);
}

TEST_CASE("apply_transform rejects out-of-contract specs") {
    const tta::InputImage img = gaussian_blob(8, 2.0);
    tta::TransformSpec too_far;
    too_far.rotation_deg = 25.0;
    CHECK_THROWS_AS(tta::apply_transform(img, too_far), std::invalid_argument);
    tta::TransformSpec negative_noise;
    negative_noise.noise_sigma = -1.0;
    CHECK_THROWS_AS(tta::apply_transform(img, negative_noise), std::invalid_argument);
}

TEST_CASE("assembled stacks align predictions back to a common frame") {
    const tta::InputImage blob = gaussian_blob(32, 7.0);
    const core::ProbabilityMap pred = as_probability(blob);

    tta::TransformSpec identity;
    tta::TransformSpec flip;
    flip.hflip = true;
    std::vector<double> flipped(32 * 32);
    for (std::size_t r = 0; r < 32; ++r)
        for (std::size_t c = 0; c < 32; ++c) flipped[r * 32 + c] = pred(r, 31 - c);

    const core::SampleStack stack = tta::assemble_stack(
        {{pred, identity}, {core::ProbabilityMap(32, 32, flipped), flip}});
    REQUIRE(stack.sample_count() == 2);
    // Both inverse-aligned samples equal the original prediction, so the
    // ensemble has no disagreement anywhere.
    const core::UncertaintyMap variance = metrics::pixel_variance(stack);
    for (std::size_t i = 0; i < variance.pixel_count(); ++i) CHECK(variance.at(i) == 0.0);
}

TEST_CASE("assemble_stack validates its inputs") {
    CHECK_THROWS_AS(tta::assemble_stack({}), std::invalid_argument);
    const core::ProbabilityMap small(2, 2, 0.5);
    const core::ProbabilityMap big(3, 3, 0.5);
    CHECK_THROWS_AS(
        tta::assemble_stack({{small, tta::TransformSpec{}}, {big, tta::TransformSpec{}}}),
        std::invalid_argument);
}

TEST_CASE("input image requires finite values") {
    CHECK_NOTHROW(tta::InputImage(1, 2, {-3.0, 4.5}));  // out of [0,1] is fine here
    CHECK_THROWS_AS(tta::InputImage(1, 1, {std::nan("")}), std::invalid_argument);
    CHECK_THROWS_AS(tta::InputImage(1, 1, {std::numeric_limits<double>::infinity()}),
                    std::invalid_argument);
}
