#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "oracle.hpp"
#include "uqseg/core.hpp"
#include "uqseg/metrics.hpp"

using namespace uqseg;

namespace {

core::SampleStack stack_1px(const std::vector<double>& samples) {
    std::vector<core::ProbabilityMap> maps;
    maps.reserve(samples.size());
    for (const double v : samples) maps.emplace_back(1, 1, std::vector<double>{v});
    return core::SampleStack(std::move(maps));
}

core::SampleStack random_stack(std::mt19937_64& gen, std::size_t t, std::size_t h, std::size_t w) {
    std::vector<core::ProbabilityMap> maps;
    for (std::size_t k = 0; k < t; ++k) {
        std::vector<double> values(h * w);
        for (auto& v : values) v = static_cast<double>(gen() >> 11) * 0x1p-53;
        maps.emplace_back(h, w, std::move(values));
    }
    return core::SampleStack(std::move(maps));
}

std::vector<double> pixel_samples(const core::SampleStack& stack, std::size_t i) {
    std::vector<double> xs;
    xs.reserve(stack.sample_count());
    for (std::size_t t = 0; t < stack.sample_count(); ++t) xs.push_back(stack.sample(t).at(i));
    return xs;
}

}  // namespace

TEST_CASE("pixel variance on hand-checked sample sets") {
    CHECK(metrics::pixel_variance(stack_1px({0.0, 1.0})).at(0) == 0.25);
    CHECK(metrics::pixel_variance(stack_1px({0.2, 0.4, 0.6})).at(0) ==
          doctest::Approx(0.08 / 3.0).epsilon(1e-12));
    CHECK(metrics::pixel_variance(stack_1px({0.7})).at(0) == 0.0);
}

TEST_CASE("atlas is the per-pixel sample mean") {
    CHECK(metrics::build_atlas(stack_1px({0.2, 0.6})).at(0) == doctest::Approx(0.4).epsilon(1e-15));
    // Agreeing samples short-circuit to the shared value, bit for bit.
    CHECK(metrics::build_atlas(stack_1px({0.3, 0.3, 0.3})).at(0) == 0.3);
}

TEST_CASE("predictive entropy is binary entropy of the atlas, bitwise") {
    std::mt19937_64 gen(5);
    const core::SampleStack stack = random_stack(gen, 4, 3, 5);
    const core::ProbabilityMap atlas = metrics::build_atlas(stack);
    const core::UncertaintyMap entropy = metrics::predictive_entropy(stack);
    for (std::size_t i = 0; i < atlas.pixel_count(); ++i)
        CHECK(entropy.at(i) == core::binary_entropy(atlas.at(i)));
}

TEST_CASE("mutual information on hand-checked sample sets") {
    CHECK(std::abs(metrics::mutual_information(stack_1px({0.0, 1.0})).at(0) -
                   std::numbers::ln2) < 1e-12);
    // H(0.4) - (H(0.2) + H(0.6)) / 2, frozen from the long double oracle.
    CHECK(std::abs(metrics::mutual_information(stack_1px({0.2, 0.6})).at(0) -
                   0.0863046217355343) < 1e-12);
}

TEST_CASE("agreeing samples give exactly zero variance and mutual information") {
    const core::ProbabilityMap map(2, 2, {0.3, 0.0, 1.0, 0.74});
    const core::SampleStack stack({map, map, map});
    const core::UncertaintyMap var = metrics::pixel_variance(stack);
    const core::UncertaintyMap mi = metrics::mutual_information(stack);
    for (std::size_t i = 0; i < map.pixel_count(); ++i) {
        CHECK(var.at(i) == 0.0);
        CHECK(mi.at(i) == 0.0);
    }
    const core::UncertaintyMap entropy = metrics::predictive_entropy(stack);
    for (std::size_t i = 0; i < map.pixel_count(); ++i)
        CHECK(entropy.at(i) == core::binary_entropy(map.at(i)));
}

TEST_CASE("metric maps are invariant under sample permutation") {
    std::mt19937_64 gen(17);
    const core::SampleStack stack = random_stack(gen, 5, 4, 4);
    std::vector<core::ProbabilityMap> reordered{stack.sample(3), stack.sample(0), stack.sample(4),
                                                stack.sample(2), stack.sample(1)};
    const core::SampleStack shuffled(std::move(reordered));
    const core::UncertaintyMap v1 = metrics::pixel_variance(stack);
    const core::UncertaintyMap v2 = metrics::pixel_variance(shuffled);
    const core::UncertaintyMap m1 = metrics::mutual_information(stack);
    const core::UncertaintyMap m2 = metrics::mutual_information(shuffled);
    for (std::size_t i = 0; i < v1.pixel_count(); ++i) {
        CHECK(std::abs(v1.at(i) - v2.at(i)) < 1e-12);
        CHECK(std::abs(m1.at(i) - m2.at(i)) < 1e-12);
    }
}

TEST_CASE("metric maps match the brute-force oracle on random stacks") {
    std::mt19937_64 gen(23);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t t = 1 + gen() % 5;
        const core::SampleStack stack = random_stack(gen, t, 4, 4);
        const core::UncertaintyMap var = metrics::pixel_variance(stack);
        const core::UncertaintyMap ent = metrics::predictive_entropy(stack);
        const core::UncertaintyMap mi = metrics::mutual_information(stack);
        const core::ProbabilityMap atlas = metrics::build_atlas(stack);
        for (std::size_t i = 0; i < stack.pixel_count(); ++i) {
            const std::vector<double> xs = pixel_samples(stack, i);
            CHECK(std::abs(var.at(i) - static_cast<double>(oracle::variance(xs))) < 1e-9);
            CHECK(std::abs(atlas.at(i) - static_cast<double>(oracle::mean(xs))) < 1e-9);
            CHECK(std::abs(ent.at(i) -
                           static_cast<double>(oracle::entropy(oracle::mean(xs)))) < 1e-9);
            CHECK(std::abs(mi.at(i) -
                           static_cast<double>(oracle::mutual_information(xs))) < 1e-9);
        }
    }
}

TEST_CASE("atlas score thresholds the mean and dices it against the reference") {
    const core::ProbabilityMap s0(2, 2, {0.0, 0.4, 0.7, 0.1});
    const core::ProbabilityMap s1(2, 2, {0.4, 0.8, 0.9, 0.7});
    const core::SampleStack stack({s0, s1});  // atlas {0.2, 0.6, 0.8, 0.4}
    const core::BinaryMask reference(2, 2, {0, 1, 0, 0});

    const metrics::AtlasScore score = metrics::atlas_score(stack, reference, 0.5);
    CHECK(score.threshold == 0.5);
    CHECK(score.dsc_h == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(score.uncertainty == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    // Perfect agreement at h = 0.55: atlas mask {0,1,1,0} vs itself.
    const metrics::AtlasScore exact =
        metrics::atlas_score(stack, core::BinaryMask(2, 2, {0, 1, 1, 0}), 0.55);
    CHECK(exact.dsc_h == 1.0);
    CHECK(exact.uncertainty == 0.0);

    CHECK_THROWS_AS(metrics::atlas_score(stack, core::BinaryMask(1, 4, 0), 0.5),
                    std::invalid_argument);
    CHECK_THROWS_AS(metrics::atlas_score(stack, reference, 1.5), std::invalid_argument);
}

TEST_CASE("raising the atlas threshold never grows the mask") {
    std::mt19937_64 gen(31);
    const core::SampleStack stack = random_stack(gen, 5, 6, 6);
    const core::ProbabilityMap atlas = metrics::build_atlas(stack);
    const core::BinaryMask lo = core::threshold(atlas, 0.1);
    const core::BinaryMask mid = core::threshold(atlas, 0.5);
    const core::BinaryMask hi = core::threshold(atlas, 0.9);
    for (std::size_t i = 0; i < atlas.pixel_count(); ++i) {
        CHECK(hi.at(i) <= mid.at(i));
        CHECK(mid.at(i) <= lo.at(i));
    }
}
