#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "oracle.hpp"
#include "uqseg/core.hpp"

using namespace uqseg;

TEST_CASE("probability map validates its values") {
    CHECK_NOTHROW(core::ProbabilityMap(1, 3, {0.0, 0.5, 1.0}));
    CHECK_THROWS_AS(core::ProbabilityMap(1, 2, {0.5, 1.5}), std::invalid_argument);
    CHECK_THROWS_AS(core::ProbabilityMap(1, 2, {-0.1, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(core::ProbabilityMap(1, 1, {std::nan("")}), std::invalid_argument);
    CHECK_THROWS_AS(core::ProbabilityMap(2, 2, std::vector<double>{0.5}), std::invalid_argument);
    CHECK_THROWS_AS(core::ProbabilityMap(0, 4), std::invalid_argument);
    CHECK_THROWS_AS(core::ProbabilityMap(4, 0), std::invalid_argument);
}

TEST_CASE("uncertainty map requires nonnegative finite values") {
    CHECK_NOTHROW(core::UncertaintyMap(1, 2, {0.0, 123.0}));
    CHECK_THROWS_AS(core::UncertaintyMap(1, 1, {-1e-9}), std::invalid_argument);
    CHECK_THROWS_AS(core::UncertaintyMap(1, 1, {std::numeric_limits<double>::infinity()}),
                    std::invalid_argument);
    CHECK_THROWS_AS(core::UncertaintyMap(1, 1, {std::nan("")}), std::invalid_argument);
}

TEST_CASE("binary mask accepts only 0 and 1") {
    const core::BinaryMask mask(2, 2, {1, 0, 0, 1});
    CHECK(mask.foreground_count() == 2);
    CHECK(mask(0, 0) == 1);
    CHECK(mask(0, 1) == 0);
    CHECK_THROWS_AS(core::BinaryMask(1, 1, std::vector<std::uint8_t>{2}), std::invalid_argument);
}

TEST_CASE("sample stack requires nonempty list of equal shapes") {
    const core::ProbabilityMap a(2, 3, 0.25);
    const core::ProbabilityMap b(2, 3, 0.75);
    const core::SampleStack stack({a, b});
    CHECK(stack.sample_count() == 2);
    CHECK(stack.height() == 2);
    CHECK(stack.width() == 3);
    CHECK_THROWS_AS(core::SampleStack({}), std::invalid_argument);
    CHECK_THROWS_AS(core::SampleStack({a, core::ProbabilityMap(3, 2, 0.5)}),
                    std::invalid_argument);
}

TEST_CASE("threshold is inclusive and bounds-checked") {
    const core::ProbabilityMap map(1, 4, {0.2, 0.5, 0.7, 1.0});
    const core::BinaryMask at_half = core::threshold(map, 0.5);
    CHECK(at_half.at(0) == 0);
    CHECK(at_half.at(1) == 1);  // 0.5 >= 0.5
    CHECK(at_half.at(2) == 1);
    CHECK(at_half.at(3) == 1);

    const core::BinaryMask at_zero = core::threshold(map, 0.0);
    CHECK(at_zero.foreground_count() == 4);
    const core::BinaryMask at_one = core::threshold(map, 1.0);
    CHECK(at_one.foreground_count() == 1);

    CHECK_THROWS_AS(core::threshold(map, -0.01), std::invalid_argument);
    CHECK_THROWS_AS(core::threshold(map, 1.01), std::invalid_argument);
}

TEST_CASE("binary entropy endpoints, peak, and symmetry") {
    CHECK(core::binary_entropy(0.0) == 0.0);
    CHECK(core::binary_entropy(1.0) == 0.0);
    CHECK(std::abs(core::binary_entropy(0.5) - std::numbers::ln2) < 1e-15);
    CHECK(core::binary_entropy(0.3) == core::binary_entropy(0.7));
    CHECK(std::abs(core::binary_entropy(0.4) -
                   static_cast<double>(oracle::entropy(0.4L))) < 1e-15);
    CHECK_THROWS_AS(core::binary_entropy(-0.01), std::domain_error);
    CHECK_THROWS_AS(core::binary_entropy(1.01), std::domain_error);
}

TEST_CASE("dice similarity coefficient") {
    const core::BinaryMask a(2, 2, {1, 1, 0, 0});
    CHECK(core::dsc(a, a) == 1.0);

    const core::BinaryMask b(2, 2, {0, 0, 1, 1});
    CHECK(core::dsc(a, b) == 0.0);

    const core::BinaryMask empty(2, 2, 0);
    CHECK(core::dsc(empty, empty) == 1.0);
    CHECK(core::dsc(a, empty) == 0.0);

    const core::BinaryMask c(2, 2, {1, 0, 1, 0});
    CHECK(core::dsc(a, c) == doctest::Approx(0.5));

    CHECK_THROWS_AS(core::dsc(a, core::BinaryMask(1, 4, 0)), std::invalid_argument);
}

TEST_CASE("dice matches the brute-force oracle on random masks") {
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t h = 1 + gen() % 6;
        const std::size_t w = 1 + gen() % 6;
        std::vector<std::uint8_t> va(h * w), vb(h * w);
        for (auto& v : va) v = static_cast<std::uint8_t>(gen() % 2);
        for (auto& v : vb) v = static_cast<std::uint8_t>(gen() % 2);
        const core::BinaryMask a(h, w, va);
        const core::BinaryMask b(h, w, vb);
        CHECK(core::dsc(a, b) == doctest::Approx(oracle::dice(va, vb)).epsilon(1e-12));
    }
}
