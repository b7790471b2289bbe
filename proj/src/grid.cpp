#include "uqseg/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace uqseg::core {

namespace {

std::size_t checked_area(std::size_t height, std::size_t width) {
    if (height == 0 || width == 0)
        throw std::invalid_argument("grid dimensions must be positive");
    return height * width;
}

}  // namespace

ProbabilityMap::ProbabilityMap(std::size_t height, std::size_t width, double fill)
    : ProbabilityMap(height, width, std::vector<double>(checked_area(height, width), fill)) {}

ProbabilityMap::ProbabilityMap(std::size_t height, std::size_t width, std::vector<double> values)
    : height_(height), width_(width), values_(std::move(values)) {
    if (values_.size() != checked_area(height, width))
        throw std::invalid_argument("probability map: value count does not match dimensions");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const double v = values_[i];
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("probability map: value out of [0,1] at pixel " +
                                        std::to_string(i));
    }
}

UncertaintyMap::UncertaintyMap(std::size_t height, std::size_t width, std::vector<double> values)
    : height_(height), width_(width), values_(std::move(values)) {
    if (values_.size() != checked_area(height, width))
        throw std::invalid_argument("uncertainty map: value count does not match dimensions");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const double v = values_[i];
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("uncertainty map: negative or non-finite value at pixel " +
                                        std::to_string(i));
    }
}

BinaryMask::BinaryMask(std::size_t height, std::size_t width, std::uint8_t fill)
    : BinaryMask(height, width, std::vector<std::uint8_t>(checked_area(height, width), fill)) {}

BinaryMask::BinaryMask(std::size_t height, std::size_t width, std::vector<std::uint8_t> values)
    : height_(height), width_(width), values_(std::move(values)) {
    if (values_.size() != checked_area(height, width))
        throw std::invalid_argument("binary mask: value count does not match dimensions");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (values_[i] > 1)
            throw std::invalid_argument("binary mask: non-binary value at pixel " +
                                        std::to_string(i));
    }
}

std::size_t BinaryMask::foreground_count() const {
    std::size_t n = 0;
    for (const std::uint8_t v : values_) n += v;
    return n;
}

SampleStack::SampleStack(std::vector<ProbabilityMap> samples) : samples_(std::move(samples)) {
    if (samples_.empty())
        throw std::invalid_argument("sample stack: needs at least one sample");
    for (std::size_t t = 1; t < samples_.size(); ++t) {
        if (!same_shape(samples_[t], samples_.front()))
            throw std::invalid_argument("sample stack: sample " + std::to_string(t) +
                                        " does not match the shape of sample 0");
    }
}

bool same_shape(const ProbabilityMap& a, const ProbabilityMap& b) {
    return a.height() == b.height() && a.width() == b.width();
}

bool same_shape(const BinaryMask& a, const BinaryMask& b) {
    return a.height() == b.height() && a.width() == b.width();
}

bool same_shape(const SampleStack& stack, const BinaryMask& mask) {
    return stack.height() == mask.height() && stack.width() == mask.width();
}

}  // namespace uqseg::core
