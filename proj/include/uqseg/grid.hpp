#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace uqseg::core {

// Row-major H x W map of per-pixel probabilities, every value in [0,1].
class ProbabilityMap {
public:
    ProbabilityMap(std::size_t height, std::size_t width, double fill = 0.0);
    ProbabilityMap(std::size_t height, std::size_t width, std::vector<double> values);

    std::size_t height() const { return height_; }
    std::size_t width() const { return width_; }
    std::size_t pixel_count() const { return values_.size(); }
    double at(std::size_t i) const { return values_[i]; }
    double operator()(std::size_t row, std::size_t col) const { return values_[row * width_ + col]; }
    std::span<const double> values() const { return values_; }

private:
    std::size_t height_;
    std::size_t width_;
    std::vector<double> values_;
};

// Row-major H x W map of nonnegative, finite per-pixel uncertainties.
class UncertaintyMap {
public:
    UncertaintyMap(std::size_t height, std::size_t width, std::vector<double> values);

    std::size_t height() const { return height_; }
    std::size_t width() const { return width_; }
    std::size_t pixel_count() const { return values_.size(); }
    double at(std::size_t i) const { return values_[i]; }
    double operator()(std::size_t row, std::size_t col) const { return values_[row * width_ + col]; }
    std::span<const double> values() const { return values_; }

private:
    std::size_t height_;
    std::size_t width_;
    std::vector<double> values_;
};

// Row-major H x W binary segmentation, values strictly 0 or 1.
class BinaryMask {
public:
    BinaryMask(std::size_t height, std::size_t width, std::uint8_t fill = 0);
    BinaryMask(std::size_t height, std::size_t width, std::vector<std::uint8_t> values);

    std::size_t height() const { return height_; }
    std::size_t width() const { return width_; }
    std::size_t pixel_count() const { return values_.size(); }
    std::uint8_t at(std::size_t i) const { return values_[i]; }
    std::uint8_t operator()(std::size_t row, std::size_t col) const { return values_[row * width_ + col]; }
    std::span<const std::uint8_t> values() const { return values_; }
    std::size_t foreground_count() const;

private:
    std::size_t height_;
    std::size_t width_;
    std::vector<std::uint8_t> values_;
};

// Ordered list of T prediction samples for one image, all the same shape.
class SampleStack {
public:
    explicit SampleStack(std::vector<ProbabilityMap> samples);

    std::size_t sample_count() const { return samples_.size(); }
    std::size_t height() const { return samples_.front().height(); }
    std::size_t width() const { return samples_.front().width(); }
    std::size_t pixel_count() const { return samples_.front().pixel_count(); }
    const ProbabilityMap& sample(std::size_t t) const { return samples_[t]; }

private:
    std::vector<ProbabilityMap> samples_;
};

bool same_shape(const ProbabilityMap& a, const ProbabilityMap& b);
bool same_shape(const BinaryMask& a, const BinaryMask& b);
bool same_shape(const SampleStack& stack, const BinaryMask& mask);

}  // namespace uqseg::core
