#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "uqseg/grid.hpp"

namespace uqseg::tta {

// Grayscale input image. Unlike core::ProbabilityMap the intensities are not
// range-restricted (additive noise may leave [0,1]); they must be finite.
class InputImage {
public:
    InputImage(std::size_t height, std::size_t width, std::vector<double> values);

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

// One augmentation: rotate about the image center, then horizontal flip,
// then additive Gaussian noise. Inversion runs un-flip, then rotate back;
// noise has no inverse.
struct TransformSpec {
    double rotation_deg = 0.0;  // within [-20, 20]
    bool hflip = false;
    double noise_sigma = 0.0;
    std::uint64_t noise_seed = 0;
};

struct AugmentConfig {
    double max_rotation_deg = 20.0;  // capped at 20
    double noise_sigma = 0.01;       // of the unit intensity range
};

// Deterministic transform list: element 0 is always the identity so the
// unaugmented prediction is part of every stack; the rest draw rotation
// uniformly from [-max, max] and flip with probability 1/2.
std::vector<TransformSpec> sample_transforms(std::size_t count, std::uint64_t seed,
                                             const AugmentConfig& config = {});

// Rotation uses bilinear interpolation about the center ((W-1)/2, (H-1)/2)
// with zero fill; dimensions are preserved. An identity spec returns a
// bit-identical copy.
InputImage apply_transform(const InputImage& img, const TransformSpec& t);

// Aligns an external model's prediction on an augmented input back into the
// original frame. Output is clamped to [0,1]; flip inversion is exact, while
// rotation inversion carries interpolation error near edges.
core::ProbabilityMap invert_prediction(const core::ProbabilityMap& pred, const TransformSpec& t);

// Inverse-align every prediction and stack them in input order.
core::SampleStack assemble_stack(
    const std::vector<std::pair<core::ProbabilityMap, TransformSpec>>& preds);

}  // namespace uqseg::tta
