#pragma once

#include "uqseg/grid.hpp"

namespace uqseg::metrics {

// Image-level agreement between the thresholded mean prediction and the
// reference segmentation. uncertainty is 1 - dsc_h so that higher always
// means more uncertain.
struct AtlasScore {
    double threshold = 0.5;
    double dsc_h = 1.0;
    double uncertainty = 0.0;
};

// Per-pixel population variance (divisor T) of the samples. Values lie in
// [0, 0.25]; a pixel is exactly 0 iff all samples agree there.
core::UncertaintyMap pixel_variance(const core::SampleStack& stack);

// Per-pixel arithmetic mean of the samples.
core::ProbabilityMap build_atlas(const core::SampleStack& stack);

// Binary entropy of the mean prediction, pixel-wise. Equals
// binary_entropy(build_atlas(stack)) exactly.
core::UncertaintyMap predictive_entropy(const core::SampleStack& stack);

// Entropy of the mean minus mean of the per-sample entropies. Nonnegative
// up to rounding; residues in [-1e-12, 0) are clamped to 0.
core::UncertaintyMap mutual_information(const core::SampleStack& stack);

// Threshold the per-pixel mean at h and Dice it against the reference
// prediction.
AtlasScore atlas_score(const core::SampleStack& stack, const core::BinaryMask& reference, double h);

}  // namespace uqseg::metrics
