#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "uqseg/grid.hpp"

namespace uqseg::synth {

// Elliptical phantom. Ground truth is the ellipse indicator; the base
// probability map ramps across the boundary with a sigmoid of width
// boundary_softness pixels. Softness 0 makes the base binary, equal to the
// ground truth.
struct PhantomSpec {
    std::size_t height = 128;
    std::size_t width = 128;
    double center_x = 63.5;
    double center_y = 63.5;
    double semi_axis_x = 30.0;
    double semi_axis_y = 20.0;
    double boundary_softness = 1.0;
    double severity = 0.0;  // carried along for the perturbation stage
    std::uint64_t seed = 0;
};

struct Phantom {
    core::BinaryMask gt;
    core::ProbabilityMap base;
};

Phantom generate_phantom(const PhantomSpec& spec);

// T perturbed copies of base: clamp(base + severity * (global smooth field +
// boundary-weighted smooth field)). The fields are box-blurred white noise,
// so disagreement is spatially correlated and concentrated at the boundary.
// severity 0 returns T exact copies of base.
core::SampleStack perturb_stack(const core::ProbabilityMap& base, std::size_t t_count,
                                double severity, std::uint64_t seed);

struct CohortConfig {
    std::size_t n_images = 200;
    double severity_lo = 0.0;
    double severity_hi = 0.9;
    std::uint64_t seed = 42;
    std::size_t height = 128;
    std::size_t width = 128;
    std::size_t samples = 12;
};

// One cohort entry. The reference segmentation is the thresholded first
// perturbed sample, so its Dice against ground truth degrades with severity
// through the same mechanism that widens the sample spread.
struct CohortImage {
    std::string image_id;
    double severity = 0.0;
    core::BinaryMask gt;
    core::BinaryMask reference;
    core::SampleStack stack;
};

// Zero-padded id so lexicographic and numeric order agree.
std::string cohort_image_id(std::size_t index, std::size_t n_images);

// Image `index` of the cohort. Severities are evenly spaced over
// [severity_lo, severity_hi]; per-image geometry and noise streams derive
// from (seed, index), so images can be generated in any order or in
// parallel without changing the output.
CohortImage generate_cohort_image(const CohortConfig& config, std::size_t index);

// Whole cohort with the frozen default geometry (128x128, 12 samples).
std::vector<CohortImage> generate_cohort(std::size_t n_images, double severity_lo,
                                         double severity_hi, std::uint64_t seed);

}  // namespace uqseg::synth
