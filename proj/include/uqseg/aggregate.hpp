#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "uqseg/grid.hpp"
#include "uqseg/metrics.hpp"

namespace uqseg::aggregate {

// One image's standing within a scored set. rank 1 is the most uncertain
// image; ties on the score are broken by ascending image_id.
struct ImageScore {
    std::string image_id;
    std::string metric;
    double raw = 0.0;
    double normalized = 0.0;
    std::size_t rank = 0;
};

// log(sum_i exp(u_i)) with max-shift stabilization. No 1/N factor; adding a
// constant to every pixel shifts the result by exactly that constant.
double lse_score(const core::UncertaintyMap& umap);

// (s - min) / (max - min) per element. A degenerate set (max == min,
// including a singleton) maps everything to 0: no image is distinguishable.
std::vector<double> minmax_normalize(const std::vector<double>& raw_scores);

// Normalize and rank precomputed raw scores. Returned entries are ordered by
// ascending image_id regardless of input order.
std::vector<ImageScore> score_set(std::vector<std::pair<std::string, double>> raw_by_image,
                                  const std::string& metric);

// Pixel-metric records: raw = lse_score(map), then set-wide normalization.
std::vector<ImageScore> score_set(
    const std::vector<std::pair<std::string, core::UncertaintyMap>>& maps,
    const std::string& metric);

// Atlas records: raw = 1 - dsc_h, already image-level, then normalization.
std::vector<ImageScore> score_set(
    const std::vector<std::pair<std::string, metrics::AtlasScore>>& scores,
    const std::string& metric);

struct RejectionSplit {
    std::vector<std::string> rejected;  // most uncertain first
    std::vector<std::string> retained;  // remainder, still ordered by descending uncertainty
};

// Reject the floor(reject_fraction * N + 0.5) most uncertain images.
RejectionSplit select_rejected(const std::vector<ImageScore>& scores, double reject_fraction);

// Round-half-up count shared by rejection and retention so complementary
// fractions partition the set (exact whenever fraction * N is not x.5).
std::size_t scaled_count(double fraction, std::size_t n);

}  // namespace uqseg::aggregate
