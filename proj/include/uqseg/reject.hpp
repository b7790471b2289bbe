#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace uqseg::reject {

struct CurvePoint {
    double retained_fraction = 0.0;
    std::size_t n_retained = 0;
    double mean_dsc = 0.0;
};

// Mean DSC over the retained (least uncertain) images per retained fraction.
// Fractions are strictly increasing and end at 1.0, so the last point is the
// plain mean over every image.
struct RetentionCurve {
    std::string metric;
    std::vector<CurvePoint> points;
};

// One evaluated image: Dice of the reference prediction against ground truth
// plus the image's normalized uncertainty under one metric.
struct EvalRecord {
    std::string image_id;
    double dsc_vs_gt = 0.0;
    double uncertainty = 0.0;
};

inline const std::vector<double>& default_fractions() {
    static const std::vector<double> fractions{0.2, 0.4, 0.6, 0.8, 1.0};
    return fractions;
}

// For each fraction f, retain the floor(f * N + 0.5) least uncertain images
// and average their dsc_vs_gt. Depends only on the uncertainty ranking, so
// any strictly increasing rescoring leaves the curve unchanged.
RetentionCurve retention_curve(const std::vector<EvalRecord>& records, const std::string& metric,
                               const std::vector<double>& fractions);

struct SummaryTable {
    std::string csv;
    std::string text;
};

// One row per curve, one column per fraction ("First 20%", ...,
// "Full-Dataset(100%)"), optional trailing baseline column. All curves must
// share the same fraction grid.
SummaryTable summary_table(const std::vector<RetentionCurve>& curves,
                           std::optional<double> baseline_dsc);

}  // namespace uqseg::reject
