#include "uqseg/reject.hpp"

#include <algorithm>
#include <stdexcept>

#include "uqseg/aggregate.hpp"
#include "uqseg/format.hpp"

namespace uqseg::reject {

namespace {

void check_fractions(const std::vector<double>& fractions) {
    if (fractions.empty())
        throw std::invalid_argument("retention_curve: no fractions given");
    double prev = 0.0;
    for (const double f : fractions) {
        if (!(f > 0.0 && f <= 1.0))
            throw std::invalid_argument("retention_curve: fractions must lie in (0,1]");
        if (f <= prev)
            throw std::invalid_argument("retention_curve: fractions must be strictly increasing");
        prev = f;
    }
    if (fractions.back() != 1.0)
        throw std::invalid_argument("retention_curve: final fraction must be 1.0");
}

std::string fraction_label(double fraction) {
    if (fraction == 1.0) return "Full-Dataset(100%)";
    return "First " + format_real(fraction * 100.0) + "%";
}

}  // namespace

RetentionCurve retention_curve(const std::vector<EvalRecord>& records, const std::string& metric,
                               const std::vector<double>& fractions) {
    if (records.empty())
        throw std::invalid_argument("retention_curve: no records");
    check_fractions(fractions);

    // Most uncertain first, the ordering select_rejected uses; retaining the
    // first f is then exactly the complement of rejecting the first 1-f.
    std::vector<const EvalRecord*> order;
    order.reserve(records.size());
    for (const auto& r : records) order.push_back(&r);
    std::sort(order.begin(), order.end(), [](const EvalRecord* a, const EvalRecord* b) {
        if (a->uncertainty != b->uncertainty) return a->uncertainty > b->uncertainty;
        return a->image_id < b->image_id;
    });

    RetentionCurve curve;
    curve.metric = metric;
    curve.points.reserve(fractions.size());
    for (const double f : fractions) {
        const std::size_t n_retained = aggregate::scaled_count(f, order.size());
        if (n_retained == 0)
            throw std::invalid_argument("retention_curve: fraction " + format_real(f) +
                                        " retains no images");
        double sum = 0.0;
        for (std::size_t i = order.size() - n_retained; i < order.size(); ++i)
            sum += order[i]->dsc_vs_gt;
        curve.points.push_back(
            {f, n_retained, sum / static_cast<double>(n_retained)});
    }
    return curve;
}

SummaryTable summary_table(const std::vector<RetentionCurve>& curves,
                           std::optional<double> baseline_dsc) {
    if (curves.empty())
        throw std::invalid_argument("summary_table: no curves");
    const auto& grid = curves.front().points;
    for (const auto& curve : curves) {
        if (curve.points.size() != grid.size())
            throw std::invalid_argument("summary_table: curves use different fraction grids");
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (curve.points[i].retained_fraction != grid[i].retained_fraction)
                throw std::invalid_argument("summary_table: curves use different fraction grids");
        }
    }

    std::vector<std::vector<std::string>> cells;
    std::vector<std::string> header;
    header.push_back("metric");
    for (const auto& point : grid) header.push_back(fraction_label(point.retained_fraction));
    if (baseline_dsc) header.push_back("baseline");
    cells.push_back(header);
    for (const auto& curve : curves) {
        std::vector<std::string> row;
        row.push_back(curve.metric);
        for (const auto& point : curve.points) row.push_back(format_real(point.mean_dsc));
        if (baseline_dsc) row.push_back(format_real(*baseline_dsc));
        cells.push_back(std::move(row));
    }

    SummaryTable table;
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) table.csv += ',';
            table.csv += row[c];
        }
        table.csv += '\n';
    }

    std::vector<std::size_t> widths(cells.front().size(), 0);
    for (const auto& row : cells)
        for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
    for (const auto& row : cells) {
        std::string line;
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) line += "  ";
            line += row[c];
            if (c + 1 < row.size()) line.append(widths[c] - row[c].size(), ' ');
        }
        table.text += line;
        table.text += '\n';
    }
    return table;
}

}  // namespace uqseg::reject
