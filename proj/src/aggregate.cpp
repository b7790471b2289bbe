#include "uqseg/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uqseg::aggregate {

double lse_score(const core::UncertaintyMap& umap) {
    const auto values = umap.values();
    const double peak = *std::max_element(values.begin(), values.end());
    double acc = 0.0;
    for (const double v : values) acc += std::exp(v - peak);
    return peak + std::log(acc);
}

std::vector<double> minmax_normalize(const std::vector<double>& raw_scores) {
    if (raw_scores.empty())
        throw std::invalid_argument("minmax_normalize: empty input");
    const auto [lo_it, hi_it] = std::minmax_element(raw_scores.begin(), raw_scores.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    std::vector<double> out(raw_scores.size(), 0.0);
    if (hi == lo) return out;
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = (raw_scores[i] - lo) / (hi - lo);
    return out;
}

std::vector<ImageScore> score_set(std::vector<std::pair<std::string, double>> raw_by_image,
                                  const std::string& metric) {
    if (raw_by_image.empty())
        throw std::invalid_argument("score_set: no images");
    std::sort(raw_by_image.begin(), raw_by_image.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < raw_by_image.size(); ++i) {
        if (raw_by_image[i].first == raw_by_image[i - 1].first)
            throw std::invalid_argument("score_set: duplicate image_id '" +
                                        raw_by_image[i].first + "'");
    }

    std::vector<double> raw(raw_by_image.size());
    for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = raw_by_image[i].second;
    const std::vector<double> normalized = minmax_normalize(raw);

    std::vector<ImageScore> out(raw_by_image.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i].image_id = raw_by_image[i].first;
        out[i].metric = metric;
        out[i].raw = raw[i];
        out[i].normalized = normalized[i];
    }

    // Rank 1 = highest normalized score; ties fall back to ascending id,
    // which is the array order.
    std::vector<std::size_t> order(out.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return out[a].normalized > out[b].normalized;
    });
    for (std::size_t pos = 0; pos < order.size(); ++pos) out[order[pos]].rank = pos + 1;
    return out;
}

std::vector<ImageScore> score_set(
    const std::vector<std::pair<std::string, core::UncertaintyMap>>& maps,
    const std::string& metric) {
    std::vector<std::pair<std::string, double>> raw;
    raw.reserve(maps.size());
    for (const auto& [id, umap] : maps) raw.emplace_back(id, lse_score(umap));
    return score_set(std::move(raw), metric);
}

std::vector<ImageScore> score_set(
    const std::vector<std::pair<std::string, metrics::AtlasScore>>& scores,
    const std::string& metric) {
    std::vector<std::pair<std::string, double>> raw;
    raw.reserve(scores.size());
    for (const auto& [id, score] : scores) raw.emplace_back(id, score.uncertainty);
    return score_set(std::move(raw), metric);
}

std::size_t scaled_count(double fraction, std::size_t n) {
    const double scaled =
        std::floor(fraction * static_cast<double>(n) + 0.5);
    if (scaled <= 0.0) return 0;
    const auto count = static_cast<std::size_t>(scaled);
    return std::min(count, n);
}

RejectionSplit select_rejected(const std::vector<ImageScore>& scores, double reject_fraction) {
    if (!(reject_fraction >= 0.0 && reject_fraction <= 1.0))
        throw std::invalid_argument("select_rejected: fraction must be in [0,1]");
    std::vector<const ImageScore*> order;
    order.reserve(scores.size());
    for (const auto& s : scores) order.push_back(&s);
    std::sort(order.begin(), order.end(), [](const ImageScore* a, const ImageScore* b) {
        if (a->normalized != b->normalized) return a->normalized > b->normalized;
        return a->image_id < b->image_id;
    });

    const std::size_t n_reject = scaled_count(reject_fraction, order.size());
    RejectionSplit split;
    split.rejected.reserve(n_reject);
    split.retained.reserve(order.size() - n_reject);
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i < n_reject)
            split.rejected.push_back(order[i]->image_id);
        else
            split.retained.push_back(order[i]->image_id);
    }
    return split;
}

}  // namespace uqseg::aggregate
