#include "uqseg/tta.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "uqseg/rng.hpp"

namespace uqseg::tta {

namespace {

void check_spec(const TransformSpec& t) {
    if (!(t.rotation_deg >= -20.0 && t.rotation_deg <= 20.0))
        throw std::invalid_argument("transform: rotation must be in [-20,20] degrees");
    if (!(t.noise_sigma >= 0.0))
        throw std::invalid_argument("transform: noise sigma must be >= 0");
}

double sample_bilinear(const std::vector<double>& src, std::size_t height, std::size_t width,
                       double sy, double sx) {
    const double fy = std::floor(sy);
    const double fx = std::floor(sx);
    const long y0 = static_cast<long>(fy);
    const long x0 = static_cast<long>(fx);
    const double ay = sy - fy;
    const double ax = sx - fx;
    const auto at = [&](long y, long x) -> double {
        if (y < 0 || x < 0 || y >= static_cast<long>(height) || x >= static_cast<long>(width))
            return 0.0;  // zero fill outside the frame
        return src[static_cast<std::size_t>(y) * width + static_cast<std::size_t>(x)];
    };
    const double top = (1.0 - ax) * at(y0, x0) + ax * at(y0, x0 + 1);
    const double bottom = (1.0 - ax) * at(y0 + 1, x0) + ax * at(y0 + 1, x0 + 1);
    return (1.0 - ay) * top + ay * bottom;
}

std::vector<double> rotate_grid(const std::vector<double>& src, std::size_t height,
                                std::size_t width, double degrees) {
    const double radians = degrees * std::numbers::pi / 180.0;
    const double c = std::cos(radians);
    const double s = std::sin(radians);
    const double cx = (static_cast<double>(width) - 1.0) / 2.0;
    const double cy = (static_cast<double>(height) - 1.0) / 2.0;
    std::vector<double> out(src.size());
    for (std::size_t r = 0; r < height; ++r) {
        const double dy = static_cast<double>(r) - cy;
        for (std::size_t col = 0; col < width; ++col) {
            const double dx = static_cast<double>(col) - cx;
            const double sx = c * dx + s * dy + cx;
            const double sy = -s * dx + c * dy + cy;
            out[r * width + col] = sample_bilinear(src, height, width, sy, sx);
        }
    }
    return out;
}

std::vector<double> flip_grid(const std::vector<double>& src, std::size_t height,
                              std::size_t width) {
    std::vector<double> out(src.size());
    for (std::size_t r = 0; r < height; ++r)
        for (std::size_t col = 0; col < width; ++col)
            out[r * width + col] = src[r * width + (width - 1 - col)];
    return out;
}

}  // namespace

InputImage::InputImage(std::size_t height, std::size_t width, std::vector<double> values)
    : height_(height), width_(width), values_(std::move(values)) {
    if (height_ == 0 || width_ == 0)
        throw std::invalid_argument("input image: dimensions must be positive");
    if (values_.size() != height_ * width_)
        throw std::invalid_argument("input image: value count does not match dimensions");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i]))
            throw std::invalid_argument("input image: non-finite value at pixel " +
                                        std::to_string(i));
    }
}

std::vector<TransformSpec> sample_transforms(std::size_t count, std::uint64_t seed,
                                             const AugmentConfig& config) {
    if (count == 0)
        throw std::invalid_argument("sample_transforms: count must be >= 1");
    if (!(config.max_rotation_deg >= 0.0 && config.max_rotation_deg <= 20.0))
        throw std::invalid_argument("sample_transforms: max rotation must be in [0,20] degrees");
    if (!(config.noise_sigma >= 0.0))
        throw std::invalid_argument("sample_transforms: noise sigma must be >= 0");

    std::vector<TransformSpec> specs;
    specs.reserve(count);
    specs.push_back(TransformSpec{});  // identity first: the plain prediction is always present
    for (std::size_t k = 1; k < count; ++k) {
        std::mt19937_64 gen(derive_seed(seed, k));
        TransformSpec t;
        t.rotation_deg = uniform_in(gen, -config.max_rotation_deg, config.max_rotation_deg);
        t.hflip = coin(gen);
        t.noise_sigma = config.noise_sigma;
        t.noise_seed = gen();
        specs.push_back(t);
    }
    return specs;
}

InputImage apply_transform(const InputImage& img, const TransformSpec& t) {
    check_spec(t);
    std::vector<double> values(img.values().begin(), img.values().end());
    if (t.rotation_deg != 0.0) values = rotate_grid(values, img.height(), img.width(), t.rotation_deg);
    if (t.hflip) values = flip_grid(values, img.height(), img.width());
    if (t.noise_sigma > 0.0) {
        GaussianSource noise(t.noise_seed);
        for (double& v : values) v += t.noise_sigma * noise.next();
    }
    return InputImage(img.height(), img.width(), std::move(values));
}

core::ProbabilityMap invert_prediction(const core::ProbabilityMap& pred, const TransformSpec& t) {
    check_spec(t);
    std::vector<double> values(pred.values().begin(), pred.values().end());
    if (t.hflip) values = flip_grid(values, pred.height(), pred.width());
    if (t.rotation_deg != 0.0) {
        values = rotate_grid(values, pred.height(), pred.width(), -t.rotation_deg);
        for (double& v : values) v = std::clamp(v, 0.0, 1.0);
    }
    return core::ProbabilityMap(pred.height(), pred.width(), std::move(values));
}

core::SampleStack assemble_stack(
    const std::vector<std::pair<core::ProbabilityMap, TransformSpec>>& preds) {
    if (preds.empty())
        throw std::invalid_argument("assemble_stack: no predictions");
    std::vector<core::ProbabilityMap> aligned;
    aligned.reserve(preds.size());
    for (const auto& [pred, spec] : preds) {
        if (!core::same_shape(pred, preds.front().first))
            throw std::invalid_argument("assemble_stack: prediction dimensions differ");
        aligned.push_back(invert_prediction(pred, spec));
    }
    return core::SampleStack(std::move(aligned));
}

}  // namespace uqseg::tta
