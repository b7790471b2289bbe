#include "uqseg/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "uqseg/aggregate.hpp"
#include "uqseg/core.hpp"
#include "uqseg/format.hpp"
#include "uqseg/io.hpp"
#include "uqseg/metrics.hpp"
#include "uqseg/reject.hpp"
#include "uqseg/rng.hpp"
#include "uqseg/synth.hpp"
#include "uqseg/tta.hpp"

namespace uqseg::cli {

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Indexed work pool: item i always lands in slot i, so results are
// independent of the worker count and of scheduling order.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn) {
    workers = std::min(workers, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

// Runs task(i) for every i, capturing per-item failures instead of
// propagating them; the caller decides between exit codes 0 and 1.
template <typename Task>
std::vector<std::string> run_per_image(std::size_t n, std::size_t workers, Task&& task) {
    std::vector<std::string> errors(n);
    parallel_for(n, workers, [&](std::size_t i) {
        try {
            task(i);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });
    return errors;
}

std::vector<std::string> split_tokens(const std::string& text) {
    std::vector<std::string> tokens;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(',', start);
        if (end == std::string::npos) end = text.size();
        tokens.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    return tokens;
}

double parse_double(const std::string& token, const std::string& what) {
    double value = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last)
        throw UsageError(what + ": cannot parse '" + token + "' as a number");
    return value;
}

struct MetricPlan {
    bool variance = false;
    bool entropy = false;
    bool mutual_information = false;
    std::vector<double> atlas_thresholds;

    bool needs_reference() const { return !atlas_thresholds.empty(); }

    std::size_t count() const {
        return static_cast<std::size_t>(variance) + static_cast<std::size_t>(entropy) +
               static_cast<std::size_t>(mutual_information) + atlas_thresholds.size();
    }

    std::vector<std::string> labels() const {
        std::vector<std::string> out;
        if (variance) out.push_back("variance");
        if (entropy) out.push_back("entropy");
        if (mutual_information) out.push_back("mutual_information");
        for (const double h : atlas_thresholds) out.push_back("atlas@" + format_real(h));
        return out;
    }
};

MetricPlan parse_metrics(const std::string& tokens, bool allow_atlas) {
    MetricPlan plan;
    for (const std::string& token : split_tokens(tokens)) {
        if (token.empty()) continue;
        if (token == "all") {
            plan.variance = plan.entropy = plan.mutual_information = true;
            if (allow_atlas) plan.atlas_thresholds = {0.1, 0.5, 0.9};
        } else if (token == "variance") {
            plan.variance = true;
        } else if (token == "entropy") {
            plan.entropy = true;
        } else if (token == "mutual_information" || token == "mi") {
            plan.mutual_information = true;
        } else if (token == "atlas" || token.rfind("atlas@", 0) == 0) {
            if (!allow_atlas)
                throw UsageError("metric '" + token + "' has no pixel uncertainty map");
            if (token == "atlas") {
                for (const double h : {0.1, 0.5, 0.9}) plan.atlas_thresholds.push_back(h);
            } else {
                const double h = parse_double(token.substr(6), "atlas threshold");
                if (!(h >= 0.0 && h <= 1.0))
                    throw UsageError("atlas threshold must be in [0,1], got '" + token + "'");
                plan.atlas_thresholds.push_back(h);
            }
        } else {
            throw UsageError("unknown metric '" + token +
                             "' (expected variance, entropy, mutual_information, atlas, "
                             "atlas@<h>, or all)");
        }
    }
    std::sort(plan.atlas_thresholds.begin(), plan.atlas_thresholds.end());
    plan.atlas_thresholds.erase(
        std::unique(plan.atlas_thresholds.begin(), plan.atlas_thresholds.end()),
        plan.atlas_thresholds.end());
    if (plan.count() == 0) throw UsageError("no metrics selected");
    return plan;
}

std::vector<double> parse_fractions(const std::string& text) {
    std::vector<double> fractions;
    for (const std::string& token : split_tokens(text)) {
        if (token.empty()) continue;
        fractions.push_back(parse_double(token, "fraction"));
    }
    if (fractions.empty()) throw UsageError("no fractions given");
    for (std::size_t i = 0; i < fractions.size(); ++i) {
        if (!(fractions[i] > 0.0 && fractions[i] <= 1.0))
            throw UsageError("fractions must lie in (0,1]");
        if (i > 0 && fractions[i] <= fractions[i - 1])
            throw UsageError("fractions must be strictly increasing");
    }
    if (fractions.back() != 1.0)
        throw UsageError("the final fraction must be 1.0 (the full dataset)");
    return fractions;
}

io::PgmNormalization parse_norm(const std::string& token) {
    if (token == "per_image") return io::PgmNormalization::per_image;
    if (token == "fixed_range") return io::PgmNormalization::fixed_range;
    throw UsageError("unknown normalization '" + token + "' (expected per_image or fixed_range)");
}

std::size_t checked_workers(std::size_t workers) {
    if (workers == 0) throw UsageError("workers must be >= 1");
    return workers;
}

const double kEntropyMax = std::numbers::ln2;

// Per-image metric evaluation shared by metrics/filter/curve/render. Computes
// raw image-level scores in plan label order; optionally renders each pixel
// metric's map as a PGM next to it.
std::vector<double> evaluate_image(const MetricPlan& plan, const io::ManifestRow& row,
                                   bool render, io::PgmNormalization norm,
                                   const fs::path& render_dir) {
    const core::SampleStack stack = io::read_stack(row.stack_path);
    std::vector<double> raws;
    raws.reserve(plan.count());
    const auto pixel_metric = [&](const char* label, double fixed_max, auto compute) {
        const core::UncertaintyMap map = compute(stack);
        if (render) {
            const std::string pgm = io::render_pgm(map, norm, fixed_max);
            io::write_file(render_dir / (row.image_id + "_" + label + ".pgm"), pgm);
        }
        raws.push_back(aggregate::lse_score(map));
    };
    if (plan.variance) pixel_metric("variance", 0.25, metrics::pixel_variance);
    if (plan.entropy) pixel_metric("entropy", kEntropyMax, metrics::predictive_entropy);
    if (plan.mutual_information)
        pixel_metric("mutual_information", kEntropyMax, metrics::mutual_information);
    if (plan.needs_reference()) {
        if (row.reference_seg_path.empty())
            throw std::runtime_error(
                "no reference segmentation listed (required for atlas metrics)");
        const core::BinaryMask reference = io::read_mask(row.reference_seg_path);
        for (const double h : plan.atlas_thresholds)
            raws.push_back(metrics::atlas_score(stack, reference, h).uncertainty);
    }
    return raws;
}

std::size_t report_failures(const char* command, const io::Manifest& manifest,
                            const std::vector<std::string>& errors) {
    std::size_t failed = 0;
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (errors[i].empty()) continue;
        std::cerr << "uqseg " << command << ": image '" << manifest.rows[i].image_id
                  << "': " << errors[i] << '\n';
        ++failed;
    }
    return failed;
}

// Path string for `target` written into a manifest stored in `manifest_dir`.
std::string manifest_ref(const fs::path& target, const fs::path& manifest_dir) {
    std::error_code ec;
    const fs::path rel = fs::relative(target, manifest_dir, ec);
    if (!ec && !rel.empty()) return rel.string();
    return fs::absolute(target).string();
}

}  // namespace

int cmd_metrics(const MetricsOptions& opt) {
    io::Manifest manifest;
    MetricPlan plan;
    io::PgmNormalization norm = io::PgmNormalization::per_image;
    fs::path out_dir(opt.out_dir);
    std::size_t workers = 1;
    try {
        plan = parse_metrics(opt.metrics, true);
        norm = parse_norm(opt.render_norm);
        workers = checked_workers(opt.workers);
        manifest = io::read_manifest(opt.manifest);
        fs::create_directories(out_dir);
    } catch (const std::exception& e) {
        std::cerr << "uqseg metrics: " << e.what() << '\n';
        return kExitUsage;
    }

    const std::size_t n = manifest.rows.size();
    std::vector<std::vector<double>> raws(n);
    const std::vector<std::string> errors = run_per_image(n, workers, [&](std::size_t i) {
        raws[i] = evaluate_image(plan, manifest.rows[i], opt.render, norm, out_dir);
    });
    const std::size_t failed = report_failures("metrics", manifest, errors);
    if (failed == n) {
        std::cerr << "uqseg metrics: all images failed\n";
        return kExitPartial;
    }

    try {
        std::vector<aggregate::ImageScore> all_scores;
        const std::vector<std::string> labels = plan.labels();
        for (std::size_t m = 0; m < labels.size(); ++m) {
            std::vector<std::pair<std::string, double>> per_image;
            per_image.reserve(n - failed);
            for (std::size_t i = 0; i < n; ++i)
                if (errors[i].empty()) per_image.emplace_back(manifest.rows[i].image_id, raws[i][m]);
            std::vector<aggregate::ImageScore> scored =
                aggregate::score_set(std::move(per_image), labels[m]);
            all_scores.insert(all_scores.end(), std::make_move_iterator(scored.begin()),
                              std::make_move_iterator(scored.end()));
        }
        io::write_scores(out_dir / "scores.csv", all_scores);
    } catch (const std::exception& e) {
        std::cerr << "uqseg metrics: " << e.what() << '\n';
        return kExitUsage;
    }
    std::cerr << "uqseg metrics: scored " << (n - failed) << " of " << n << " images\n";
    return failed ? kExitPartial : kExitOk;
}

int cmd_filter(const FilterOptions& opt) {
    io::Manifest manifest;
    MetricPlan plan;
    fs::path out_dir(opt.out_dir);
    std::size_t workers = 1;
    try {
        plan = parse_metrics(opt.metric, true);
        if (plan.count() != 1) throw UsageError("filter ranks by exactly one metric");
        if (!(opt.fraction >= 0.0 && opt.fraction <= 1.0))
            throw UsageError("reject fraction must be in [0,1]");
        workers = checked_workers(opt.workers);
        manifest = io::read_manifest(opt.manifest);
        fs::create_directories(out_dir);
    } catch (const std::exception& e) {
        std::cerr << "uqseg filter: " << e.what() << '\n';
        return kExitUsage;
    }

    const std::size_t n = manifest.rows.size();
    std::vector<std::vector<double>> raws(n);
    const std::vector<std::string> errors = run_per_image(n, workers, [&](std::size_t i) {
        raws[i] = evaluate_image(plan, manifest.rows[i], false, io::PgmNormalization::per_image,
                                 out_dir);
    });
    const std::size_t failed = report_failures("filter", manifest, errors);
    if (failed == n) {
        std::cerr << "uqseg filter: all images failed\n";
        return kExitPartial;
    }

    try {
        std::vector<std::pair<std::string, double>> per_image;
        per_image.reserve(n - failed);
        for (std::size_t i = 0; i < n; ++i)
            if (errors[i].empty()) per_image.emplace_back(manifest.rows[i].image_id, raws[i][0]);
        const std::vector<aggregate::ImageScore> scores =
            aggregate::score_set(std::move(per_image), plan.labels().front());
        const aggregate::RejectionSplit split = aggregate::select_rejected(scores, opt.fraction);
        const std::set<std::string> rejected_ids(split.rejected.begin(), split.rejected.end());

        io::Manifest retained;
        io::Manifest rejected;
        for (std::size_t i = 0; i < n; ++i) {
            if (!errors[i].empty()) continue;  // failed images belong to neither output
            io::ManifestRow row = manifest.rows[i];
            row.stack_ref = manifest_ref(row.stack_path, out_dir);
            row.reference_ref = row.reference_seg_path.empty()
                                    ? std::string()
                                    : manifest_ref(row.reference_seg_path, out_dir);
            row.gt_ref = row.gt_path.empty() ? std::string() : manifest_ref(row.gt_path, out_dir);
            if (rejected_ids.count(row.image_id))
                rejected.rows.push_back(std::move(row));
            else
                retained.rows.push_back(std::move(row));
        }
        io::write_manifest(out_dir / "retained.csv", retained);
        io::write_manifest(out_dir / "rejected.csv", rejected);
        std::cout << "rejected " << rejected.rows.size() << " of " << (n - failed)
                  << " images; retained " << retained.rows.size() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "uqseg filter: " << e.what() << '\n';
        return kExitUsage;
    }
    return failed ? kExitPartial : kExitOk;
}

int cmd_curve(const CurveOptions& opt) {
    io::Manifest manifest;
    MetricPlan plan;
    std::vector<double> fractions;
    fs::path out_dir(opt.out_dir);
    std::size_t workers = 1;
    try {
        plan = parse_metrics(opt.metrics, true);
        fractions = parse_fractions(opt.fractions);
        workers = checked_workers(opt.workers);
        manifest = io::read_manifest(opt.manifest);
        fs::create_directories(out_dir);
        io::Manifest with_gt;
        for (const auto& row : manifest.rows) {
            if (row.gt_path.empty()) {
                std::cerr << "uqseg curve: image '" << row.image_id
                          << "': no ground truth listed; excluded\n";
                continue;
            }
            with_gt.rows.push_back(row);
        }
        if (with_gt.rows.empty()) throw UsageError("no ground truth available");
        manifest = std::move(with_gt);
    } catch (const std::exception& e) {
        std::cerr << "uqseg curve: " << e.what() << '\n';
        return kExitUsage;
    }

    const std::size_t n = manifest.rows.size();
    std::vector<std::vector<double>> raws(n);
    std::vector<double> dsc_vs_gt(n, 0.0);
    const std::vector<std::string> errors = run_per_image(n, workers, [&](std::size_t i) {
        const auto& row = manifest.rows[i];
        if (row.reference_seg_path.empty())
            throw std::runtime_error("no reference segmentation listed (required for DSC)");
        const core::BinaryMask reference = io::read_mask(row.reference_seg_path);
        const core::BinaryMask gt = io::read_mask(row.gt_path);
        dsc_vs_gt[i] = core::dsc(reference, gt);
        raws[i] = evaluate_image(plan, row, false, io::PgmNormalization::per_image, out_dir);
    });
    const std::size_t failed = report_failures("curve", manifest, errors);
    if (failed == n) {
        std::cerr << "uqseg curve: all images failed\n";
        return kExitPartial;
    }

    try {
        std::map<std::string, double> dsc_by_id;
        for (std::size_t i = 0; i < n; ++i)
            if (errors[i].empty()) dsc_by_id[manifest.rows[i].image_id] = dsc_vs_gt[i];

        std::vector<reject::RetentionCurve> curves;
        const std::vector<std::string> labels = plan.labels();
        for (std::size_t m = 0; m < labels.size(); ++m) {
            std::vector<std::pair<std::string, double>> per_image;
            for (std::size_t i = 0; i < n; ++i)
                if (errors[i].empty()) per_image.emplace_back(manifest.rows[i].image_id, raws[i][m]);
            const std::vector<aggregate::ImageScore> scores =
                aggregate::score_set(std::move(per_image), labels[m]);
            std::vector<reject::EvalRecord> records;
            records.reserve(scores.size());
            for (const auto& s : scores)
                records.push_back({s.image_id, dsc_by_id.at(s.image_id), s.normalized});
            curves.push_back(reject::retention_curve(records, labels[m], fractions));
        }
        io::write_curves(out_dir / "curves.csv", curves);
        const reject::SummaryTable table = reject::summary_table(curves, opt.baseline);
        io::write_file(out_dir / "summary.csv", table.csv);
        io::write_file(out_dir / "summary.txt", table.text);
        std::cout << table.text;
    } catch (const std::exception& e) {
        std::cerr << "uqseg curve: " << e.what() << '\n';
        return kExitUsage;
    }
    return failed ? kExitPartial : kExitOk;
}

int cmd_tta_emit(const TtaEmitOptions& opt) {
    io::Manifest manifest;
    fs::path out_dir(opt.out_dir);
    std::size_t workers = 1;
    tta::AugmentConfig config;
    try {
        if (opt.samples == 0) throw UsageError("samples must be >= 1");
        config.max_rotation_deg = opt.max_rotation;
        config.noise_sigma = opt.noise_sigma;
        if (!(config.max_rotation_deg >= 0.0 && config.max_rotation_deg <= 20.0))
            throw UsageError("max rotation must be in [0,20] degrees");
        if (!(config.noise_sigma >= 0.0)) throw UsageError("noise sigma must be >= 0");
        workers = checked_workers(opt.workers);
        manifest = io::read_manifest(opt.manifest);
        fs::create_directories(out_dir);
    } catch (const std::exception& e) {
        std::cerr << "uqseg tta emit: " << e.what() << '\n';
        return kExitUsage;
    }

    const std::size_t n = manifest.rows.size();
    const std::vector<std::string> errors = run_per_image(n, workers, [&](std::size_t i) {
        const auto& row = manifest.rows[i];
        const core::SampleStack input = io::read_stack(row.stack_path);
        if (input.sample_count() != 1)
            throw std::runtime_error("input image must be a single-sample container (T=1)");
        const auto& image_map = input.sample(0);
        const std::vector<tta::TransformSpec> specs =
            tta::sample_transforms(opt.samples, derive_seed(opt.seed, i), config);
        io::write_sidecar(out_dir / (row.image_id + "_tta.jsonl"), specs);
        const tta::InputImage image(
            image_map.height(), image_map.width(),
            std::vector<double>(image_map.values().begin(), image_map.values().end()));
        for (std::size_t k = 0; k < specs.size(); ++k) {
            const tta::InputImage augmented = tta::apply_transform(image, specs[k]);
            std::vector<double> clamped(augmented.values().begin(), augmented.values().end());
            for (double& v : clamped) v = std::clamp(v, 0.0, 1.0);
            const core::ProbabilityMap map(augmented.height(), augmented.width(),
                                           std::move(clamped));
            io::write_stack(out_dir / (row.image_id + "_aug" + std::to_string(k) + ".uqs"),
                            core::SampleStack({map}));
        }
    });
    const std::size_t failed = report_failures("tta emit", manifest, errors);
    std::cerr << "uqseg tta emit: wrote " << (n - failed) << " of " << n
              << " augmented image sets; run the model on *_aug<k>.uqs and save each prediction "
                 "as <image_id>_aug<k>_pred.uqs, then run 'uqseg tta collect'\n";
    if (failed == n) return kExitPartial;
    return failed ? kExitPartial : kExitOk;
}

int cmd_tta_collect(const TtaCollectOptions& opt) {
    io::Manifest manifest;
    fs::path aug_dir(opt.aug_dir);
    fs::path out_dir(opt.out_dir);
    std::size_t workers = 1;
    try {
        workers = checked_workers(opt.workers);
        manifest = io::read_manifest(opt.manifest);
        if (!fs::is_directory(aug_dir))
            throw UsageError("augmentation directory not found: " + aug_dir.string());
        fs::create_directories(out_dir);
    } catch (const std::exception& e) {
        std::cerr << "uqseg tta collect: " << e.what() << '\n';
        return kExitUsage;
    }
    const fs::path pred_dir = opt.pred_dir.empty() ? aug_dir : fs::path(opt.pred_dir);

    const std::size_t n = manifest.rows.size();
    const std::vector<std::string> errors = run_per_image(n, workers, [&](std::size_t i) {
        const auto& row = manifest.rows[i];
        const std::vector<tta::TransformSpec> specs =
            io::read_sidecar(aug_dir / (row.image_id + "_tta.jsonl"));
        std::vector<std::pair<core::ProbabilityMap, tta::TransformSpec>> preds;
        preds.reserve(specs.size());
        for (std::size_t k = 0; k < specs.size(); ++k) {
            const fs::path pred_path =
                pred_dir / (row.image_id + "_aug" + std::to_string(k) + "_pred.uqs");
            if (!fs::exists(pred_path))
                throw std::runtime_error("augmentation " + std::to_string(k) +
                                         ": prediction file not found: " + pred_path.string());
            const core::SampleStack pred = io::read_stack(pred_path);
            if (pred.sample_count() != 1)
                throw std::runtime_error("augmentation " + std::to_string(k) +
                                         ": prediction must be a single-sample container (T=1)");
            preds.emplace_back(pred.sample(0), specs[k]);
        }
        const core::SampleStack stack = tta::assemble_stack(preds);
        io::write_stack(out_dir / (row.image_id + "_stack.uqs"), stack);
    });
    const std::size_t failed = report_failures("tta collect", manifest, errors);
    if (failed == n) {
        std::cerr << "uqseg tta collect: all images failed\n";
        return kExitPartial;
    }

    try {
        io::Manifest out_manifest;
        for (std::size_t i = 0; i < n; ++i) {
            if (!errors[i].empty()) continue;
            io::ManifestRow row;
            row.image_id = manifest.rows[i].image_id;
            row.stack_ref = manifest.rows[i].image_id + "_stack.uqs";
            row.stack_path = out_dir / row.stack_ref;
            out_manifest.rows.push_back(std::move(row));
        }
        io::write_manifest(out_dir / "manifest.csv", out_manifest);
        std::cerr << "uqseg tta collect: assembled " << out_manifest.rows.size() << " of " << n
                  << " stacks\n";
    } catch (const std::exception& e) {
        std::cerr << "uqseg tta collect: " << e.what() << '\n';
        return kExitUsage;
    }
    return failed ? kExitPartial : kExitOk;
}

int cmd_synth(const SynthOptions& opt) {
    synth::CohortConfig config;
    fs::path out_dir(opt.out_dir);
    std::size_t workers = 1;
    try {
        if (opt.n_images < 2)
            throw UsageError("cohort needs at least 2 images (set-wide normalization)");
        const std::vector<std::string> range = split_tokens(opt.severity_range);
        if (range.size() != 2) throw UsageError("severity range must be 'lo,hi'");
        config.severity_lo = parse_double(range[0], "severity range");
        config.severity_hi = parse_double(range[1], "severity range");
        if (!(config.severity_lo >= 0.0 && config.severity_lo <= config.severity_hi &&
              config.severity_hi <= 1.0))
            throw UsageError("severity range must satisfy 0 <= lo <= hi <= 1");
        if (opt.samples == 0) throw UsageError("samples must be >= 1");
        if (opt.size < 32) throw UsageError("size must be at least 32");
        config.n_images = opt.n_images;
        config.seed = opt.seed;
        config.samples = opt.samples;
        config.height = opt.size;
        config.width = opt.size;
        workers = checked_workers(opt.workers);
        fs::create_directories(out_dir);
    } catch (const std::exception& e) {
        std::cerr << "uqseg synth: " << e.what() << '\n';
        return kExitUsage;
    }

    const std::size_t n = config.n_images;
    std::vector<std::string> ids(n);
    std::vector<double> severities(n, 0.0);
    std::vector<std::string> errors(n);
    parallel_for(n, workers, [&](std::size_t i) {
        try {
            const synth::CohortImage image = synth::generate_cohort_image(config, i);
            io::write_stack(out_dir / (image.image_id + "_stack.uqs"), image.stack);
            io::write_mask(out_dir / (image.image_id + "_ref.uqsm"), image.reference);
            io::write_mask(out_dir / (image.image_id + "_gt.uqsm"), image.gt);
            ids[i] = image.image_id;
            severities[i] = image.severity;
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });
    std::size_t failed = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (errors[i].empty()) continue;
        std::cerr << "uqseg synth: image " << i << ": " << errors[i] << '\n';
        ++failed;
    }
    if (failed == n) {
        std::cerr << "uqseg synth: all images failed\n";
        return kExitPartial;
    }

    try {
        io::Manifest manifest;
        std::string severities_csv = "image_id,severity\n";
        for (std::size_t i = 0; i < n; ++i) {
            if (!errors[i].empty()) continue;
            io::ManifestRow row;
            row.image_id = ids[i];
            row.stack_ref = ids[i] + "_stack.uqs";
            row.reference_ref = ids[i] + "_ref.uqsm";
            row.gt_ref = ids[i] + "_gt.uqsm";
            row.stack_path = out_dir / row.stack_ref;
            row.reference_seg_path = out_dir / row.reference_ref;
            row.gt_path = out_dir / row.gt_ref;
            manifest.rows.push_back(std::move(row));
            severities_csv += ids[i];
            severities_csv += ',';
            severities_csv += format_real(severities[i]);
            severities_csv += '\n';
        }
        io::write_manifest(out_dir / "manifest.csv", manifest);
        io::write_file(out_dir / "severities.csv", severities_csv);
        std::cerr << "uqseg synth: generated " << manifest.rows.size() << " images in "
                  << out_dir.string() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "uqseg synth: " << e.what() << '\n';
        return kExitUsage;
    }
    return failed ? kExitPartial : kExitOk;
}

int cmd_render(const RenderOptions& opt) {
    io::Manifest manifest;
    MetricPlan plan;
    io::PgmNormalization norm = io::PgmNormalization::per_image;
    fs::path out_dir(opt.out_dir);
    std::size_t workers = 1;
    try {
        plan = parse_metrics(opt.metrics, false);
        norm = parse_norm(opt.norm);
        workers = checked_workers(opt.workers);
        manifest = io::read_manifest(opt.manifest);
        fs::create_directories(out_dir);
    } catch (const std::exception& e) {
        std::cerr << "uqseg render: " << e.what() << '\n';
        return kExitUsage;
    }

    const std::size_t n = manifest.rows.size();
    const std::vector<std::string> errors = run_per_image(n, workers, [&](std::size_t i) {
        evaluate_image(plan, manifest.rows[i], true, norm, out_dir);
    });
    const std::size_t failed = report_failures("render", manifest, errors);
    if (failed == n) {
        std::cerr << "uqseg render: all images failed\n";
        return kExitPartial;
    }
    std::cerr << "uqseg render: rendered " << (n - failed) << " of " << n << " images\n";
    return failed ? kExitPartial : kExitOk;
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"ensemble segmentation uncertainty toolkit"};
    app.require_subcommand(1);

    MetricsOptions metrics_opt;
    auto* metrics_cmd =
        app.add_subcommand("metrics", "Compute uncertainty maps and image-level scores");
    metrics_cmd->add_option("--manifest", metrics_opt.manifest, "input manifest CSV")->required();
    metrics_cmd->add_option("--out", metrics_opt.out_dir, "output directory")->required();
    metrics_cmd
        ->add_option("--metrics", metrics_opt.metrics,
                     "comma list: variance, entropy, mutual_information, atlas, atlas@<h>, all")
        ->capture_default_str();
    metrics_cmd->add_flag("--render", metrics_opt.render,
                          "also write per-metric PGM uncertainty maps");
    metrics_cmd
        ->add_option("--render-norm", metrics_opt.render_norm,
                     "PGM scaling: per_image or fixed_range")
        ->capture_default_str();
    metrics_cmd->add_option("--workers", metrics_opt.workers, "parallel worker threads")
        ->capture_default_str();

    FilterOptions filter_opt;
    auto* filter_cmd =
        app.add_subcommand("filter", "Split a manifest into retained and rejected sets");
    filter_cmd->add_option("--manifest", filter_opt.manifest, "input manifest CSV")->required();
    filter_cmd->add_option("--out", filter_opt.out_dir, "output directory")->required();
    filter_cmd->add_option("--metric", filter_opt.metric, "ranking metric")->capture_default_str();
    filter_cmd
        ->add_option("--fraction", filter_opt.fraction, "fraction of images to reject, in [0,1]")
        ->required();
    filter_cmd->add_option("--workers", filter_opt.workers, "parallel worker threads")
        ->capture_default_str();

    CurveOptions curve_opt;
    auto* curve_cmd =
        app.add_subcommand("curve", "Retention curves and a summary table against ground truth");
    curve_cmd->add_option("--manifest", curve_opt.manifest, "input manifest CSV")->required();
    curve_cmd->add_option("--out", curve_opt.out_dir, "output directory")->required();
    curve_cmd->add_option("--metrics", curve_opt.metrics, "metrics to curve")
        ->capture_default_str();
    curve_cmd
        ->add_option("--fractions", curve_opt.fractions,
                     "retained fractions, ascending, ending at 1.0")
        ->capture_default_str();
    curve_cmd->add_option("--baseline", curve_opt.baseline,
                          "reference DSC appended to the summary table");
    curve_cmd->add_option("--workers", curve_opt.workers, "parallel worker threads")
        ->capture_default_str();

    auto* tta_cmd = app.add_subcommand("tta", "Test-time augmentation workflow");
    tta_cmd->require_subcommand(1);

    TtaEmitOptions emit_opt;
    auto* emit_cmd = tta_cmd->add_subcommand(
        "emit", "Write augmented copies of each input image plus a transform sidecar");
    emit_cmd->add_option("--manifest", emit_opt.manifest,
                         "manifest whose stack_path column lists single-sample input images")
        ->required();
    emit_cmd->add_option("--out", emit_opt.out_dir, "output directory")->required();
    emit_cmd->add_option("--samples", emit_opt.samples, "augmentations per image (identity first)")
        ->capture_default_str();
    emit_cmd->add_option("--seed", emit_opt.seed, "master seed")->capture_default_str();
    emit_cmd->add_option("--noise-sigma", emit_opt.noise_sigma, "Gaussian noise sigma")
        ->capture_default_str();
    emit_cmd->add_option("--max-rotation", emit_opt.max_rotation, "rotation bound in degrees")
        ->capture_default_str();
    emit_cmd->add_option("--workers", emit_opt.workers, "parallel worker threads")
        ->capture_default_str();

    TtaCollectOptions collect_opt;
    auto* collect_cmd = tta_cmd->add_subcommand(
        "collect", "Inverse-align external predictions into sample stacks");
    collect_cmd->add_option("--manifest", collect_opt.manifest, "the manifest given to emit")
        ->required();
    collect_cmd->add_option("--aug-dir", collect_opt.aug_dir, "directory written by emit")
        ->required();
    collect_cmd
        ->add_option("--pred-dir", collect_opt.pred_dir,
                     "directory holding <image_id>_aug<k>_pred.uqs (default: --aug-dir)");
    collect_cmd->add_option("--out", collect_opt.out_dir, "output directory")->required();
    collect_cmd->add_option("--workers", collect_opt.workers, "parallel worker threads")
        ->capture_default_str();

    SynthOptions synth_opt;
    auto* synth_cmd =
        app.add_subcommand("synth", "Generate a synthetic phantom cohort with known severities");
    synth_cmd->add_option("--out", synth_opt.out_dir, "output directory")->required();
    synth_cmd->add_option("--n", synth_opt.n_images, "number of images")->capture_default_str();
    synth_cmd->add_option("--severity-range", synth_opt.severity_range, "lo,hi in [0,1]")
        ->capture_default_str();
    synth_cmd->add_option("--seed", synth_opt.seed, "master seed")->capture_default_str();
    synth_cmd->add_option("--samples", synth_opt.samples, "samples per stack")
        ->capture_default_str();
    synth_cmd->add_option("--size", synth_opt.size, "image height and width")
        ->capture_default_str();
    synth_cmd->add_option("--workers", synth_opt.workers, "parallel worker threads")
        ->capture_default_str();

    RenderOptions render_opt;
    auto* render_cmd =
        app.add_subcommand("render", "Render pixel-metric uncertainty maps as PGM images");
    render_cmd->add_option("--manifest", render_opt.manifest, "input manifest CSV")->required();
    render_cmd->add_option("--out", render_opt.out_dir, "output directory")->required();
    render_cmd->add_option("--metrics", render_opt.metrics, "pixel metrics to render")
        ->capture_default_str();
    render_cmd->add_option("--norm", render_opt.norm, "PGM scaling: per_image or fixed_range")
        ->capture_default_str();
    render_cmd->add_option("--workers", render_opt.workers, "parallel worker threads")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (*metrics_cmd) return cmd_metrics(metrics_opt);
    if (*filter_cmd) return cmd_filter(filter_opt);
    if (*curve_cmd) return cmd_curve(curve_opt);
    if (*tta_cmd) {
        if (*emit_cmd) return cmd_tta_emit(emit_opt);
        if (*collect_cmd) return cmd_tta_collect(collect_opt);
    }
    if (*synth_cmd) return cmd_synth(synth_opt);
    if (*render_cmd) return cmd_render(render_opt);
    return kExitUsage;
}

}  // namespace uqseg::cli
