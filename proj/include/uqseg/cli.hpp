#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

namespace uqseg::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;       // everything processed
inline constexpr int kExitPartial = 1;  // some images failed, the rest were processed
inline constexpr int kExitUsage = 2;    // bad flags, bad config, unreadable inputs

struct MetricsOptions {
    std::string manifest;
    std::string out_dir;
    std::string metrics = "all";
    bool render = false;
    std::string render_norm = "per_image";
    std::size_t workers = 1;
};

struct FilterOptions {
    std::string manifest;
    std::string out_dir;
    std::string metric = "entropy";
    double fraction = 0.0;
    std::size_t workers = 1;
};

struct CurveOptions {
    std::string manifest;
    std::string out_dir;
    std::string metrics = "all";
    std::string fractions = "0.2,0.4,0.6,0.8,1.0";
    std::optional<double> baseline;
    std::size_t workers = 1;
};

struct TtaEmitOptions {
    std::string manifest;
    std::string out_dir;
    std::size_t samples = 50;
    std::uint64_t seed = 1234;
    double noise_sigma = 0.01;
    double max_rotation = 20.0;
    std::size_t workers = 1;
};

struct TtaCollectOptions {
    std::string manifest;
    std::string aug_dir;
    std::string pred_dir;  // empty: same as aug_dir
    std::string out_dir;
    std::size_t workers = 1;
};

struct SynthOptions {
    std::string out_dir;
    std::size_t n_images = 200;
    std::string severity_range = "0,0.9";
    std::uint64_t seed = 42;
    std::size_t samples = 12;
    std::size_t size = 128;
    std::size_t workers = 1;
};

struct RenderOptions {
    std::string manifest;
    std::string out_dir;
    std::string metrics = "all";
    std::string norm = "per_image";
    std::size_t workers = 1;
};

int cmd_metrics(const MetricsOptions& opt);
int cmd_filter(const FilterOptions& opt);
int cmd_curve(const CurveOptions& opt);
int cmd_tta_emit(const TtaEmitOptions& opt);
int cmd_tta_collect(const TtaCollectOptions& opt);
int cmd_synth(const SynthOptions& opt);
int cmd_render(const RenderOptions& opt);

// Parses argv and dispatches to the subcommands above. Returns the process
// exit code; --help prints to stdout and returns 0, parse failures return 2.
int run_cli(int argc, const char* const* argv);

}  // namespace uqseg::cli
