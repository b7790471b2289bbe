#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "uqseg/aggregate.hpp"
#include "uqseg/grid.hpp"
#include "uqseg/reject.hpp"
#include "uqseg/tta.hpp"

namespace uqseg::io {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// UQS1 stack container: "UQSS" magic, u32 version=1, u32 T, u32 H, u32 W
// (little-endian, 20-byte header), then T*H*W float32 little-endian values,
// sample-major then row-major. Reads clamp values within 1e-6 of [0,1] and
// reject anything further out. encode/decode work on in-memory byte strings;
// `origin` names the source in error messages.
std::string encode_stack(const core::SampleStack& stack);
core::SampleStack decode_stack(const std::string& bytes, const std::string& origin);
void write_stack(const std::filesystem::path& path, const core::SampleStack& stack);
core::SampleStack read_stack(const std::filesystem::path& path);

// UQSM mask container: "UQSK" magic, u32 version=1, u32 H, u32 W (16-byte
// header), then H*W bytes each 0 or 1.
std::string encode_mask(const core::BinaryMask& mask);
core::BinaryMask decode_mask(const std::string& bytes, const std::string& origin);
void write_mask(const std::filesystem::path& path, const core::BinaryMask& mask);
core::BinaryMask read_mask(const std::filesystem::path& path);

enum class PgmNormalization {
    per_image,    // [min,max] -> [0,255]; a flat map renders black
    fixed_range,  // [0,fixed_max] -> [0,255], for cross-image comparability
};

// Binary PGM (P5, maxval 255) rendering of an uncertainty map.
std::string render_pgm(const core::UncertaintyMap& umap, PgmNormalization norm,
                       double fixed_max = 0.0);

// One evaluated image on disk. The *_ref fields hold the path strings as
// written in the manifest (kept for rewriting); the *_path fields are
// resolved against the manifest's directory. reference and gt may be absent.
struct ManifestRow {
    std::string image_id;
    std::string stack_ref;
    std::string reference_ref;
    std::string gt_ref;
    std::filesystem::path stack_path;
    std::filesystem::path reference_seg_path;
    std::filesystem::path gt_path;
};

struct Manifest {
    std::vector<ManifestRow> rows;
};

// CSV with header image_id,stack_path,reference_seg_path,gt_path. Relative
// paths resolve against the manifest's directory; every referenced file must
// exist at load time.
Manifest read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const Manifest& manifest);

// scores CSV: image_id,metric,raw_score,normalized_score,rank
void write_scores(const std::filesystem::path& path,
                  const std::vector<aggregate::ImageScore>& scores);

// curve CSV: metric,fraction,n_retained,mean_dsc
void write_curves(const std::filesystem::path& path,
                  const std::vector<reject::RetentionCurve>& curves);

// JSON-lines transform sidecar: one record per augmentation with fields
// index, rotation_deg, hflip, noise_sigma, noise_seed.
void write_sidecar(const std::filesystem::path& path, const std::vector<tta::TransformSpec>& specs);
std::vector<tta::TransformSpec> read_sidecar(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& bytes);

}  // namespace uqseg::io
