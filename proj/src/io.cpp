#include "uqseg/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "uqseg/format.hpp"

namespace uqseg::io {

namespace {

constexpr double kRangeTolerance = 1e-6;

void append_u32(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 24) & 0xff));
}

std::uint32_t read_u32(const std::string& bytes, std::size_t offset) {
    const auto b = [&](std::size_t i) {
        return static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[offset + i]));
    };
    return b(0) | (b(1) << 8) | (b(2) << 16) | (b(3) << 24);
}

[[noreturn]] void fail(const std::string& origin, const std::string& message) {
    throw IoError(origin + ": " + message);
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, const std::string& origin) {
    if (a != 0 && b > UINT64_MAX / a) fail(origin, "header dimensions overflow");
    return a * b;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        std::string line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        start = end + 1;
    }
    return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t end = line.find(',', start);
        if (end == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, end - start));
        start = end + 1;
    }
    return fields;
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError("read failed: " + path.string());
    return std::move(buffer).str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write file: " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw IoError("write failed: " + path.string());
}

std::string encode_stack(const core::SampleStack& stack) {
    if (stack.sample_count() > UINT32_MAX || stack.height() > UINT32_MAX ||
        stack.width() > UINT32_MAX)
        throw IoError("stack dimensions exceed the container's 32-bit fields");
    std::string out;
    out.reserve(20 + 4 * stack.sample_count() * stack.pixel_count());
    out += "UQSS";
    append_u32(out, 1);
    append_u32(out, static_cast<std::uint32_t>(stack.sample_count()));
    append_u32(out, static_cast<std::uint32_t>(stack.height()));
    append_u32(out, static_cast<std::uint32_t>(stack.width()));
    for (std::size_t t = 0; t < stack.sample_count(); ++t) {
        const auto values = stack.sample(t).values();
        for (const double v : values)
            append_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    }
    return out;
}

core::SampleStack decode_stack(const std::string& bytes, const std::string& origin) {
    if (bytes.size() < 20) fail(origin, "truncated header (need 20 bytes)");
    if (bytes.compare(0, 4, "UQSS") != 0) fail(origin, "bad magic at offset 0");
    const std::uint32_t version = read_u32(bytes, 4);
    if (version != 1) fail(origin, "unsupported version " + std::to_string(version));
    const std::uint64_t t_count = read_u32(bytes, 8);
    const std::uint64_t height = read_u32(bytes, 12);
    const std::uint64_t width = read_u32(bytes, 16);
    if (t_count == 0 || height == 0 || width == 0) fail(origin, "zero dimension in header");
    const std::uint64_t value_count =
        checked_mul(checked_mul(t_count, height, origin), width, origin);
    const std::uint64_t payload = checked_mul(value_count, 4, origin);
    if (bytes.size() != 20 + payload)
        fail(origin, "payload size mismatch: header implies " + std::to_string(20 + payload) +
                         " bytes, file has " + std::to_string(bytes.size()));

    std::vector<core::ProbabilityMap> samples;
    samples.reserve(t_count);
    std::size_t offset = 20;
    for (std::uint64_t t = 0; t < t_count; ++t) {
        std::vector<double> values(height * width);
        for (std::uint64_t i = 0; i < height * width; ++i, offset += 4) {
            const float f = std::bit_cast<float>(read_u32(bytes, offset));
            double v = f;
            if (!std::isfinite(v))
                fail(origin, "non-finite value at sample " + std::to_string(t) + " pixel " +
                                 std::to_string(i));
            if (v < 0.0 || v > 1.0) {
                if (v >= -kRangeTolerance && v <= 1.0 + kRangeTolerance) {
                    v = std::clamp(v, 0.0, 1.0);
                } else {
                    fail(origin, "value out of [0,1] beyond tolerance at sample " +
                                     std::to_string(t) + " pixel " + std::to_string(i));
                }
            }
            values[i] = v;
        }
        samples.emplace_back(height, width, std::move(values));
    }
    return core::SampleStack(std::move(samples));
}

void write_stack(const std::filesystem::path& path, const core::SampleStack& stack) {
    write_file(path, encode_stack(stack));
}

core::SampleStack read_stack(const std::filesystem::path& path) {
    return decode_stack(read_file(path), path.string());
}

std::string encode_mask(const core::BinaryMask& mask) {
    if (mask.height() > UINT32_MAX || mask.width() > UINT32_MAX)
        throw IoError("mask dimensions exceed the container's 32-bit fields");
    std::string out;
    out.reserve(16 + mask.pixel_count());
    out += "UQSK";
    append_u32(out, 1);
    append_u32(out, static_cast<std::uint32_t>(mask.height()));
    append_u32(out, static_cast<std::uint32_t>(mask.width()));
    for (const std::uint8_t v : mask.values()) out.push_back(static_cast<char>(v));
    return out;
}

core::BinaryMask decode_mask(const std::string& bytes, const std::string& origin) {
    if (bytes.size() < 16) fail(origin, "truncated header (need 16 bytes)");
    if (bytes.compare(0, 4, "UQSK") != 0) fail(origin, "bad magic at offset 0");
    const std::uint32_t version = read_u32(bytes, 4);
    if (version != 1) fail(origin, "unsupported version " + std::to_string(version));
    const std::uint64_t height = read_u32(bytes, 8);
    const std::uint64_t width = read_u32(bytes, 12);
    if (height == 0 || width == 0) fail(origin, "zero dimension in header");
    const std::uint64_t payload = checked_mul(height, width, origin);
    if (bytes.size() != 16 + payload)
        fail(origin, "payload size mismatch: header implies " + std::to_string(16 + payload) +
                         " bytes, file has " + std::to_string(bytes.size()));
    std::vector<std::uint8_t> values(payload);
    for (std::uint64_t i = 0; i < payload; ++i) {
        const auto b = static_cast<unsigned char>(bytes[16 + i]);
        if (b > 1) fail(origin, "non-binary byte at pixel " + std::to_string(i));
        values[i] = b;
    }
    return core::BinaryMask(height, width, std::move(values));
}

void write_mask(const std::filesystem::path& path, const core::BinaryMask& mask) {
    write_file(path, encode_mask(mask));
}

core::BinaryMask read_mask(const std::filesystem::path& path) {
    return decode_mask(read_file(path), path.string());
}

std::string render_pgm(const core::UncertaintyMap& umap, PgmNormalization norm, double fixed_max) {
    double lo = 0.0;
    double scale = 0.0;
    if (norm == PgmNormalization::per_image) {
        const auto values = umap.values();
        const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
        lo = *lo_it;
        scale = *hi_it > *lo_it ? 1.0 / (*hi_it - *lo_it) : 0.0;
    } else {
        if (!(fixed_max > 0.0))
            throw std::invalid_argument("render_pgm: fixed_range needs a positive maximum");
        scale = 1.0 / fixed_max;
    }
    std::string out = "P5\n" + std::to_string(umap.width()) + " " + std::to_string(umap.height()) +
                      "\n255\n";
    out.reserve(out.size() + umap.pixel_count());
    for (const double v : umap.values()) {
        const double unit = std::clamp((v - lo) * scale, 0.0, 1.0);
        out.push_back(static_cast<char>(std::lround(unit * 255.0)));
    }
    return out;
}

Manifest read_manifest(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    const std::vector<std::string> lines = split_lines(text);
    const std::string expected_header = "image_id,stack_path,reference_seg_path,gt_path";
    if (lines.empty() || lines.front() != expected_header)
        throw IoError("manifest " + path.string() + ": missing header '" + expected_header + "'");

    const std::filesystem::path base = path.parent_path();
    const auto resolve = [&](const std::string& ref) -> std::filesystem::path {
        if (ref.empty()) return {};
        std::filesystem::path p(ref);
        return p.is_absolute() ? p : base / p;
    };

    Manifest manifest;
    std::set<std::string> seen;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (lines[li].empty()) continue;
        const std::vector<std::string> fields = split_fields(lines[li]);
        if (fields.size() != 4)
            throw IoError("manifest " + path.string() + " line " + std::to_string(li + 1) +
                          ": expected 4 comma-separated fields");
        ManifestRow row;
        row.image_id = fields[0];
        row.stack_ref = fields[1];
        row.reference_ref = fields[2];
        row.gt_ref = fields[3];
        if (row.image_id.empty())
            throw IoError("manifest " + path.string() + " line " + std::to_string(li + 1) +
                          ": empty image_id");
        if (!seen.insert(row.image_id).second)
            throw IoError("manifest " + path.string() + ": duplicate image_id '" + row.image_id +
                          "'");
        if (row.stack_ref.empty())
            throw IoError("manifest " + path.string() + ": image '" + row.image_id +
                          "': empty stack path");
        row.stack_path = resolve(row.stack_ref);
        row.reference_seg_path = resolve(row.reference_ref);
        row.gt_path = resolve(row.gt_ref);
        const auto check_exists = [&](const std::filesystem::path& p, const char* what) {
            if (!p.empty() && !std::filesystem::exists(p))
                throw IoError("manifest " + path.string() + ": image '" + row.image_id + "': " +
                              what + " file not found: " + p.string());
        };
        check_exists(row.stack_path, "stack");
        check_exists(row.reference_seg_path, "reference segmentation");
        check_exists(row.gt_path, "ground truth");
        manifest.rows.push_back(std::move(row));
    }
    if (manifest.rows.empty())
        throw IoError("manifest " + path.string() + ": no images");
    return manifest;
}

void write_manifest(const std::filesystem::path& path, const Manifest& manifest) {
    std::string out = "image_id,stack_path,reference_seg_path,gt_path\n";
    for (const auto& row : manifest.rows) {
        out += row.image_id;
        out += ',';
        out += row.stack_ref;
        out += ',';
        out += row.reference_ref;
        out += ',';
        out += row.gt_ref;
        out += '\n';
    }
    write_file(path, out);
}

void write_scores(const std::filesystem::path& path,
                  const std::vector<aggregate::ImageScore>& scores) {
    std::string out = "image_id,metric,raw_score,normalized_score,rank\n";
    for (const auto& s : scores) {
        out += s.image_id;
        out += ',';
        out += s.metric;
        out += ',';
        out += format_real(s.raw);
        out += ',';
        out += format_real(s.normalized);
        out += ',';
        out += std::to_string(s.rank);
        out += '\n';
    }
    write_file(path, out);
}

void write_curves(const std::filesystem::path& path,
                  const std::vector<reject::RetentionCurve>& curves) {
    std::string out = "metric,fraction,n_retained,mean_dsc\n";
    for (const auto& curve : curves) {
        for (const auto& point : curve.points) {
            out += curve.metric;
            out += ',';
            out += format_real(point.retained_fraction);
            out += ',';
            out += std::to_string(point.n_retained);
            out += ',';
            out += format_real(point.mean_dsc);
            out += '\n';
        }
    }
    write_file(path, out);
}

void write_sidecar(const std::filesystem::path& path,
                   const std::vector<tta::TransformSpec>& specs) {
    std::string out;
    for (std::size_t k = 0; k < specs.size(); ++k) {
        nlohmann::json record;
        record["index"] = k;
        record["rotation_deg"] = specs[k].rotation_deg;
        record["hflip"] = specs[k].hflip;
        record["noise_sigma"] = specs[k].noise_sigma;
        record["noise_seed"] = specs[k].noise_seed;
        out += record.dump();
        out += '\n';
    }
    write_file(path, out);
}

std::vector<tta::TransformSpec> read_sidecar(const std::filesystem::path& path) {
    const std::vector<std::string> lines = split_lines(read_file(path));
    std::vector<tta::TransformSpec> specs;
    std::vector<bool> filled;
    for (std::size_t li = 0; li < lines.size(); ++li) {
        if (lines[li].empty()) continue;
        nlohmann::json record;
        try {
            record = nlohmann::json::parse(lines[li]);
            const auto index = record.at("index").get<std::size_t>();
            tta::TransformSpec spec;
            spec.rotation_deg = record.at("rotation_deg").get<double>();
            spec.hflip = record.at("hflip").get<bool>();
            spec.noise_sigma = record.at("noise_sigma").get<double>();
            spec.noise_seed = record.at("noise_seed").get<std::uint64_t>();
            if (index >= specs.size()) {
                specs.resize(index + 1);
                filled.resize(index + 1, false);
            }
            if (filled[index])
                throw IoError("sidecar " + path.string() + ": duplicate index " +
                              std::to_string(index));
            specs[index] = spec;
            filled[index] = true;
        } catch (const IoError&) {
            throw;
        } catch (const std::exception& e) {
            throw IoError("sidecar " + path.string() + " line " + std::to_string(li + 1) + ": " +
                          e.what());
        }
    }
    if (specs.empty()) throw IoError("sidecar " + path.string() + ": no transform records");
    for (std::size_t k = 0; k < filled.size(); ++k) {
        if (!filled[k])
            throw IoError("sidecar " + path.string() + ": missing record for index " +
                          std::to_string(k));
    }
    return specs;
}

}  // namespace uqseg::io
