#pragma once

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "shelfwatch/image.hpp"
#include "shelfwatch/serial.hpp"

namespace shelfwatch {

inline std::string sha256_hex(std::span<const std::uint8_t> bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256_hex: digest failure");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

// One rack strip: the source row range it was cut from and the strip
// resized to the canonical working height.
struct RackSplit {
    int source_row_begin = 0;
    int source_row_end = 0;  // exclusive
    Image image;
};

// Cuts the shelf view into rack_count horizontal strips that tile the
// source exactly, then resizes each strip to the working height preserving
// aspect ratio. A 1600x1200 view split three ways yields 1600x400 racks.
inline std::vector<RackSplit> split_racks(const Image& shelf, int rack_count, int target_height = 400) {
    if (!shelf.valid()) throw std::invalid_argument("split_racks: invalid image");
    if (rack_count < 1) throw std::invalid_argument("split_racks: rack_count must be >= 1");
    if (rack_count > shelf.height)
        throw std::invalid_argument("split_racks: more racks than image rows");

    std::vector<RackSplit> racks;
    racks.reserve(rack_count);
    for (int i = 0; i < rack_count; ++i) {
        const int row_begin = static_cast<int>(static_cast<std::int64_t>(i) * shelf.height / rack_count);
        const int row_end = static_cast<int>(static_cast<std::int64_t>(i + 1) * shelf.height / rack_count);
        const int strip_h = row_end - row_begin;

        Image strip{shelf.width, strip_h, std::vector<std::uint8_t>(static_cast<std::size_t>(shelf.width) * strip_h * 3)};
        std::copy_n(shelf.at(0, row_begin), strip.pixels.size(), strip.pixels.data());

        const int out_w = static_cast<int>(std::lround(static_cast<double>(shelf.width) * target_height / strip_h));
        racks.push_back({row_begin, row_end,
                         strip_h == target_height ? std::move(strip) : resize_bilinear(strip, out_w, target_height)});
    }
    return racks;
}

// Affine map between rack pixels and detector-input pixels:
// detector = rack * scale + (dx, dy).
struct LetterboxTransform {
    double scale = 1.0;
    double dx = 0.0;
    double dy = 0.0;

    Point to_detector(Point p) const { return {p.x * scale + dx, p.y * scale + dy}; }
    Point to_rack(Point p) const { return {(p.x - dx) / scale, (p.y - dy) / scale}; }
    Box to_rack(const Box& b) const { return {to_rack(b.tl), to_rack(b.br)}; }
    Box to_detector(const Box& b) const { return {to_detector(b.tl), to_detector(b.br)}; }
};

struct PaddedImage {
    Image image;
    LetterboxTransform transform;
};

// Denoises the rack, scales it to the detector's input width and letterboxes
// it with symmetric top/bottom padding into a square. The returned transform
// maps detector boxes back to rack pixels.
inline PaddedImage pad_for_detector(const Image& rack, int target_side = 640,
                                    const BlurSpec& denoise = {}) {
    if (!rack.valid()) throw std::invalid_argument("pad_for_detector: invalid image");
    if (rack.height > rack.width)
        throw std::invalid_argument("pad_for_detector: rack must be wider than tall");

    const Image blurred = gaussian_blur(rack, denoise);
    const double scale = static_cast<double>(target_side) / rack.width;
    const int scaled_h = static_cast<int>(std::lround(rack.height * scale));
    const Image scaled = (rack.width == target_side && scaled_h == rack.height)
                             ? blurred
                             : resize_bilinear(blurred, target_side, scaled_h);

    const int pad_total = target_side - scaled_h;
    const int pad_top = pad_total / 2;

    Image out = Image::filled(target_side, target_side, {114, 114, 114});
    for (int y = 0; y < scaled_h; ++y)
        std::copy_n(scaled.at(0, y), static_cast<std::size_t>(target_side) * 3, out.at(0, y + pad_top));

    return {std::move(out), {scale, 0.0, static_cast<double>(pad_top)}};
}

// Append-only content-addressed object store plus a line-delimited report
// log. Object bytes are never rewritten; duplicate content maps to the same
// path. Reports reference images by content hash.
class ObjectStore {
public:
    explicit ObjectStore(std::filesystem::path root) : root_(std::move(root)) {
        std::filesystem::create_directories(root_ / "objects");
        load_reports();
    }

    // Returns the content hash; writes the object only if new.
    std::string put(std::span<const std::uint8_t> bytes) {
        const std::string hash = sha256_hex(bytes);
        const auto path = object_path(hash);
        if (!std::filesystem::exists(path)) {
            std::filesystem::create_directories(path.parent_path());
            const auto tmp = path.string() + ".tmp";
            {
                std::ofstream out(tmp, std::ios::binary);
                out.write(reinterpret_cast<const char*>(bytes.data()),
                          static_cast<std::streamsize>(bytes.size()));
            }
            std::filesystem::rename(tmp, path);
        }
        return hash;
    }

    bool contains(const std::string& hash) const { return std::filesystem::exists(object_path(hash)); }

    std::vector<std::uint8_t> get(const std::string& hash) const {
        std::ifstream in(object_path(hash), std::ios::binary);
        if (!in) throw std::runtime_error("object store: missing object " + hash);
        return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    }

    void append_report(const std::string& job_id, const json& report) {
        std::lock_guard lock(mutex_);
        std::ofstream out(root_ / "reports.jsonl", std::ios::app);
        json line = report;
        line["job_id"] = job_id;
        out << line.dump() << "\n";
        reports_[job_id] = std::move(line);
    }

    std::optional<json> find_report(const std::string& job_id) const {
        std::lock_guard lock(mutex_);
        auto it = reports_.find(job_id);
        if (it == reports_.end()) return std::nullopt;
        return it->second;
    }

    const std::filesystem::path& root() const { return root_; }

private:
    std::filesystem::path object_path(const std::string& hash) const {
        return root_ / "objects" / hash.substr(0, 2) / hash;
    }

    void load_reports() {
        std::ifstream in(root_ / "reports.jsonl");
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            json j = json::parse(line, nullptr, false);
            if (j.is_discarded() || !j.contains("job_id")) continue;
            reports_[j["job_id"].get<std::string>()] = std::move(j);
        }
    }

    std::filesystem::path root_;
    mutable std::mutex mutex_;
    std::map<std::string, json> reports_;
};

}  // namespace shelfwatch
