#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#pragma GCC diagnostic push
#pragma GCC diagnostic ignored "-Wdeprecated-enum-enum-conversion"
#include <opencv2/imgcodecs.hpp>
#pragma GCC diagnostic pop

#include "shelfwatch/image.hpp"

namespace shelfwatch {

// JPEG decode via OpenCV imgcodecs. Throws on bytes that do not decode to a
// non-empty 8-bit image.
inline Image decode_jpeg(std::span<const std::uint8_t> bytes) {
    const cv::Mat raw(1, static_cast<int>(bytes.size()), CV_8UC1,
                      const_cast<std::uint8_t*>(bytes.data()));
    cv::Mat bgr = cv::imdecode(raw, cv::IMREAD_COLOR);
    if (bgr.empty()) throw std::invalid_argument("decode_jpeg: undecodable image data");

    Image img{bgr.cols, bgr.rows,
              std::vector<std::uint8_t>(static_cast<std::size_t>(bgr.cols) * bgr.rows * 3)};
    for (int y = 0; y < bgr.rows; ++y) {
        const auto* row = bgr.ptr<cv::Vec3b>(y);
        for (int x = 0; x < bgr.cols; ++x) {
            auto* dst = img.at(x, y);
            dst[0] = row[x][2];
            dst[1] = row[x][1];
            dst[2] = row[x][0];
        }
    }
    return img;
}

inline std::vector<std::uint8_t> encode_jpeg(const Image& img, int quality = 92) {
    if (!img.valid()) throw std::invalid_argument("encode_jpeg: invalid image");
    cv::Mat bgr(img.height, img.width, CV_8UC3);
    for (int y = 0; y < img.height; ++y) {
        auto* row = bgr.ptr<cv::Vec3b>(y);
        for (int x = 0; x < img.width; ++x) {
            const auto* src = img.at(x, y);
            row[x] = {src[2], src[1], src[0]};
        }
    }
    std::vector<std::uint8_t> bytes;
    if (!cv::imencode(".jpg", bgr, bytes, {cv::IMWRITE_JPEG_QUALITY, quality}))
        throw std::runtime_error("encode_jpeg: encoder failure");
    return bytes;
}

}  // namespace shelfwatch
