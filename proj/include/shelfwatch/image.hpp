#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "shelfwatch/change.hpp"

namespace shelfwatch {

// Interleaved 8-bit RGB image, row-major.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // width * height * 3

    static Image filled(int w, int h, std::array<std::uint8_t, 3> rgb) {
        Image img{w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h * 3)};
        for (std::size_t i = 0; i < img.pixels.size(); i += 3) {
            img.pixels[i] = rgb[0];
            img.pixels[i + 1] = rgb[1];
            img.pixels[i + 2] = rgb[2];
        }
        return img;
    }

    bool valid() const {
        return width > 0 && height > 0 &&
               pixels.size() == static_cast<std::size_t>(width) * height * 3;
    }

    std::uint8_t* at(int x, int y) { return &pixels[(static_cast<std::size_t>(y) * width + x) * 3]; }
    const std::uint8_t* at(int x, int y) const {
        return &pixels[(static_cast<std::size_t>(y) * width + x) * 3];
    }

    void fill_rect(int x0, int y0, int x1, int y1, std::array<std::uint8_t, 3> rgb) {
        x0 = std::clamp(x0, 0, width);
        x1 = std::clamp(x1, 0, width);
        y0 = std::clamp(y0, 0, height);
        y1 = std::clamp(y1, 0, height);
        for (int y = y0; y < y1; ++y)
            for (int x = x0; x < x1; ++x) {
                auto* p = at(x, y);
                p[0] = rgb[0];
                p[1] = rgb[1];
                p[2] = rgb[2];
            }
    }
};

inline GrayFrame to_gray(const Image& img) {
    GrayFrame g{img.width, img.height, std::vector<std::uint8_t>(static_cast<std::size_t>(img.width) * img.height)};
    for (std::size_t i = 0, j = 0; i < g.pixels.size(); ++i, j += 3) {
        const double lum = 0.299 * img.pixels[j] + 0.587 * img.pixels[j + 1] + 0.114 * img.pixels[j + 2];
        g.pixels[i] = static_cast<std::uint8_t>(std::clamp(std::lround(lum), 0L, 255L));
    }
    return g;
}

// Bilinear resize with pixel-center sampling.
inline Image resize_bilinear(const Image& src, int out_w, int out_h) {
    if (!src.valid()) throw std::invalid_argument("resize_bilinear: invalid image");
    if (out_w <= 0 || out_h <= 0) throw std::invalid_argument("resize_bilinear: non-positive target size");

    Image out{out_w, out_h, std::vector<std::uint8_t>(static_cast<std::size_t>(out_w) * out_h * 3)};
    const double sx = static_cast<double>(src.width) / out_w;
    const double sy = static_cast<double>(src.height) / out_h;
    for (int y = 0; y < out_h; ++y) {
        const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, static_cast<double>(src.height - 1));
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, src.height - 1);
        const double wy = fy - y0;
        for (int x = 0; x < out_w; ++x) {
            const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, static_cast<double>(src.width - 1));
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, src.width - 1);
            const double wx = fx - x0;
            auto* dst = out.at(x, y);
            for (int c = 0; c < 3; ++c) {
                const double v = (1 - wy) * ((1 - wx) * src.at(x0, y0)[c] + wx * src.at(x1, y0)[c]) +
                                 wy * ((1 - wx) * src.at(x0, y1)[c] + wx * src.at(x1, y1)[c]);
                dst[c] = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
            }
        }
    }
    return out;
}

// Gaussian denoise on RGB, edge-replicated, one channel at a time.
inline Image gaussian_blur(const Image& src, const BlurSpec& spec) {
    if (!src.valid()) throw std::invalid_argument("gaussian_blur: invalid image");
    const auto kernel = gaussian_kernel(spec);
    const int r = spec.size / 2;

    Image out{src.width, src.height, std::vector<std::uint8_t>(src.pixels.size())};
    for (int y = 0; y < src.height; ++y)
        for (int x = 0; x < src.width; ++x) {
            double acc[3] = {0.0, 0.0, 0.0};
            for (int dy = -r; dy <= r; ++dy) {
                const int sy = std::clamp(y + dy, 0, src.height - 1);
                for (int dx = -r; dx <= r; ++dx) {
                    const int sx = std::clamp(x + dx, 0, src.width - 1);
                    const double w = kernel[static_cast<std::size_t>(dy + r) * spec.size + (dx + r)];
                    const auto* p = src.at(sx, sy);
                    acc[0] += w * p[0];
                    acc[1] += w * p[1];
                    acc[2] += w * p[2];
                }
            }
            auto* dst = out.at(x, y);
            for (int c = 0; c < 3; ++c)
                dst[c] = static_cast<std::uint8_t>(std::clamp(std::lround(acc[c]), 0L, 255L));
        }
    return out;
}

// --- Portable pixmap I/O (binary P5/P6), used by tests and the synthetic
// --- dataset writer.

inline void write_pgm(const GrayFrame& frame, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_pgm: cannot open " + path);
    out << "P5\n" << frame.width << " " << frame.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(frame.pixels.data()),
              static_cast<std::streamsize>(frame.pixels.size()));
}

inline void write_ppm(const Image& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_ppm: cannot open " + path);
    out << "P6\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()),
              static_cast<std::streamsize>(img.pixels.size()));
}

namespace detail {
inline int read_pnm_token(std::istream& in) {
    // skips whitespace and '#' comments between header fields
    while (true) {
        int c = in.peek();
        if (c == '#') {
            std::string line;
            std::getline(in, line);
        } else if (std::isspace(c)) {
            in.get();
        } else {
            break;
        }
    }
    int value = 0;
    in >> value;
    return value;
}
}  // namespace detail

inline GrayFrame read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_pgm: cannot open " + path);
    std::string magic;
    in >> magic;
    if (magic != "P5") throw std::runtime_error("read_pgm: not a binary PGM: " + path);
    const int w = detail::read_pnm_token(in);
    const int h = detail::read_pnm_token(in);
    const int maxval = detail::read_pnm_token(in);
    if (w <= 0 || h <= 0 || maxval != 255) throw std::runtime_error("read_pgm: unsupported header in " + path);
    in.get();  // single whitespace after maxval
    GrayFrame frame{w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h)};
    in.read(reinterpret_cast<char*>(frame.pixels.data()), static_cast<std::streamsize>(frame.pixels.size()));
    if (!in) throw std::runtime_error("read_pgm: truncated pixel data in " + path);
    return frame;
}

inline Image read_ppm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_ppm: cannot open " + path);
    std::string magic;
    in >> magic;
    if (magic != "P6") throw std::runtime_error("read_ppm: not a binary PPM: " + path);
    const int w = detail::read_pnm_token(in);
    const int h = detail::read_pnm_token(in);
    const int maxval = detail::read_pnm_token(in);
    if (w <= 0 || h <= 0 || maxval != 255) throw std::runtime_error("read_ppm: unsupported header in " + path);
    in.get();
    Image img{w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h * 3)};
    in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
    if (!in) throw std::runtime_error("read_ppm: truncated pixel data in " + path);
    return img;
}

}  // namespace shelfwatch
