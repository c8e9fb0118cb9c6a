#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace shelfwatch {

// 8-bit grayscale frame, row-major. QVGA (320x240) is the canonical capture
// size but any dimensions are accepted.
struct GrayFrame {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    static GrayFrame filled(int w, int h, std::uint8_t value) {
        return {w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h, value)};
    }

    std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    std::size_t pixel_count() const { return pixels.size(); }

    bool valid() const {
        return width > 0 && height > 0 && pixels.size() == static_cast<std::size_t>(width) * height;
    }
};

struct BlurSpec {
    int size = 5;       // odd, >= 3
    double sigma = 1.0;
};

struct ChangeParams {
    double pixel_threshold = 0.15;            // tau_p, radians, in (0, pi/4)
    double change_fraction_threshold = 0.02;  // tau_c, fraction of all pixels
    BlurSpec blur;
};

// Normalized 2-D Gaussian kernel, size x size, row-major.
inline std::vector<double> gaussian_kernel(const BlurSpec& spec) {
    if (spec.size < 3 || spec.size % 2 == 0)
        throw std::invalid_argument("gaussian_kernel: size must be odd and >= 3");
    if (spec.sigma <= 0.0)
        throw std::invalid_argument("gaussian_kernel: sigma must be positive");
    const int r = spec.size / 2;
    std::vector<double> k(static_cast<std::size_t>(spec.size) * spec.size);
    double sum = 0.0;
    for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx) {
            const double w = std::exp(-(dx * dx + dy * dy) / (2.0 * spec.sigma * spec.sigma));
            k[static_cast<std::size_t>(dy + r) * spec.size + (dx + r)] = w;
            sum += w;
        }
    for (double& w : k) w /= sum;
    return k;
}

// Gaussian blur with edge replication at the borders. Accumulates in double
// and rounds once per pixel.
inline GrayFrame preprocess(const GrayFrame& frame, const ChangeParams& params) {
    if (!frame.valid())
        throw std::invalid_argument("preprocess: empty or inconsistent frame");
    const auto kernel = gaussian_kernel(params.blur);
    const int r = params.blur.size / 2;

    GrayFrame out{frame.width, frame.height, std::vector<std::uint8_t>(frame.pixel_count())};
    for (int y = 0; y < frame.height; ++y) {
        for (int x = 0; x < frame.width; ++x) {
            double acc = 0.0;
            for (int dy = -r; dy <= r; ++dy) {
                const int sy = std::clamp(y + dy, 0, frame.height - 1);
                for (int dx = -r; dx <= r; ++dx) {
                    const int sx = std::clamp(x + dx, 0, frame.width - 1);
                    acc += kernel[static_cast<std::size_t>(dy + r) * params.blur.size + (dx + r)] *
                           frame.at(sx, sy);
                }
            }
            out.at(x, y) = static_cast<std::uint8_t>(std::clamp(std::lround(acc), 0L, 255L));
        }
    }
    return out;
}

// Per-pixel change measure on the intensity ratio: 0 for equal pixels,
// approaching pi/4 as the ratio diverges. Both pixels zero means no
// evidence of change, so 0.
inline double pixel_change_measure(double a, double b) {
    if (a == 0.0 && b == 0.0) return 0.0;
    return std::abs(std::numbers::pi / 4.0 - std::atan2(a, b));
}

struct ChangeDecision {
    bool changed = false;
    double changed_fraction = 0.0;
};

// Fraction of pixels whose change measure exceeds tau_p; the shelf counts
// as changed when that fraction reaches tau_c. Frames must be preprocessed
// and equal-sized.
inline ChangeDecision detect_change(const GrayFrame& reference, const GrayFrame& live,
                                    const ChangeParams& params) {
    if (!reference.valid() || !live.valid())
        throw std::invalid_argument("detect_change: invalid frame");
    if (reference.width != live.width || reference.height != live.height)
        throw std::invalid_argument("detect_change: frame size mismatch");

    std::size_t over = 0;
    for (std::size_t i = 0; i < reference.pixel_count(); ++i)
        if (pixel_change_measure(live.pixels[i], reference.pixels[i]) > params.pixel_threshold)
            ++over;

    const double fraction = static_cast<double>(over) / static_cast<double>(reference.pixel_count());
    return {fraction >= params.change_fraction_threshold, fraction};
}

}  // namespace shelfwatch
