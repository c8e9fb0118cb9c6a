#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "shelfwatch/catalog.hpp"

namespace shelfwatch {

// Ratio-test threshold schedule: tau_alpha = base - slope * alpha. With the
// default coefficients the threshold starts at 0.75 and relaxes toward 0.95
// as alpha decays.
struct RatioSchedule {
    double base = 0.95;
    double slope = 0.2;

    double tau(double alpha) const { return base - slope * alpha; }
};

inline double tau_alpha(double alpha, const RatioSchedule& schedule = {}) {
    return schedule.tau(alpha);
}

struct MatchParams {
    double alpha = 1.0;  // iteration parameter in (0, 1]
    RatioSchedule schedule;

    double tau() const { return schedule.tau(alpha); }
};

inline double descriptor_distance(const LocalFeature& a, const LocalFeature& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.descriptor.size(); ++i) {
        const double d = a.descriptor[i] - b.descriptor[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

// Brute-force 2-NN matching with the ratio test: for each model feature,
// find its two nearest scene descriptors and keep the nearest scene feature
// iff d1 < tau_alpha * d2. Returns sorted, de-duplicated indices into
// scene_feats. Fewer than two scene features means no ratio test is
// possible, so nothing matches.
inline std::vector<std::size_t> match_features(std::span<const LocalFeature> model_feats,
                                               std::span<const LocalFeature> scene_feats,
                                               double tau) {
    if (scene_feats.size() < 2) return {};

    std::vector<bool> kept(scene_feats.size(), false);
    for (const auto& mf : model_feats) {
        if (!scene_feats.empty() && mf.descriptor.size() != scene_feats.front().descriptor.size())
            throw std::invalid_argument("match_features: descriptor dimension mismatch");

        std::size_t best = 0;
        double d1 = std::numeric_limits<double>::infinity();
        double d2 = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < scene_feats.size(); ++i) {
            const double d = descriptor_distance(mf, scene_feats[i]);
            if (d < d1) {
                d2 = d1;
                d1 = d;
                best = i;
            } else if (d < d2) {
                d2 = d;
            }
        }
        if (d1 < tau * d2) kept[best] = true;
    }

    std::vector<std::size_t> indices;
    for (std::size_t i = 0; i < kept.size(); ++i)
        if (kept[i]) indices.push_back(i);
    return indices;
}

}  // namespace shelfwatch
