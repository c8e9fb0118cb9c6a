#pragma once

#include <algorithm>
#include <numeric>
#include <span>
#include <vector>

#include "shelfwatch/catalog.hpp"
#include "shelfwatch/detection.hpp"
#include "shelfwatch/geometry.hpp"

namespace shelfwatch {

// Candidate filtering for one product: keep boxes whose width, height and
// aspect ratio all lie within [half, twice] of the product's reference
// values, then drop survivors scoring under 5% of the best surviving
// confidence. The confidence cut is computed over geometry survivors only.
inline std::vector<CandidateBox> filter_boxes(std::span<const CandidateBox> candidates,
                                              const ProductModel& model) {
    std::vector<CandidateBox> survivors;
    const double aspect_ref = model.aspect_ref();
    for (const auto& c : candidates) {
        if (c.width <= 0.0 || c.height <= 0.0) continue;
        if (c.width < model.width_ref * 0.5 || c.width > model.width_ref * 2.0) continue;
        if (c.height < model.height_ref * 0.5 || c.height > model.height_ref * 2.0) continue;
        const double aspect = c.aspect();
        if (aspect < aspect_ref * 0.5 || aspect > aspect_ref * 2.0) continue;
        survivors.push_back(c);
    }
    if (survivors.empty()) return survivors;

    double max_confidence = 0.0;
    for (const auto& c : survivors) max_confidence = std::max(max_confidence, c.confidence);
    const double tau_b = 0.05 * max_confidence;

    std::erase_if(survivors, [tau_b](const CandidateBox& c) { return c.confidence < tau_b; });
    return survivors;
}

// Greedy non-maximum suppression: repeatedly keep the highest-weight
// remaining detection and discard everything overlapping it beyond the IoU
// threshold. Ties on weight resolve by input order.
inline std::vector<Detection> greedy_nms(std::span<const Detection> detections, double iou_threshold) {
    std::vector<std::size_t> order(detections.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return detections[a].weight > detections[b].weight;
    });

    std::vector<bool> suppressed(detections.size(), false);
    std::vector<Detection> kept;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (suppressed[order[i]]) continue;
        const Detection& top = detections[order[i]];
        kept.push_back(top);
        for (std::size_t j = i + 1; j < order.size(); ++j) {
            if (suppressed[order[j]]) continue;
            if (iou(top.box, detections[order[j]].box) > iou_threshold) suppressed[order[j]] = true;
        }
    }
    return kept;
}

// Feature-in-box scoring, weak elimination and NMS for one product.
// s_c counts matched scene features inside each candidate box, boundary
// inclusive. Candidates with s_c <= 5% of the product's feature count are
// weak and dropped; survivors get weight (s_c / L_j) * confidence before
// greedy NMS. A product with no features can never accumulate evidence, so
// everything drops.
inline std::vector<Detection> score_and_suppress(std::span<const CandidateBox> candidates,
                                                 std::span<const LocalFeature> matched_feats,
                                                 const ProductModel& model, double nms_iou) {
    const double feature_total = static_cast<double>(model.feature_count());
    if (feature_total == 0.0) return {};

    std::vector<Detection> scored;
    for (const auto& c : candidates) {
        const Box box = c.box();
        std::size_t inside = 0;
        for (const auto& f : matched_feats)
            if (box.contains({f.x, f.y})) ++inside;
        if (static_cast<double>(inside) <= 0.05 * feature_total) continue;
        const double weight = (static_cast<double>(inside) / feature_total) * c.confidence;
        scored.push_back({model.label, box, weight});
    }
    return greedy_nms(scored, nms_iou);
}

}  // namespace shelfwatch
