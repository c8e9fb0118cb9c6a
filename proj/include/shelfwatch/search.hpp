#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "shelfwatch/align.hpp"
#include "shelfwatch/catalog.hpp"
#include "shelfwatch/detect.hpp"
#include "shelfwatch/match.hpp"
#include "shelfwatch/planogram.hpp"
#include "shelfwatch/providers.hpp"

namespace shelfwatch {

struct SearchParams {
    RatioSchedule ratio;         // tau_alpha = 0.95 - 0.2 * alpha
    double alpha_init = 1.0;
    double alpha_decay = 0.75;   // alpha_new = 0.75 * alpha_old
    int max_stall = 6;           // stop after this many iterations without a new best mu
    double nms_iou = 0.5;
    AlignParams align;
};

inline double decay_alpha(double alpha, double factor = 0.75) { return factor * alpha; }

// Horizontal re-search window for one unsatisfied reference group.
struct RoiInterval {
    std::string label;
    Span span;
};

struct RoiSpec {
    std::vector<RoiInterval> intervals;

    bool empty() const { return intervals.empty(); }

    // Union membership test for one product's intervals.
    bool covers(const std::string& label, double x) const {
        for (const auto& iv : intervals)
            if (iv.label == label && iv.span.contains(x)) return true;
        return false;
    }

    bool has_label(const std::string& label) const {
        for (const auto& iv : intervals)
            if (iv.label == label) return true;
        return false;
    }
};

// Builds the re-search window for every non-MT reference group: from the
// right edge of the nearest satisfied (MT) group on its left to the left
// edge of the nearest on its right, image borders when there is none,
// expanded by half the product's reference width on each side and clamped
// to the rack. Satisfied groups anchor with their detected span, which
// lives in rack pixels.
inline RoiSpec select_roi(const AlignmentResult& result, double rack_width, const Catalog& catalog) {
    if (result.statuses.size() != result.size())
        throw std::invalid_argument("select_roi: alignment has no statuses");

    RoiSpec roi;
    for (std::size_t i = 0; i < result.size(); ++i) {
        if (result.statuses[i] == GroupStatus::MT) continue;
        const auto& ref = result.ref_aligned[i];
        if (ref.is_gap()) continue;  // extra detected item, nothing to search for

        double left = 0.0;
        for (std::size_t k = i; k-- > 0;) {
            if (result.statuses[k] == GroupStatus::MT && result.det_aligned[k].span) {
                left = result.det_aligned[k].span->end;
                break;
            }
        }
        double right = rack_width;
        for (std::size_t k = i + 1; k < result.size(); ++k) {
            if (result.statuses[k] == GroupStatus::MT && result.det_aligned[k].span) {
                right = result.det_aligned[k].span->begin;
                break;
            }
        }

        const double half_width = catalog.contains(ref.label) ? catalog.at(ref.label).width_ref * 0.5 : 0.0;
        const Span span{std::clamp(left - half_width, 0.0, rack_width),
                        std::clamp(right + half_width, 0.0, rack_width)};
        roi.intervals.push_back({ref.label, span});
    }
    return roi;
}

struct SearchIteration {
    int iteration = 0;   // 1-based
    double alpha = 0.0;
    double tau = 0.0;
    double mu = 0.0;
    std::vector<GroupStatus> statuses;
};

struct SearchResult {
    AlignmentResult alignment;
    std::vector<SearchIteration> iterations;
    std::vector<Detection> detections;  // final detection set across the catalog
};

// Focused and iterative search: extract scene features and candidate boxes
// once, then repeatedly match, score, align and check compliance, relaxing
// the ratio-test threshold (alpha decays by 0.75 each round) and narrowing
// the re-search to windows around unsatisfied reference groups. Detections
// outside a product's window are preserved, so satisfied groups never
// degrade. Stops at full compliance or after max_stall successive
// iterations without a new best mu.
inline SearchResult run_search(const RackScene& rack, const PlanogramSeq& ref, const Catalog& catalog,
                               DetectorProvider& detector, FeatureProvider& features,
                               const SearchParams& params = {}) {
    for (const auto& g : ref.groups)
        if (!g.is_gap() && !catalog.contains(g.label))
            throw std::invalid_argument("run_search: reference label '" + g.label + "' not in catalog");

    SearchResult out;
    if (ref.empty()) {
        out.alignment = compliance_control(nw_align(ref, PlanogramSeq{}, params.align));
        return out;
    }

    std::vector<LocalFeature> scene_feats;
    std::vector<CandidateBox> raw_candidates;
    try {
        scene_feats = features.extract(rack);
        raw_candidates = detector.candidates(rack);
    } catch (const std::exception& e) {
        throw std::runtime_error("run_search: provider failed for rack '" + rack.id + "': " + e.what());
    }

    // Geometry and confidence filtering run once per product, outside the
    // loop; iterations only redo feature matching and scoring.
    std::map<std::string, std::vector<CandidateBox>> filtered;
    for (const auto& [label, model] : catalog) filtered[label] = filter_boxes(raw_candidates, model);

    std::map<std::string, std::vector<Detection>> detections;
    double alpha = params.alpha_init;
    double best_mu = 0.0;  // mu starts at 0; a first stalled-at-zero pass counts
    int stall = 0;
    RoiSpec roi;
    bool first_pass = true;

    while (true) {
        const double tau = params.ratio.tau(alpha);

        for (const auto& [label, model] : catalog) {
            if (!first_pass && !roi.has_label(label)) continue;

            std::vector<LocalFeature> window_feats;
            for (const auto& f : scene_feats)
                if (first_pass || roi.covers(label, f.x)) window_feats.push_back(f);

            const auto matched = match_features(model.features, window_feats, tau);
            std::vector<LocalFeature> matched_feats;
            matched_feats.reserve(matched.size());
            for (auto idx : matched) matched_feats.push_back(window_feats[idx]);

            auto fresh = score_and_suppress(filtered[label], matched_feats, model, params.nms_iou);

            if (first_pass) {
                detections[label] = std::move(fresh);
            } else {
                auto& kept = detections[label];
                std::erase_if(kept, [&](const Detection& d) { return roi.covers(label, d.center().x); });
                for (auto& d : fresh)
                    if (roi.covers(label, d.center().x)) kept.push_back(std::move(d));
            }
        }

        std::vector<Detection> all;
        for (const auto& [label, dets] : detections) all.insert(all.end(), dets.begin(), dets.end());
        const PlanogramSeq detected = obj_to_planogram(all);

        out.alignment = compliance_control(nw_align(ref, detected, params.align));
        out.detections = std::move(all);

        SearchIteration it;
        it.iteration = static_cast<int>(out.iterations.size()) + 1;
        it.alpha = alpha;
        it.tau = tau;
        it.mu = out.alignment.mu;
        it.statuses = out.alignment.statuses;
        out.iterations.push_back(std::move(it));

        if (out.alignment.matched_units == out.alignment.required_units) break;  // mu == 1 exactly
        if (out.alignment.mu > best_mu) {
            best_mu = out.alignment.mu;
            stall = 0;
        } else if (++stall >= params.max_stall) {
            break;
        }

        roi = select_roi(out.alignment, rack.width, catalog);
        if (roi.empty()) break;  // nothing left to re-search
        first_pass = false;
        alpha = decay_alpha(alpha, params.alpha_decay);
    }
    return out;
}

}  // namespace shelfwatch
