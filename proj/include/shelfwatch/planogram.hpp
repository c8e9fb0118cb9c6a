#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "shelfwatch/detection.hpp"
#include "shelfwatch/geometry.hpp"

namespace shelfwatch {

// Gap sentinels inserted by alignment traceback. They are typed rather than
// reserved label strings so they can never collide with a real SKU.
enum class GapKind {
    none,     // ordinary product group
    gap_ref,  // hole in the reference row: an extra detected group
    gap_det,  // hole in the detected row: a reference group nobody found
};

// One run of identical products on a rack: label, quantity and the
// horizontal span it occupies. Sentinel groups have quantity 0 and no span.
struct PlanogramGroup {
    std::string label;
    int quantity = 0;
    std::optional<Span> span;
    GapKind gap = GapKind::none;

    bool is_gap() const { return gap != GapKind::none; }

    static PlanogramGroup gap_ref() { return {"", 0, std::nullopt, GapKind::gap_ref}; }
    static PlanogramGroup gap_det() { return {"", 0, std::nullopt, GapKind::gap_det}; }
};

inline bool operator==(const PlanogramGroup& a, const PlanogramGroup& b) {
    return a.gap == b.gap && a.label == b.label && a.quantity == b.quantity && a.span == b.span;
}

// Ordered left-to-right list of groups. Adjacent non-sentinel groups carry
// distinct labels when produced by obj_to_planogram.
struct PlanogramSeq {
    std::vector<PlanogramGroup> groups;

    bool empty() const { return groups.empty(); }
    std::size_t size() const { return groups.size(); }

    int total_quantity() const {
        int n = 0;
        for (const auto& g : groups) n += g.quantity;
        return n;
    }

    static PlanogramSeq of(std::vector<PlanogramGroup> groups) { return {std::move(groups)}; }
};

inline bool operator==(const PlanogramSeq& a, const PlanogramSeq& b) { return a.groups == b.groups; }

// Converts a detection list to planogram form: sort left to right by center,
// then merge consecutive runs of the same label into quantity groups. The
// group span stretches from the leftmost box's top-left to the rightmost
// box's bottom-right. Ties on center x break by label, then center y.
inline PlanogramSeq obj_to_planogram(std::vector<Detection> detections) {
    std::sort(detections.begin(), detections.end(), [](const Detection& a, const Detection& b) {
        const double ax = a.center().x, bx = b.center().x;
        if (ax != bx) return ax < bx;
        if (a.label != b.label) return a.label < b.label;
        return a.center().y < b.center().y;
    });

    PlanogramSeq seq;
    for (const auto& det : detections) {
        if (!seq.groups.empty() && seq.groups.back().label == det.label) {
            auto& group = seq.groups.back();
            group.quantity += 1;
            group.span->end = det.box.br.x;
        } else {
            seq.groups.push_back({det.label, 1, Span{det.box.tl.x, det.box.br.x}, GapKind::none});
        }
    }
    return seq;
}

}  // namespace shelfwatch
