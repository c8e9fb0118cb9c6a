#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "shelfwatch/planogram.hpp"

namespace shelfwatch {

// Aligned-group status: match, extra quantity, insufficient quantity, or no
// match (different labels or either side gapped).
enum class GroupStatus : std::uint8_t { MT, ME, MI, NM };

inline const char* to_string(GroupStatus s) {
    switch (s) {
        case GroupStatus::MT: return "MT";
        case GroupStatus::ME: return "ME";
        case GroupStatus::MI: return "MI";
        case GroupStatus::NM: return "NM";
    }
    return "??";
}

inline GroupStatus status_from_string(const std::string& s) {
    if (s == "MT") return GroupStatus::MT;
    if (s == "ME") return GroupStatus::ME;
    if (s == "MI") return GroupStatus::MI;
    if (s == "NM") return GroupStatus::NM;
    throw std::invalid_argument("unknown group status '" + s + "'");
}

// Substitution score used by the matrix fill: labels agreeing earn
// +min(q_d, q_t), disagreeing cost -max(q_d, q_t). Commensurate with the
// quantity-valued gap penalties, and a mismatch can never beat a double gap.
inline double default_substitution(const PlanogramGroup& det, const PlanogramGroup& ref) {
    if (det.label == ref.label) return static_cast<double>(std::min(det.quantity, ref.quantity));
    return -static_cast<double>(std::max(det.quantity, ref.quantity));
}

struct AlignParams {
    std::function<double(const PlanogramGroup& det, const PlanogramGroup& ref)> substitution =
        default_substitution;
    // Border initialization: unit steps per the fill pseudocode, or the
    // cumulative dynamic gap penalties for experimentation.
    bool dynamic_border = false;
};

// Traceback move. take_ref consumes one reference group against a detected
// gap (a product nobody found); take_det consumes one detected group
// against a reference gap (an extra item on the shelf).
enum class AlignMove : std::uint8_t { take_both, take_ref, take_det };

// Score matrix F of size (E+1) x (T+1), rows indexed by detected groups and
// columns by reference groups, plus the recorded argmax of every cell.
struct ScoreMatrix {
    std::size_t rows = 0;  // E + 1
    std::size_t cols = 0;  // T + 1
    std::vector<double> values;
    std::vector<AlignMove> trace;

    double& value(std::size_t d, std::size_t t) { return values[d * cols + t]; }
    double value(std::size_t d, std::size_t t) const { return values[d * cols + t]; }
    AlignMove& move(std::size_t d, std::size_t t) { return trace[d * cols + t]; }
    AlignMove move(std::size_t d, std::size_t t) const { return trace[d * cols + t]; }
};

// Aligned reference/detected pair sequences with gap sentinels, per-position
// statuses and the compliance ratio. nw_align leaves statuses empty;
// compliance_control fills them together with the exact sum/csum pair
// behind mu.
struct AlignmentResult {
    std::vector<PlanogramGroup> ref_aligned;
    std::vector<PlanogramGroup> det_aligned;
    std::vector<GroupStatus> statuses;
    long long matched_units = 0;   // Alg. sum: quantity credit earned
    long long required_units = 0;  // Alg. csum: total reference quantity demanded
    double mu = 0.0;
    double score = 0.0;  // terminal F(E, T)

    std::size_t size() const { return ref_aligned.size(); }
};

// Global alignment of detected against reference planogram with dynamic gap
// penalties: skipping a reference group costs its required quantity,
// skipping a detected group costs its extra quantity. Ties in the argmax
// prefer take_both, then take_ref, then take_det. The returned alignment is
// ordered left to right and never loses a group: stripping sentinels from
// either side recovers the corresponding input exactly.
inline AlignmentResult nw_align(const PlanogramSeq& ref, const PlanogramSeq& det,
                                const AlignParams& params = {}, ScoreMatrix* matrix_out = nullptr) {
    for (const auto& g : ref.groups)
        if (g.is_gap()) throw std::invalid_argument("nw_align: reference contains gap sentinels");
    for (const auto& g : det.groups)
        if (g.is_gap()) throw std::invalid_argument("nw_align: detected contains gap sentinels");

    const std::size_t det_len = det.size();  // E
    const std::size_t ref_len = ref.size();  // T

    ScoreMatrix m;
    m.rows = det_len + 1;
    m.cols = ref_len + 1;
    m.values.assign(m.rows * m.cols, 0.0);
    m.trace.assign(m.rows * m.cols, AlignMove::take_both);

    m.value(0, 0) = 0.0;
    for (std::size_t t = 1; t <= ref_len; ++t) {
        const double step = params.dynamic_border ? ref.groups[t - 1].quantity : 1.0;
        m.value(0, t) = m.value(0, t - 1) - step;
        m.move(0, t) = AlignMove::take_ref;
    }
    for (std::size_t d = 1; d <= det_len; ++d) {
        const double step = params.dynamic_border ? det.groups[d - 1].quantity : 1.0;
        m.value(d, 0) = m.value(d - 1, 0) - step;
        m.move(d, 0) = AlignMove::take_det;
    }

    for (std::size_t d = 1; d <= det_len; ++d) {
        for (std::size_t t = 1; t <= ref_len; ++t) {
            const double gap_del = ref.groups[t - 1].quantity;  // reference group undetected
            const double gap_ins = det.groups[d - 1].quantity;  // detected group unwanted
            const double take_ref_score = m.value(d, t - 1) - gap_del;
            const double take_det_score = m.value(d - 1, t) - gap_ins;
            const double take_both_score =
                m.value(d - 1, t - 1) + params.substitution(det.groups[d - 1], ref.groups[t - 1]);

            if (take_both_score >= take_ref_score && take_both_score >= take_det_score) {
                m.value(d, t) = take_both_score;
                m.move(d, t) = AlignMove::take_both;
            } else if (take_ref_score >= take_det_score) {
                m.value(d, t) = take_ref_score;
                m.move(d, t) = AlignMove::take_ref;
            } else {
                m.value(d, t) = take_det_score;
                m.move(d, t) = AlignMove::take_det;
            }
        }
    }

    AlignmentResult result;
    result.score = m.value(det_len, ref_len);

    std::size_t d = det_len, t = ref_len;
    while (d != 0 || t != 0) {
        switch (m.move(d, t)) {
            case AlignMove::take_both:
                result.ref_aligned.push_back(ref.groups[t - 1]);
                result.det_aligned.push_back(det.groups[d - 1]);
                --d;
                --t;
                break;
            case AlignMove::take_ref:
                result.ref_aligned.push_back(ref.groups[t - 1]);
                result.det_aligned.push_back(PlanogramGroup::gap_det());
                --t;
                break;
            case AlignMove::take_det:
                result.ref_aligned.push_back(PlanogramGroup::gap_ref());
                result.det_aligned.push_back(det.groups[d - 1]);
                --d;
                break;
        }
    }
    std::reverse(result.ref_aligned.begin(), result.ref_aligned.end());
    std::reverse(result.det_aligned.begin(), result.det_aligned.end());

    if (matrix_out) *matrix_out = std::move(m);
    return result;
}

// Per-position compliance statuses and the match ratio mu = sum / csum.
// Matching labels earn min(q_d, q_t) credit (all of q_t when equal); any
// label difference, including gap sentinels, earns nothing. Every position
// demands its reference quantity q_t, so inserted rows (reference gaps,
// q_t = 0) demand nothing. An empty demand means a trivially compliant
// shelf, mu = 1.
inline AlignmentResult compliance_control(AlignmentResult aligned) {
    if (aligned.ref_aligned.size() != aligned.det_aligned.size())
        throw std::invalid_argument("compliance_control: aligned sequence length mismatch");

    aligned.statuses.clear();
    aligned.statuses.reserve(aligned.ref_aligned.size());
    long long sum = 0;
    long long csum = 0;
    for (std::size_t i = 0; i < aligned.ref_aligned.size(); ++i) {
        const auto& ref = aligned.ref_aligned[i];
        const auto& det = aligned.det_aligned[i];
        const bool labels_match = !ref.is_gap() && !det.is_gap() && ref.label == det.label;
        if (labels_match) {
            if (det.quantity == ref.quantity) {
                aligned.statuses.push_back(GroupStatus::MT);
                sum += det.quantity;
            } else if (det.quantity > ref.quantity) {
                aligned.statuses.push_back(GroupStatus::ME);
                sum += std::min(det.quantity, ref.quantity);
            } else {
                aligned.statuses.push_back(GroupStatus::MI);
                sum += std::min(det.quantity, ref.quantity);
            }
        } else {
            aligned.statuses.push_back(GroupStatus::NM);
        }
        csum += ref.quantity;
    }

    aligned.matched_units = sum;
    aligned.required_units = csum;
    aligned.mu = csum == 0 ? 1.0 : static_cast<double>(sum) / static_cast<double>(csum);
    return aligned;
}

}  // namespace shelfwatch
