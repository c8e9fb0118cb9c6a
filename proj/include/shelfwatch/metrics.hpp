#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "shelfwatch/align.hpp"
#include "shelfwatch/detection.hpp"
#include "shelfwatch/geometry.hpp"

namespace shelfwatch {

struct MetricReport {
    long tp = 0;
    long fp = 0;
    long fn = 0;

    double precision() const { return tp + fp == 0 ? 0.0 : static_cast<double>(tp) / (tp + fp); }
    double recall() const { return tp + fn == 0 ? 0.0 : static_cast<double>(tp) / (tp + fn); }
    double f1() const {
        const double p = precision(), r = recall();
        return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
    }

    MetricReport& operator+=(const MetricReport& other) {
        tp += other.tp;
        fp += other.fp;
        fn += other.fn;
        return *this;
    }
};

// Greedy one-to-one detection matching by descending predicted weight: a
// prediction is a true positive iff some still-unmatched truth box of the
// same label overlaps it with IoU >= iou_min (the best such box is
// consumed). Leftover predictions are false positives, leftover truths
// false negatives.
inline MetricReport detection_metrics(std::span<const Detection> predicted,
                                      std::span<const Detection> truth, double iou_min = 0.5) {
    std::vector<std::size_t> order(predicted.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return predicted[a].weight > predicted[b].weight;
    });

    std::vector<bool> taken(truth.size(), false);
    MetricReport report;
    for (auto idx : order) {
        const auto& pred = predicted[idx];
        double best_iou = 0.0;
        std::size_t best = truth.size();
        for (std::size_t t = 0; t < truth.size(); ++t) {
            if (taken[t] || truth[t].label != pred.label) continue;
            const double overlap = iou(pred.box, truth[t].box);
            if (overlap >= iou_min && overlap > best_iou) {
                best_iou = overlap;
                best = t;
            }
        }
        if (best < truth.size()) {
            taken[best] = true;
            ++report.tp;
        } else {
            ++report.fp;
        }
    }
    report.fn = static_cast<long>(truth.size()) - report.tp;
    return report;
}

// Canonical aligned-position record used to compare a produced alignment
// against ground truth at group granularity. Gap sides carry the sentinel
// text instead of a label.
struct AlignedRow {
    std::string ref_label;
    int ref_quantity = 0;
    std::string det_label;
    int det_quantity = 0;
    GroupStatus status = GroupStatus::NM;

    auto key() const { return std::tie(ref_label, ref_quantity, det_label, det_quantity, status); }
};

inline bool operator==(const AlignedRow& a, const AlignedRow& b) { return a.key() == b.key(); }
inline bool operator<(const AlignedRow& a, const AlignedRow& b) { return a.key() < b.key(); }

inline std::vector<AlignedRow> alignment_rows(const AlignmentResult& result) {
    std::vector<AlignedRow> rows;
    rows.reserve(result.size());
    for (std::size_t i = 0; i < result.size(); ++i) {
        const auto& ref = result.ref_aligned[i];
        const auto& det = result.det_aligned[i];
        AlignedRow row;
        row.ref_label = ref.is_gap() ? "<gap>" : ref.label;
        row.ref_quantity = ref.quantity;
        row.det_label = det.is_gap() ? "<gap>" : det.label;
        row.det_quantity = det.quantity;
        row.status = i < result.statuses.size() ? result.statuses[i] : GroupStatus::NM;
        rows.push_back(std::move(row));
    }
    return rows;
}

// Group-level compliance scoring: a produced aligned position is a true
// positive when the identical position (labels, quantities and status)
// appears in the ground truth; produced positions with no counterpart are
// false positives, ground-truth positions never produced are false
// negatives. Multiset semantics, so duplicated groups must match one for
// one.
inline MetricReport compliance_metrics(const AlignmentResult& produced,
                                       std::span<const AlignedRow> truth) {
    std::vector<AlignedRow> got = alignment_rows(produced);
    std::vector<AlignedRow> want(truth.begin(), truth.end());
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());

    MetricReport report;
    std::size_t i = 0, j = 0;
    while (i < got.size() && j < want.size()) {
        if (got[i] == want[j]) {
            ++report.tp;
            ++i;
            ++j;
        } else if (got[i] < want[j]) {
            ++report.fp;
            ++i;
        } else {
            ++report.fn;
            ++j;
        }
    }
    report.fp += static_cast<long>(got.size() - i);
    report.fn += static_cast<long>(want.size() - j);
    return report;
}

}  // namespace shelfwatch
