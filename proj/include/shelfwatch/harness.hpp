#pragma once

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "shelfwatch/config.hpp"
#include "shelfwatch/image.hpp"
#include "shelfwatch/metrics.hpp"
#include "shelfwatch/search.hpp"
#include "shelfwatch/serial.hpp"
#include "shelfwatch/synth.hpp"

namespace shelfwatch {

inline void from_json(const json& j, SynthSpec& spec) {
    if (j.contains("products")) {
        spec.products.clear();
        for (const auto& pj : j.at("products"))
            spec.products.push_back({pj.at("label").get<std::string>(), pj.value("width", 110.0),
                                     pj.value("height", 210.0), pj.value("feature_count", 24)});
    }
    if (j.contains("layout")) {
        spec.layout.clear();
        for (const auto& gj : j.at("layout"))
            spec.layout.push_back({gj.at("label").get<std::string>(), gj.value("quantity", 1)});
    }
    spec.foreign_label = j.value("foreign_label", spec.foreign_label);
    spec.rack_width = j.value("rack_width", spec.rack_width);
    spec.rack_height = j.value("rack_height", spec.rack_height);
    spec.descriptor_dim = j.value("descriptor_dim", spec.descriptor_dim);
    spec.catalog_seed = j.value("catalog_seed", spec.catalog_seed);
    spec.decoy_boxes = j.value("decoy_boxes", spec.decoy_boxes);
}

// Writes a synthetic dataset in the on-disk layout the eval runner and the
// file-backed providers consume:
//   meta.json        rack index with geometry and image paths
//   catalog.json     product models
//   detections.json  oracle candidate boxes per rack (rack pixels)
//   features.json    oracle scene features per rack (rack pixels)
//   references.json  reference planogram per rack
//   truth.json       ground-truth rows, ratio and boxes per rack
//   racks/<id>.ppm   rendered rack images
inline void write_dataset(const std::filesystem::path& dir, const std::vector<AnnotatedRack>& racks) {
    if (racks.empty()) throw std::invalid_argument("write_dataset: no racks");
    std::filesystem::create_directories(dir / "racks");

    json meta{{"format", "shelfwatch-dataset/1"}, {"racks", json::object()}};
    json detections{{"input_side", 640}, {"racks", json::object()}};
    json features{{"descriptor_dim", racks.front().catalog.descriptor_dim()}, {"racks", json::object()}};
    json references{{"racks", json::object()}};
    json truth{{"racks", json::object()}};

    for (const auto& rack : racks) {
        const std::string image_rel = "racks/" + rack.rack_id + ".ppm";
        write_ppm(rack.image, (dir / image_rel).string());
        meta["racks"][rack.rack_id] = {{"width", rack.image.width},
                                       {"height", rack.image.height},
                                       {"image", image_rel}};
        detections["racks"][rack.rack_id] = rack.detector_records;
        features["racks"][rack.rack_id] = rack.feature_records;
        references["racks"][rack.rack_id] = rack.reference;
        truth["racks"][rack.rack_id] = {{"rows", rack.truth_rows},
                                        {"mu", rack.truth_mu},
                                        {"matched_units", rack.truth_matched_units},
                                        {"required_units", rack.truth_required_units},
                                        {"detections", rack.truth_detections},
                                        {"perturbation", to_string(rack.perturbation)}};
    }

    save_catalog(racks.front().catalog, (dir / "catalog.json").string());
    save_json_file(meta, (dir / "meta.json").string());
    save_json_file(detections, (dir / "detections.json").string());
    save_json_file(features, (dir / "features.json").string());
    save_json_file(references, (dir / "references.json").string());
    save_json_file(truth, (dir / "truth.json").string());
}

struct DatasetEntry {
    RackScene scene;
    PlanogramSeq reference;
    std::vector<AlignedRow> truth_rows;
    std::vector<Detection> truth_detections;
    double truth_mu = 1.0;
    std::string perturbation = "none";
};

struct Dataset {
    Catalog catalog;
    std::vector<DatasetEntry> entries;
    ProviderConfig providers;
};

inline Dataset load_dataset(const std::filesystem::path& dir) {
    Dataset ds;
    ds.catalog = load_catalog((dir / "catalog.json").string());
    ds.providers.detector_kind = "file";
    ds.providers.detector_path = (dir / "detections.json").string();
    ds.providers.feature_kind = "file";
    ds.providers.feature_path = (dir / "features.json").string();

    const json meta = load_json_file((dir / "meta.json").string());
    const json references = load_json_file((dir / "references.json").string());
    const json truth = load_json_file((dir / "truth.json").string());

    for (const auto& [rack_id, rj] : meta.at("racks").items()) {
        DatasetEntry entry;
        entry.scene.id = rack_id;
        entry.scene.width = rj.at("width").get<double>();
        entry.scene.height = rj.at("height").get<double>();
        entry.scene.image_path = (dir / rj.at("image").get<std::string>()).string();
        references.at("racks").at(rack_id).get_to(entry.reference);
        const auto& tj = truth.at("racks").at(rack_id);
        tj.at("rows").get_to(entry.truth_rows);
        tj.at("detections").get_to(entry.truth_detections);
        entry.truth_mu = tj.at("mu").get<double>();
        entry.perturbation = tj.value("perturbation", "none");
        ds.entries.push_back(std::move(entry));
    }
    return ds;
}

struct RackEvaluation {
    std::string rack_id;
    SearchResult search;
    MetricReport detection;
    MetricReport compliance;
    bool statuses_match = false;
};

struct EvalSummary {
    std::vector<RackEvaluation> racks;
    MetricReport detection;
    MetricReport compliance;
    long statuses_matched = 0;

    double status_match_rate() const {
        return racks.empty() ? 0.0 : static_cast<double>(statuses_matched) / racks.size();
    }
};

inline RackEvaluation evaluate_rack(const DatasetEntry& entry, const Catalog& catalog,
                                    DetectorProvider& detector, FeatureProvider& features,
                                    const SearchParams& params) {
    RackEvaluation eval;
    eval.rack_id = entry.scene.id;
    eval.search = run_search(entry.scene, entry.reference, catalog, detector, features, params);
    eval.detection = detection_metrics(eval.search.detections, entry.truth_detections);
    eval.compliance = compliance_metrics(eval.search.alignment, entry.truth_rows);
    eval.statuses_match = eval.compliance.fp == 0 && eval.compliance.fn == 0;
    return eval;
}

inline EvalSummary evaluate_dataset(const Dataset& ds, const SearchParams& params) {
    auto detector = make_detector(ds.providers);
    auto features = make_features(ds.providers);

    EvalSummary summary;
    for (const auto& entry : ds.entries) {
        auto eval = evaluate_rack(entry, ds.catalog, *detector, *features, params);
        summary.detection += eval.detection;
        summary.compliance += eval.compliance;
        if (eval.statuses_match) ++summary.statuses_matched;
        summary.racks.push_back(std::move(eval));
    }
    return summary;
}

// Plain-text metric tables in the layout of the published result tables:
// one row per method, precision / recall / F1 columns.
inline std::string format_metric_table(const std::string& title,
                                       const std::vector<std::pair<std::string, MetricReport>>& rows) {
    std::ostringstream out;
    out << title << "\n";
    out << std::left << std::setw(18) << "Method" << std::right << std::setw(11) << "Precision"
        << std::setw(9) << "Recall" << std::setw(10) << "F1 Score" << "\n";
    out << std::string(48, '-') << "\n";
    out << std::fixed << std::setprecision(3);
    for (const auto& [name, report] : rows) {
        out << std::left << std::setw(18) << name << std::right << std::setw(11) << report.precision()
            << std::setw(9) << report.recall() << std::setw(10) << report.f1() << "\n";
    }
    return out.str();
}

inline json eval_report_json(const EvalSummary& summary) {
    json racks = json::array();
    for (const auto& r : summary.racks) {
        json iterations = json::array();
        for (const auto& it : r.search.iterations) {
            json statuses = json::array();
            for (auto s : it.statuses) statuses.push_back(to_string(s));
            iterations.push_back({{"iteration", it.iteration},
                                  {"alpha", it.alpha},
                                  {"tau_alpha", it.tau},
                                  {"mu", it.mu},
                                  {"statuses", std::move(statuses)}});
        }
        racks.push_back({{"rack_id", r.rack_id},
                         {"mu", r.search.alignment.mu},
                         {"alignment", alignment_report(r.search.alignment)},
                         {"detections", r.search.detections},
                         {"iterations", std::move(iterations)},
                         {"detection_metrics",
                          {{"tp", r.detection.tp}, {"fp", r.detection.fp}, {"fn", r.detection.fn}}},
                         {"compliance_metrics",
                          {{"tp", r.compliance.tp}, {"fp", r.compliance.fp}, {"fn", r.compliance.fn}}},
                         {"statuses_match", r.statuses_match}});
    }
    return json{{"racks", std::move(racks)},
                {"detection",
                 {{"tp", summary.detection.tp},
                  {"fp", summary.detection.fp},
                  {"fn", summary.detection.fn},
                  {"precision", summary.detection.precision()},
                  {"recall", summary.detection.recall()},
                  {"f1", summary.detection.f1()}}},
                {"compliance",
                 {{"tp", summary.compliance.tp},
                  {"fp", summary.compliance.fp},
                  {"fn", summary.compliance.fn},
                  {"precision", summary.compliance.precision()},
                  {"recall", summary.compliance.recall()},
                  {"f1", summary.compliance.f1()}}},
                {"status_match_rate", summary.status_match_rate()}};
}

}  // namespace shelfwatch
