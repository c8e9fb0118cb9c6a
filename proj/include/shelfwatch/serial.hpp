#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "shelfwatch/align.hpp"
#include "shelfwatch/catalog.hpp"
#include "shelfwatch/detection.hpp"
#include "shelfwatch/metrics.hpp"
#include "shelfwatch/planogram.hpp"

namespace shelfwatch {

using json = nlohmann::json;

inline void to_json(json& j, const LocalFeature& f) {
    j = json{{"x", f.x}, {"y", f.y}, {"d", f.descriptor}};
}

inline void from_json(const json& j, LocalFeature& f) {
    j.at("x").get_to(f.x);
    j.at("y").get_to(f.y);
    j.at("d").get_to(f.descriptor);
}

inline void to_json(json& j, const CandidateBox& b) {
    j = json{{"cs", b.confidence}, {"cx", b.center_x}, {"cy", b.center_y}, {"w", b.width}, {"h", b.height}};
}

inline void from_json(const json& j, CandidateBox& b) {
    j.at("cs").get_to(b.confidence);
    j.at("cx").get_to(b.center_x);
    j.at("cy").get_to(b.center_y);
    j.at("w").get_to(b.width);
    j.at("h").get_to(b.height);
}

inline void to_json(json& j, const Detection& d) {
    j = json{{"label", d.label},
             {"tl", {d.box.tl.x, d.box.tl.y}},
             {"br", {d.box.br.x, d.box.br.y}},
             {"weight", d.weight}};
}

inline void from_json(const json& j, Detection& d) {
    j.at("label").get_to(d.label);
    d.box.tl = {j.at("tl")[0].get<double>(), j.at("tl")[1].get<double>()};
    d.box.br = {j.at("br")[0].get<double>(), j.at("br")[1].get<double>()};
    j.at("weight").get_to(d.weight);
}

inline void to_json(json& j, const ProductModel& m) {
    j = json{{"label", m.label},
             {"width_ref", m.width_ref},
             {"height_ref", m.height_ref},
             {"features", m.features}};
}

inline void from_json(const json& j, ProductModel& m) {
    j.at("label").get_to(m.label);
    j.at("width_ref").get_to(m.width_ref);
    j.at("height_ref").get_to(m.height_ref);
    j.at("features").get_to(m.features);
}

inline void to_json(json& j, const PlanogramGroup& g) {
    j = json{{"quantity", g.quantity}};
    switch (g.gap) {
        case GapKind::none: j["label"] = g.label; break;
        case GapKind::gap_ref: j["gap"] = "ref"; break;
        case GapKind::gap_det: j["gap"] = "det"; break;
    }
    if (g.span) j["span"] = {g.span->begin, g.span->end};
}

inline void from_json(const json& j, PlanogramGroup& g) {
    g = PlanogramGroup{};
    if (j.contains("gap")) {
        const auto kind = j.at("gap").get<std::string>();
        if (kind == "ref") g.gap = GapKind::gap_ref;
        else if (kind == "det") g.gap = GapKind::gap_det;
        else throw std::invalid_argument("planogram group: unknown gap kind '" + kind + "'");
    } else {
        j.at("label").get_to(g.label);
    }
    j.at("quantity").get_to(g.quantity);
    if (j.contains("span")) g.span = Span{j.at("span")[0].get<double>(), j.at("span")[1].get<double>()};
}

inline void to_json(json& j, const PlanogramSeq& seq) { j = seq.groups; }

inline void from_json(const json& j, PlanogramSeq& seq) { j.get_to(seq.groups); }

inline void to_json(json& j, const AlignedRow& row) {
    j = json{{"ref", row.ref_label},
             {"ref_q", row.ref_quantity},
             {"det", row.det_label},
             {"det_q", row.det_quantity},
             {"status", to_string(row.status)}};
}

inline void from_json(const json& j, AlignedRow& row) {
    j.at("ref").get_to(row.ref_label);
    j.at("ref_q").get_to(row.ref_quantity);
    j.at("det").get_to(row.det_label);
    j.at("det_q").get_to(row.det_quantity);
    row.status = status_from_string(j.at("status").get<std::string>());
}

// Alignment report record: positions with labels, quantities and statuses
// plus the exact compliance ratio.
inline json alignment_report(const AlignmentResult& result) {
    json positions = json::array();
    for (std::size_t i = 0; i < result.size(); ++i) {
        json row{{"ref", result.ref_aligned[i]}, {"det", result.det_aligned[i]}};
        if (i < result.statuses.size()) row["status"] = to_string(result.statuses[i]);
        positions.push_back(std::move(row));
    }
    return json{{"positions", std::move(positions)},
                {"matched_units", result.matched_units},
                {"required_units", result.required_units},
                {"mu", result.mu},
                {"score", result.score}};
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    return j;
}

inline void save_json_file(const json& j, const std::string& path, int indent = 2) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << j.dump(indent) << "\n";
}

// Catalog file: one record per SKU with label, reference dimensions and the
// feature list.
inline json catalog_to_json(const Catalog& catalog) {
    json products = json::array();
    for (const auto& [label, model] : catalog) products.push_back(model);
    return json{{"format", "shelfwatch-catalog/1"},
                {"descriptor_dim", catalog.descriptor_dim()},
                {"products", std::move(products)}};
}

inline Catalog catalog_from_json(const json& j) {
    Catalog catalog;
    for (const auto& pj : j.at("products")) catalog.add(pj.get<ProductModel>());
    return catalog;
}

inline Catalog load_catalog(const std::string& path) { return catalog_from_json(load_json_file(path)); }

inline void save_catalog(const Catalog& catalog, const std::string& path) {
    save_json_file(catalog_to_json(catalog), path);
}

}  // namespace shelfwatch
