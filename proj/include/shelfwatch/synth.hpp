#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "shelfwatch/catalog.hpp"
#include "shelfwatch/detection.hpp"
#include "shelfwatch/image.hpp"
#include "shelfwatch/metrics.hpp"
#include "shelfwatch/planogram.hpp"

namespace shelfwatch {

struct SynthProduct {
    std::string label;
    double width = 110.0;
    double height = 210.0;
    int feature_count = 24;
};

struct SynthGroup {
    std::string label;
    int quantity = 1;
};

enum class Perturbation { none, remove_item, swap_adjacent, add_foreign, add_extra };

inline const char* to_string(Perturbation p) {
    switch (p) {
        case Perturbation::none: return "none";
        case Perturbation::remove_item: return "remove_item";
        case Perturbation::swap_adjacent: return "swap_adjacent";
        case Perturbation::add_foreign: return "add_foreign";
        case Perturbation::add_extra: return "add_extra";
    }
    return "none";
}

inline Perturbation perturbation_from_string(const std::string& s) {
    if (s == "none") return Perturbation::none;
    if (s == "remove_item") return Perturbation::remove_item;
    if (s == "swap_adjacent") return Perturbation::swap_adjacent;
    if (s == "add_foreign") return Perturbation::add_foreign;
    if (s == "add_extra") return Perturbation::add_extra;
    throw std::invalid_argument("unknown perturbation '" + s + "'");
}

// Desk-scale scene description: the product set (including one off-plan
// product used by add_foreign), the reference arrangement, and rack
// geometry. Adjacent layout groups must carry distinct labels.
struct SynthSpec {
    std::vector<SynthProduct> products;
    std::vector<SynthGroup> layout;
    std::string foreign_label;
    double rack_width = 1600.0;
    double rack_height = 400.0;
    double margin = 40.0;
    double item_gap = 6.0;
    double group_gap = 28.0;
    int descriptor_dim = 16;
    std::uint64_t catalog_seed = 42;
    bool decoy_boxes = true;

    const SynthProduct& product(const std::string& label) const {
        for (const auto& p : products)
            if (p.label == label) return p;
        throw std::out_of_range("synth spec: unknown product '" + label + "'");
    }

    static SynthSpec example() {
        SynthSpec spec;
        spec.products = {{"cola", 96, 224, 24},   {"soda", 110, 200, 24}, {"chips", 150, 180, 20},
                         {"beans", 104, 150, 24}, {"rice", 130, 190, 22}, {"tea", 90, 160, 24}};
        spec.layout = {{"cola", 3}, {"chips", 2}, {"beans", 3}, {"soda", 2}, {"rice", 1}};
        spec.foreign_label = "tea";
        return spec;
    }
};

// Everything the evaluation of one synthetic rack needs: the rendered
// image, oracle provider records, the reference planogram, and the ground
// truth the pipeline's answer is graded against.
struct AnnotatedRack {
    std::string rack_id;
    Image image;
    Catalog catalog;
    PlanogramSeq reference;
    std::vector<Detection> truth_detections;
    std::vector<AlignedRow> truth_rows;
    long long truth_matched_units = 0;
    long long truth_required_units = 0;
    double truth_mu = 1.0;
    std::vector<CandidateBox> detector_records;
    std::vector<LocalFeature> feature_records;
    Perturbation perturbation = Perturbation::none;
};

namespace detail {

inline std::array<std::uint8_t, 3> label_color(const std::string& label) {
    std::uint32_t h = 2166136261u;
    for (char c : label) h = (h ^ static_cast<std::uint8_t>(c)) * 16777619u;
    return {static_cast<std::uint8_t>(64 + (h & 0x7f)),
            static_cast<std::uint8_t>(64 + ((h >> 8) & 0x7f)),
            static_cast<std::uint8_t>(64 + ((h >> 16) & 0x7f))};
}

struct SynthInstance {
    std::string label;
    Box box;
};

// Places layout groups left to right with fixed margins and gaps; throws
// when the arrangement does not fit the rack.
inline std::vector<SynthInstance> place_instances(const std::vector<SynthGroup>& layout,
                                                  const SynthSpec& spec) {
    std::vector<SynthInstance> instances;
    double x = spec.margin;
    for (std::size_t g = 0; g < layout.size(); ++g) {
        const auto& product = spec.product(layout[g].label);
        for (int i = 0; i < layout[g].quantity; ++i) {
            const double y0 = (spec.rack_height - product.height) * 0.5;
            instances.push_back(
                {layout[g].label, {{x, y0}, {x + product.width, y0 + product.height}}});
            x += product.width + spec.item_gap;
        }
        x += spec.group_gap - spec.item_gap;
    }
    if (x - spec.group_gap + spec.margin > spec.rack_width)
        throw std::invalid_argument("synth spec: products overflow the rack width");
    return instances;
}

}  // namespace detail

// Product catalog derived deterministically from the spec: keypoint
// positions are seeded fractions of the product face, descriptors are
// well-separated random vectors so distinct keypoints never confuse the
// ratio test.
inline Catalog synth_catalog(const SynthSpec& spec) {
    std::mt19937_64 rng(spec.catalog_seed);
    std::uniform_real_distribution<double> pos(0.15, 0.85);
    std::normal_distribution<double> gauss(0.0, 1.0);

    Catalog catalog;
    for (const auto& p : spec.products) {
        ProductModel model;
        model.label = p.label;
        model.width_ref = p.width;
        model.height_ref = p.height;
        for (int l = 0; l < p.feature_count; ++l) {
            LocalFeature f;
            f.x = pos(rng) * p.width;
            f.y = pos(rng) * p.height;
            f.descriptor.resize(spec.descriptor_dim);
            double norm = 0.0;
            for (auto& v : f.descriptor) {
                v = gauss(rng);
                norm += v * v;
            }
            norm = std::sqrt(norm);
            for (auto& v : f.descriptor) v = v / norm * 10.0;  // radius-10 sphere
            model.features.push_back(std::move(f));
        }
        catalog.add(std::move(model));
    }
    return catalog;
}

// Renders one annotated rack. The detected arrangement starts as the
// reference layout and receives at most one perturbation; ground-truth
// statuses and the exact compliance ratio follow from which perturbation
// was applied. Scene keypoints are partitioned round-robin across the
// instances of each label, so every placed instance holds roughly
// L_j / n_label matchable features and no two instances share a
// descriptor.
inline AnnotatedRack generate_synthetic(std::uint64_t seed, const SynthSpec& spec,
                                        Perturbation perturbation = Perturbation::none) {
    if (spec.layout.empty()) throw std::invalid_argument("synth spec: empty layout");
    for (std::size_t g = 1; g < spec.layout.size(); ++g)
        if (spec.layout[g].label == spec.layout[g - 1].label)
            throw std::invalid_argument("synth spec: adjacent layout groups share a label");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    AnnotatedRack rack;
    rack.rack_id = "rack-" + std::to_string(seed);
    rack.catalog = synth_catalog(spec);
    rack.perturbation = perturbation;

    // Reference planogram with spans from the unperturbed placement.
    const auto reference_instances = detail::place_instances(spec.layout, spec);
    {
        std::size_t idx = 0;
        for (const auto& g : spec.layout) {
            const double begin = reference_instances[idx].box.tl.x;
            const double end = reference_instances[idx + g.quantity - 1].box.br.x;
            rack.reference.groups.push_back({g.label, g.quantity, Span{begin, end}, GapKind::none});
            idx += g.quantity;
        }
    }

    // Detected arrangement: apply the perturbation to a copy of the layout
    // and derive ground truth rows in the same stroke.
    std::vector<SynthGroup> detected = spec.layout;
    long long csum = 0;
    for (const auto& g : spec.layout) csum += g.quantity;
    long long sum = csum;

    auto mt_row = [](const SynthGroup& g) {
        return AlignedRow{g.label, g.quantity, g.label, g.quantity, GroupStatus::MT};
    };
    for (const auto& g : spec.layout) rack.truth_rows.push_back(mt_row(g));

    switch (perturbation) {
        case Perturbation::none:
            break;
        case Perturbation::remove_item: {
            const std::size_t g = static_cast<std::size_t>(unit(rng) * spec.layout.size());
            const int q = spec.layout[g].quantity;
            if (q > 1) {
                detected[g].quantity = q - 1;
                rack.truth_rows[g] = {spec.layout[g].label, q, spec.layout[g].label, q - 1, GroupStatus::MI};
            } else {
                detected.erase(detected.begin() + g);
                rack.truth_rows[g] = {spec.layout[g].label, 1, "<gap>", 0, GroupStatus::NM};
            }
            sum -= 1;
            break;
        }
        case Perturbation::add_extra: {
            const std::size_t g = static_cast<std::size_t>(unit(rng) * spec.layout.size());
            detected[g].quantity += 1;
            rack.truth_rows[g] = {spec.layout[g].label, spec.layout[g].quantity, spec.layout[g].label,
                                  spec.layout[g].quantity + 1, GroupStatus::ME};
            break;
        }
        case Perturbation::swap_adjacent: {
            if (spec.layout.size() < 2)
                throw std::invalid_argument("synth spec: swap_adjacent needs at least two groups");
            const std::size_t g = static_cast<std::size_t>(unit(rng) * (spec.layout.size() - 1));
            std::swap(detected[g], detected[g + 1]);
            const auto& a = spec.layout[g];
            const auto& b = spec.layout[g + 1];
            // The aligner keeps the heavier group matched and double-gaps
            // the lighter one; ties keep the left group.
            std::vector<AlignedRow> rows;
            if (a.quantity >= b.quantity) {
                rows = {{"<gap>", 0, b.label, b.quantity, GroupStatus::NM},
                        mt_row(a),
                        {b.label, b.quantity, "<gap>", 0, GroupStatus::NM}};
            } else {
                rows = {{a.label, a.quantity, "<gap>", 0, GroupStatus::NM},
                        mt_row(b),
                        {"<gap>", 0, a.label, a.quantity, GroupStatus::NM}};
            }
            rack.truth_rows.erase(rack.truth_rows.begin() + g, rack.truth_rows.begin() + g + 2);
            rack.truth_rows.insert(rack.truth_rows.begin() + g, rows.begin(), rows.end());
            sum -= std::min(a.quantity, b.quantity);
            break;
        }
        case Perturbation::add_foreign: {
            if (spec.foreign_label.empty())
                throw std::invalid_argument("synth spec: add_foreign needs a foreign product");
            for (const auto& g : spec.layout)
                if (g.label == spec.foreign_label)
                    throw std::invalid_argument("synth spec: foreign product appears in the layout");
            const std::size_t at = 1 + static_cast<std::size_t>(unit(rng) * (spec.layout.size() - 1));
            detected.insert(detected.begin() + at, {spec.foreign_label, 1});
            rack.truth_rows.insert(rack.truth_rows.begin() + at,
                                   {"<gap>", 0, spec.foreign_label, 1, GroupStatus::NM});
            break;
        }
    }
    rack.truth_matched_units = sum;
    rack.truth_required_units = csum;
    rack.truth_mu = csum == 0 ? 1.0 : static_cast<double>(sum) / static_cast<double>(csum);

    // Scene contents from the perturbed arrangement.
    const auto instances = detail::place_instances(detected, spec);

    rack.image = Image::filled(static_cast<int>(spec.rack_width), static_cast<int>(spec.rack_height),
                               {222, 224, 226});
    rack.image.fill_rect(0, static_cast<int>(spec.rack_height) - 14, rack.image.width,
                         rack.image.height, {96, 78, 60});
    for (const auto& inst : instances) {
        const auto color = detail::label_color(inst.label);
        rack.image.fill_rect(static_cast<int>(inst.box.tl.x), static_cast<int>(inst.box.tl.y),
                             static_cast<int>(inst.box.br.x), static_cast<int>(inst.box.br.y), color);
        rack.image.fill_rect(static_cast<int>(inst.box.tl.x), static_cast<int>(inst.box.tl.y),
                             static_cast<int>(inst.box.br.x), static_cast<int>(inst.box.tl.y) + 4,
                             {40, 40, 40});
    }

    // Keypoints: instance k of n for a label takes model keypoints
    // l == k (mod n), placed at the instance's position with descriptors
    // copied verbatim.
    std::map<std::string, std::vector<std::size_t>> by_label;
    for (std::size_t i = 0; i < instances.size(); ++i) by_label[instances[i].label].push_back(i);

    for (const auto& [label, idxs] : by_label) {
        const auto& model = rack.catalog.at(label);
        const std::size_t n = idxs.size();
        for (std::size_t k = 0; k < n; ++k) {
            const auto& inst = instances[idxs[k]];
            for (std::size_t l = k; l < model.features.size(); l += n) {
                LocalFeature f = model.features[l];
                f.x += inst.box.tl.x;
                f.y += inst.box.tl.y;
                rack.feature_records.push_back(std::move(f));
            }
        }
    }

    // Detector oracle candidates: one jittered box per instance plus, when
    // enabled, decoys the pipeline must reject (near-duplicates for NMS,
    // oversize boxes for the geometry filter, sub-threshold confidences
    // for the 5% cut).
    std::uniform_real_distribution<double> conf(0.86, 0.97);
    std::uniform_real_distribution<double> jitter(-1.5, 1.5);
    for (std::size_t i = 0; i < instances.size(); ++i) {
        const auto& inst = instances[i];
        const auto c = inst.box.center();
        CandidateBox box{conf(rng), c.x + jitter(rng), c.y + jitter(rng),
                         inst.box.width() + jitter(rng), inst.box.height() + jitter(rng)};
        rack.detector_records.push_back(box);
        rack.truth_detections.push_back({inst.label, inst.box, 1.0});

        if (spec.decoy_boxes && i % 3 == 0) {
            CandidateBox dup = box;
            dup.confidence *= 0.6;
            dup.center_x += jitter(rng);
            dup.center_y += jitter(rng);
            rack.detector_records.push_back(dup);
        }
    }
    if (spec.decoy_boxes && !instances.empty()) {
        const auto& inst = instances.front();
        rack.detector_records.push_back({0.9, spec.rack_width * 0.5, spec.rack_height * 0.5,
                                         inst.box.width() * 3.0, inst.box.height() * 0.3});
        rack.detector_records.push_back({0.01, inst.box.center().x, inst.box.center().y,
                                         inst.box.width(), inst.box.height()});
    }

    return rack;
}

}  // namespace shelfwatch
