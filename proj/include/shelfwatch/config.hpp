#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "shelfwatch/change.hpp"
#include "shelfwatch/power.hpp"
#include "shelfwatch/providers.hpp"
#include "shelfwatch/search.hpp"
#include "shelfwatch/serial.hpp"

namespace shelfwatch {

// Detection/feature source selection. Kinds: "null" (no candidates),
// "file" (oracle records keyed by rack id), and for detectors "external"
// (spawn an inference command against a model-exchange file).
struct ProviderConfig {
    std::string detector_kind = "null";
    std::string detector_path;      // oracle records file
    std::string detector_command;   // external: command template with {model} {image} {out}
    std::string detector_model;     // external: model-exchange file path
    int detector_input_side = 640;
    std::string feature_kind = "null";
    std::string feature_path;
};

inline void from_json(const json& j, ProviderConfig& p) {
    if (j.contains("detector")) {
        const auto& d = j.at("detector");
        p.detector_kind = d.value("kind", p.detector_kind);
        p.detector_path = d.value("path", p.detector_path);
        p.detector_command = d.value("command", p.detector_command);
        p.detector_model = d.value("model", p.detector_model);
        p.detector_input_side = d.value("input_side", p.detector_input_side);
    }
    if (j.contains("features")) {
        const auto& f = j.at("features");
        p.feature_kind = f.value("kind", p.feature_kind);
        p.feature_path = f.value("path", p.feature_path);
    }
}

inline std::unique_ptr<DetectorProvider> make_detector(const ProviderConfig& p) {
    if (p.detector_kind == "null") return std::make_unique<NullDetectorProvider>();
    if (p.detector_kind == "file") return std::make_unique<FileDetectorProvider>(p.detector_path);
    if (p.detector_kind == "external")
        return std::make_unique<ExternalDetectorProvider>(p.detector_command, p.detector_model,
                                                          p.detector_input_side);
    throw std::invalid_argument("provider config: unknown detector kind '" + p.detector_kind + "'");
}

inline std::unique_ptr<FeatureProvider> make_features(const ProviderConfig& p) {
    if (p.feature_kind == "null") return std::make_unique<NullFeatureProvider>();
    if (p.feature_kind == "file") return std::make_unique<FileFeatureProvider>(p.feature_path);
    throw std::invalid_argument("provider config: unknown feature kind '" + p.feature_kind + "'");
}

struct PipelineConfig {
    ChangeParams change;
    SearchParams search;

    static PipelineConfig defaults() { return {}; }
};

inline void from_json(const json& j, PipelineConfig& c) {
    if (j.contains("change")) {
        const auto& ch = j.at("change");
        c.change.pixel_threshold = ch.value("pixel_threshold", c.change.pixel_threshold);
        c.change.change_fraction_threshold =
            ch.value("change_fraction_threshold", c.change.change_fraction_threshold);
        if (ch.contains("blur")) {
            c.change.blur.size = ch.at("blur").value("size", c.change.blur.size);
            c.change.blur.sigma = ch.at("blur").value("sigma", c.change.blur.sigma);
        }
    }
    if (j.contains("match")) {
        const auto& m = j.at("match");
        c.search.ratio.base = m.value("tau_base", c.search.ratio.base);
        c.search.ratio.slope = m.value("tau_slope", c.search.ratio.slope);
        c.search.alpha_decay = m.value("alpha_decay", c.search.alpha_decay);
    }
    if (j.contains("search")) {
        const auto& s = j.at("search");
        c.search.max_stall = s.value("max_stall", c.search.max_stall);
        c.search.nms_iou = s.value("nms_iou", c.search.nms_iou);
    }
    if (j.contains("align"))
        c.search.align.dynamic_border = j.at("align").value("dynamic_border", c.search.align.dynamic_border);
}

struct PowerConfig {
    NodeEnergyConfig node;
    std::vector<HarvestSource> sources;
};

inline void from_json(const json& j, PowerConfig& c) {
    if (j.contains("node")) {
        const auto& n = j.at("node");
        c.node.active_current_ma = n.value("active_current_ma", c.node.active_current_ma);
        c.node.capture_seconds = n.value("capture_seconds", c.node.capture_seconds);
        c.node.transfer_seconds = n.value("transfer_seconds", c.node.transfer_seconds);
        c.node.wakes_per_day = n.value("wakes_per_day", c.node.wakes_per_day);
        c.node.hibernation_current_ma = n.value("hibernation_current_ma", c.node.hibernation_current_ma);
        c.node.battery_capacity_mah = n.value("battery_capacity_mah", c.node.battery_capacity_mah);
        c.node.supply_voltage = n.value("supply_voltage", c.node.supply_voltage);
    }
    if (j.contains("sources")) {
        for (const auto& sj : j.at("sources")) {
            const auto kind = sj.at("kind").get<std::string>();
            if (kind == "solar") {
                auto s = HarvestSource::solar(sj.value("cell_area_cm2", 0.0),
                                              sj.value("power_density_uw_cm2", 13.0),
                                              sj.value("pmic_efficiency", 1.0));
                if (sj.contains("lux"))
                    s.power_density_uw_cm2 = solar_density_at_lux(sj.at("lux").get<double>());
                c.sources.push_back(s);
            } else if (kind == "rf") {
                c.sources.push_back(HarvestSource::rf(sj.value("output_current_ma", 0.0)));
            } else {
                throw std::invalid_argument("power config: unknown source kind '" + kind + "'");
            }
        }
    }
}

// Per-device store layout: how many racks the camera sees and the reference
// planogram for each.
struct DeviceConfig {
    int rack_count = 3;
    std::vector<PlanogramSeq> references;
};

inline void from_json(const json& j, DeviceConfig& d) {
    d.rack_count = j.value("rack_count", d.rack_count);
    if (j.contains("references")) j.at("references").get_to(d.references);
}

struct ServiceConfig {
    int port = 8080;
    std::string token;  // shared upload token; empty disables auth (tests only)
    std::string storage_root = "./storage";
    int workers = 2;
    std::size_t queue_capacity = 32;
    int rack_height = 400;
    int detector_side = 640;
    std::string catalog_path;
    std::map<std::string, DeviceConfig> devices;
    PipelineConfig pipeline;
    ProviderConfig providers;
};

inline void from_json(const json& j, ServiceConfig& c) {
    c.port = j.value("port", c.port);
    c.token = j.value("token", c.token);
    c.storage_root = j.value("storage_root", c.storage_root);
    c.workers = j.value("workers", c.workers);
    c.queue_capacity = j.value("queue_capacity", c.queue_capacity);
    c.rack_height = j.value("rack_height", c.rack_height);
    c.detector_side = j.value("detector_side", c.detector_side);
    c.catalog_path = j.value("catalog_path", c.catalog_path);
    if (j.contains("devices"))
        for (const auto& [id, dj] : j.at("devices").items()) c.devices[id] = dj.get<DeviceConfig>();
    if (j.contains("pipeline")) j.at("pipeline").get_to(c.pipeline);
    if (j.contains("providers")) j.at("providers").get_to(c.providers);
}

template <typename T>
T load_config(const std::string& path) {
    T config{};
    if (!path.empty()) load_json_file(path).get_to(config);
    return config;
}

}  // namespace shelfwatch
