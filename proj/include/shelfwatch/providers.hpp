#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "shelfwatch/catalog.hpp"
#include "shelfwatch/detection.hpp"
#include "shelfwatch/serial.hpp"

namespace shelfwatch {

// The rack image as the pipeline sees it: an identifier providers can key
// on, the rack dimensions, and optionally a path to the pixels for
// providers that run real inference.
struct RackScene {
    std::string id;
    double width = 0.0;
    double height = 0.0;
    std::string image_path;
};

// Candidate bounding-box source. Real deployments run a neural detector;
// tests read precomputed candidates from oracle files.
class DetectorProvider {
public:
    virtual ~DetectorProvider() = default;
    virtual int input_side() const { return 640; }
    virtual std::vector<CandidateBox> candidates(const RackScene& rack) = 0;
};

// Scene local-feature source.
class FeatureProvider {
public:
    virtual ~FeatureProvider() = default;
    virtual std::size_t descriptor_dim() const = 0;
    virtual std::vector<LocalFeature> extract(const RackScene& rack) = 0;
};

class NullDetectorProvider : public DetectorProvider {
public:
    std::vector<CandidateBox> candidates(const RackScene&) override { return {}; }
};

class NullFeatureProvider : public FeatureProvider {
public:
    std::size_t descriptor_dim() const override { return 0; }
    std::vector<LocalFeature> extract(const RackScene&) override { return {}; }
};

// Oracle detector reading a JSON map of rack id -> candidate records
// (cs, cx, cy, w, h). Unknown racks yield no candidates.
class FileDetectorProvider : public DetectorProvider {
public:
    explicit FileDetectorProvider(const std::string& path) {
        const json j = load_json_file(path);
        for (const auto& [rack_id, records] : j.at("racks").items())
            records_[rack_id] = records.get<std::vector<CandidateBox>>();
        if (j.contains("input_side")) input_side_ = j.at("input_side").get<int>();
    }

    int input_side() const override { return input_side_; }

    std::vector<CandidateBox> candidates(const RackScene& rack) override {
        auto it = records_.find(rack.id);
        return it == records_.end() ? std::vector<CandidateBox>{} : it->second;
    }

private:
    std::map<std::string, std::vector<CandidateBox>> records_;
    int input_side_ = 640;
};

// Oracle feature extractor reading a JSON map of rack id -> feature records.
class FileFeatureProvider : public FeatureProvider {
public:
    explicit FileFeatureProvider(const std::string& path) {
        const json j = load_json_file(path);
        dim_ = j.at("descriptor_dim").get<std::size_t>();
        for (const auto& [rack_id, records] : j.at("racks").items())
            records_[rack_id] = records.get<std::vector<LocalFeature>>();
    }

    std::size_t descriptor_dim() const override { return dim_; }

    std::vector<LocalFeature> extract(const RackScene& rack) override {
        auto it = records_.find(rack.id);
        return it == records_.end() ? std::vector<LocalFeature>{} : it->second;
    }

private:
    std::map<std::string, std::vector<LocalFeature>> records_;
    std::size_t dim_ = 0;
};

// Adapter that shells out to an external inference command. The command is
// run once per rack with three placeholders substituted:
//   {model}  path to the model-exchange (e.g. ONNX) file from config
//   {image}  path to the rack image
//   {out}    path the command must write candidate records to, as JSON
//            {"candidates": [{"cs":..,"cx":..,"cy":..,"w":..,"h":..}, ...]}
// Disabled by default; enable via provider config kind "external".
class ExternalDetectorProvider : public DetectorProvider {
public:
    ExternalDetectorProvider(std::string command_template, std::string model_path, int input_side = 640)
        : command_template_(std::move(command_template)),
          model_path_(std::move(model_path)),
          input_side_(input_side) {}

    int input_side() const override { return input_side_; }

    std::vector<CandidateBox> candidates(const RackScene& rack) override {
        if (rack.image_path.empty())
            throw std::runtime_error("external detector: rack '" + rack.id + "' has no image path");
        const auto out_path =
            (std::filesystem::temp_directory_path() / ("shelfwatch-detect-" + sanitize(rack.id) + ".json"))
                .string();
        std::string cmd = command_template_;
        replace_all(cmd, "{model}", model_path_);
        replace_all(cmd, "{image}", rack.image_path);
        replace_all(cmd, "{out}", out_path);
        const int rc = std::system(cmd.c_str());
        if (rc != 0)
            throw std::runtime_error("external detector: command failed (" + std::to_string(rc) + "): " + cmd);
        const json j = load_json_file(out_path);
        std::filesystem::remove(out_path);
        return j.at("candidates").get<std::vector<CandidateBox>>();
    }

private:
    static void replace_all(std::string& s, const std::string& from, const std::string& to) {
        for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size())
            s.replace(pos, from.size(), to);
    }

    static std::string sanitize(const std::string& s) {
        std::string out;
        for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
        return out;
    }

    std::string command_template_;
    std::string model_path_;
    int input_side_ = 640;
};

}  // namespace shelfwatch
