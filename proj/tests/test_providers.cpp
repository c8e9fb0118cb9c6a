#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <random>

#include "shelfwatch/providers.hpp"

using namespace shelfwatch;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("shelfwatch-prov-" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("file detector provider serves per-rack candidate records") {
    TempDir dir;
    const json records{{"input_side", 512},
                       {"racks",
                        {{"rack-1", json::array({{{"cs", 0.9}, {"cx", 100.0}, {"cy", 50.0}, {"w", 40.0}, {"h", 80.0}}})},
                         {"rack-2", json::array()}}}};
    const auto path = (dir.path / "detections.json").string();
    save_json_file(records, path);

    FileDetectorProvider provider(path);
    CHECK(provider.input_side() == 512);
    const auto boxes = provider.candidates({"rack-1", 1600, 400, ""});
    REQUIRE(boxes.size() == 1);
    CHECK(boxes[0].confidence == 0.9);
    CHECK(boxes[0].center_x == 100.0);
    CHECK(provider.candidates({"rack-2", 1600, 400, ""}).empty());
    CHECK(provider.candidates({"unknown", 1600, 400, ""}).empty());
}

TEST_CASE("file feature provider serves per-rack features") {
    TempDir dir;
    const json records{{"descriptor_dim", 3},
                       {"racks",
                        {{"rack-1", json::array({{{"x", 5.0}, {"y", 6.0}, {"d", {1.0, 2.0, 3.0}}}})}}}};
    const auto path = (dir.path / "features.json").string();
    save_json_file(records, path);

    FileFeatureProvider provider(path);
    CHECK(provider.descriptor_dim() == 3);
    const auto feats = provider.extract({"rack-1", 1600, 400, ""});
    REQUIRE(feats.size() == 1);
    CHECK(feats[0].descriptor == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(provider.extract({"other", 1600, 400, ""}).empty());
}

TEST_CASE("external detector runs the configured command and parses its output") {
    TempDir dir;
    const auto fixture = dir.path / "fixture.json";
    save_json_file(json{{"candidates",
                         json::array({{{"cs", 0.8}, {"cx", 10.0}, {"cy", 20.0}, {"w", 30.0}, {"h", 40.0}}})}},
                   fixture.string());
    const auto image = dir.path / "rack.ppm";
    std::ofstream(image).put('\n');

    ExternalDetectorProvider provider("cp " + fixture.string() + " {out} && test -f {image} && test -n '{model}'",
                                      "model.onnx");
    const auto boxes = provider.candidates({"rack-x", 1600, 400, image.string()});
    REQUIRE(boxes.size() == 1);
    CHECK(boxes[0].confidence == 0.8);
    CHECK(boxes[0].height == 40.0);
}

TEST_CASE("external detector failures raise diagnostics") {
    ExternalDetectorProvider provider("false", "model.onnx");
    CHECK_THROWS_AS(provider.candidates({"rack-x", 1600, 400, "/tmp/nonexistent.ppm"}),
                    std::runtime_error);
    ExternalDetectorProvider no_image("true", "model.onnx");
    CHECK_THROWS_AS(no_image.candidates({"rack-x", 1600, 400, ""}), std::runtime_error);
}
