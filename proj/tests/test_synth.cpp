#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <random>

#include "shelfwatch/harness.hpp"
#include "shelfwatch/synth.hpp"
#include "support/stubs.hpp"

using namespace shelfwatch;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("shelfwatch-synth-" + std::to_string(std::random_device{}()));
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

AlignmentResult run_rack(const AnnotatedRack& rack) {
    auto detector = stubs::detector_for(rack);
    auto features = stubs::features_for(rack);
    return run_search(stubs::scene_for(rack), rack.reference, rack.catalog, detector, features)
        .alignment;
}

}  // namespace

TEST_CASE("the same seed reproduces the rack byte for byte") {
    const auto spec = SynthSpec::example();
    const auto a = generate_synthetic(77, spec, Perturbation::swap_adjacent);
    const auto b = generate_synthetic(77, spec, Perturbation::swap_adjacent);
    CHECK(a.image.pixels == b.image.pixels);
    CHECK(json(a.detector_records) == json(b.detector_records));
    CHECK(json(a.feature_records) == json(b.feature_records));
    CHECK(json(a.truth_rows) == json(b.truth_rows));
    const auto c = generate_synthetic(78, spec, Perturbation::swap_adjacent);
    CHECK(json(a.detector_records) != json(c.detector_records));
}

TEST_CASE("an unperturbed rack is fully compliant by construction") {
    const auto rack = generate_synthetic(5, SynthSpec::example());
    CHECK(rack.truth_mu == 1.0);
    for (const auto& row : rack.truth_rows) CHECK(row.status == GroupStatus::MT);
    CHECK(rack.truth_detections.size() ==
          static_cast<std::size_t>(rack.reference.total_quantity()));

    const auto alignment = run_rack(rack);
    CHECK(alignment.mu == 1.0);
    CHECK(compliance_metrics(alignment, rack.truth_rows).f1() == 1.0);
}

TEST_CASE("remove_item produces an insufficient or missing group") {
    for (std::uint64_t seed = 100; seed < 110; ++seed) {
        const auto rack = generate_synthetic(seed, SynthSpec::example(), Perturbation::remove_item);
        CHECK(rack.truth_mu < 1.0);
        CHECK(rack.truth_matched_units == rack.truth_required_units - 1);

        const auto alignment = run_rack(rack);
        CHECK(alignment.mu == rack.truth_mu);
        CHECK(compliance_metrics(alignment, rack.truth_rows).f1() == 1.0);
    }
}

TEST_CASE("swap_adjacent double-gaps the lighter group") {
    for (std::uint64_t seed = 200; seed < 210; ++seed) {
        const auto rack = generate_synthetic(seed, SynthSpec::example(), Perturbation::swap_adjacent);
        long gaps = 0;
        for (const auto& row : rack.truth_rows) gaps += row.status == GroupStatus::NM ? 1 : 0;
        CHECK(gaps == 2);

        const auto alignment = run_rack(rack);
        CHECK(compliance_metrics(alignment, rack.truth_rows).f1() == 1.0);
    }
}

TEST_CASE("add_foreign keeps the ratio at one but flags the intruder") {
    for (std::uint64_t seed = 300; seed < 310; ++seed) {
        const auto rack = generate_synthetic(seed, SynthSpec::example(), Perturbation::add_foreign);
        CHECK(rack.truth_mu == 1.0);
        bool has_intruder = false;
        for (const auto& row : rack.truth_rows)
            has_intruder = has_intruder || (row.status == GroupStatus::NM && row.ref_label == "<gap>");
        CHECK(has_intruder);

        const auto alignment = run_rack(rack);
        CHECK(compliance_metrics(alignment, rack.truth_rows).f1() == 1.0);
    }
}

TEST_CASE("add_extra marks the group as over-stocked") {
    for (std::uint64_t seed = 400; seed < 410; ++seed) {
        const auto rack = generate_synthetic(seed, SynthSpec::example(), Perturbation::add_extra);
        CHECK(rack.truth_mu == 1.0);
        bool has_me = false;
        for (const auto& row : rack.truth_rows) has_me = has_me || row.status == GroupStatus::ME;
        CHECK(has_me);

        const auto alignment = run_rack(rack);
        CHECK(compliance_metrics(alignment, rack.truth_rows).f1() == 1.0);
    }
}

TEST_CASE("detection ground truth is reproduced exactly on clean racks") {
    for (std::uint64_t seed = 900; seed < 905; ++seed) {
        const auto rack = generate_synthetic(seed, SynthSpec::example());
        auto detector = stubs::detector_for(rack);
        auto features = stubs::features_for(rack);
        const auto result =
            run_search(stubs::scene_for(rack), rack.reference, rack.catalog, detector, features);
        const auto report = detection_metrics(result.detections, rack.truth_detections);
        CHECK(report.f1() == 1.0);
    }
}

TEST_CASE("oversized layouts are rejected") {
    SynthSpec spec = SynthSpec::example();
    spec.rack_width = 300.0;
    CHECK_THROWS_AS(generate_synthetic(1, spec), std::invalid_argument);
}

TEST_CASE("a dataset written to disk loads back and evaluates clean") {
    TempDir dir;
    const auto spec = SynthSpec::example();
    std::vector<AnnotatedRack> racks;
    for (std::uint64_t seed = 1; seed <= 4; ++seed)
        racks.push_back(generate_synthetic(seed, spec,
                                           seed % 2 ? Perturbation::none : Perturbation::remove_item));
    write_dataset(dir.path, racks);

    for (const char* name :
         {"meta.json", "catalog.json", "detections.json", "features.json", "references.json", "truth.json"})
        CHECK(std::filesystem::exists(dir.path / name));

    const auto dataset = load_dataset(dir.path);
    REQUIRE(dataset.entries.size() == 4);
    const auto summary = evaluate_dataset(dataset, SearchParams{});
    CHECK(summary.status_match_rate() == 1.0);
    CHECK(summary.detection.f1() == 1.0);

    const auto report = eval_report_json(summary);
    CHECK(report.at("racks").size() == 4);
    CHECK(report.at("compliance").at("f1") == 1.0);
}
