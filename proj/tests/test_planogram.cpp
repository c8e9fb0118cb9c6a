#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "shelfwatch/planogram.hpp"

using namespace shelfwatch;

namespace {

Detection det(const char* label, double cx, double cy = 100.0, double w = 50.0, double h = 80.0) {
    return {label, Box::from_center({cx, cy}, w, h), 1.0};
}

}  // namespace

TEST_CASE("empty detection list gives an empty sequence") {
    CHECK(obj_to_planogram({}).empty());
}

TEST_CASE("detections are sorted then run-length grouped") {
    const auto seq = obj_to_planogram({det("B", 300), det("A", 100), det("A", 200)});
    REQUIRE(seq.size() == 2);
    CHECK(seq.groups[0].label == "A");
    CHECK(seq.groups[0].quantity == 2);
    CHECK(seq.groups[1].label == "B");
    CHECK(seq.groups[1].quantity == 1);
}

TEST_CASE("non-adjacent runs of the same label stay separate") {
    const auto seq = obj_to_planogram({det("A", 100), det("B", 200), det("A", 300)});
    REQUIRE(seq.size() == 3);
    CHECK(seq.groups[0].label == "A");
    CHECK(seq.groups[1].label == "B");
    CHECK(seq.groups[2].label == "A");
    for (const auto& g : seq.groups) CHECK(g.quantity == 1);
}

TEST_CASE("group span stretches from first top-left to last bottom-right") {
    const auto seq = obj_to_planogram({det("A", 100), det("A", 160)});
    REQUIRE(seq.size() == 1);
    REQUIRE(seq.groups[0].span.has_value());
    CHECK(seq.groups[0].span->begin == 75.0);
    CHECK(seq.groups[0].span->end == 185.0);
}

TEST_CASE("center-x ties break by label then center-y") {
    const auto seq = obj_to_planogram({det("B", 100, 50), det("A", 100, 90), det("A", 100, 20)});
    REQUIRE(seq.size() == 2);
    CHECK(seq.groups[0].label == "A");
    CHECK(seq.groups[0].quantity == 2);
    CHECK(seq.groups[1].label == "B");
}

TEST_CASE("any input permutation produces the identical sequence") {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> cx(0.0, 1000.0);
    std::uniform_int_distribution<int> sym(0, 2);

    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Detection> dets;
        const int n = 1 + static_cast<int>(rng() % 8);
        for (int i = 0; i < n; ++i)
            dets.push_back(det(std::array{"A", "B", "C"}[sym(rng)], cx(rng)));

        const auto baseline = obj_to_planogram(dets);
        CHECK(baseline.total_quantity() == n);
        for (int p = 0; p < 10; ++p) {
            std::shuffle(dets.begin(), dets.end(), rng);
            CHECK(obj_to_planogram(dets) == baseline);
        }
        // adjacent groups always carry distinct labels
        for (std::size_t g = 1; g < baseline.size(); ++g)
            CHECK(baseline.groups[g].label != baseline.groups[g - 1].label);
    }
}
