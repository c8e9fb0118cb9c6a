#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "shelfwatch/match.hpp"
#include "support/oracles.hpp"

using namespace shelfwatch;

namespace {

LocalFeature feat(std::initializer_list<double> d, double x = 0, double y = 0) {
    return {x, y, std::vector<double>(d)};
}

}  // namespace

TEST_CASE("tau_alpha schedule") {
    CHECK(tau_alpha(1.0) == Catch::Approx(0.75).epsilon(1e-12));
    CHECK(tau_alpha(0.75) == Catch::Approx(0.80).epsilon(1e-12));
    CHECK(tau_alpha(1e-9) == Catch::Approx(0.95).margin(1e-8));
    CHECK(MatchParams{0.5625}.tau() == Catch::Approx(0.95 - 0.2 * 0.5625).epsilon(1e-12));
}

TEST_CASE("clear nearest neighbor passes the ratio test") {
    // model at origin; scene distances 0.5 and 1.0
    const std::vector<LocalFeature> model{feat({0.0})};
    const std::vector<LocalFeature> scene{feat({0.5}, 10, 0), feat({1.0}, 20, 0)};
    const auto kept = match_features(model, scene, 0.75);
    REQUIRE(kept.size() == 1);
    CHECK(kept[0] == 0);
}

TEST_CASE("ambiguous nearest neighbor fails the ratio test") {
    const std::vector<LocalFeature> model{feat({0.0})};
    const std::vector<LocalFeature> scene{feat({0.8}), feat({1.0})};
    CHECK(match_features(model, scene, 0.75).empty());
}

TEST_CASE("fewer than two scene features yields nothing") {
    const std::vector<LocalFeature> model{feat({0.0})};
    CHECK(match_features(model, {}, 0.75).empty());
    const std::vector<LocalFeature> one{feat({0.1})};
    CHECK(match_features(model, one, 0.75).empty());
}

TEST_CASE("matching agrees with the brute-force 2-NN oracle") {
    std::mt19937_64 rng(17003);
    for (int trial = 0; trial < 100; ++trial) {
        const auto model = oracles::random_features(rng, 10, 8);
        const auto scene = oracles::random_features(rng, 50, 8);
        const double tau = 0.6 + 0.35 * (trial % 10) / 10.0;
        CHECK(match_features(model, scene, tau) == oracles::two_nn_matches(model, scene, tau));
    }
}

TEST_CASE("lowering tau never adds matches") {
    std::mt19937_64 rng(90);
    const auto model = oracles::random_features(rng, 12, 8);
    const auto scene = oracles::random_features(rng, 40, 8);
    std::size_t previous = 0;
    for (double tau = 0.05; tau <= 0.95; tau += 0.05) {
        const auto kept = match_features(model, scene, tau);
        CHECK(kept.size() >= previous);
        CHECK(kept.size() <= std::min(model.size(), scene.size()));
        previous = kept.size();
    }
}
