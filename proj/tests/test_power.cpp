#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "shelfwatch/power.hpp"

using namespace shelfwatch;

namespace {

// Tiny frames keep long simulations cheap; the blur leaves flat frames flat.
GrayFrame flat(std::uint8_t level) { return GrayFrame::filled(16, 12, level); }

}  // namespace

TEST_CASE("daily consumption with the published duty cycle") {
    NodeEnergyConfig config;
    // 2 wakes x 243.2 mA x 12 s / 3600 + 0.006 mA x 24 h
    CHECK(daily_consumption_mah(config) == Catch::Approx(1.76533).margin(1e-4));
}

TEST_CASE("a node that never wakes only pays hibernation") {
    NodeEnergyConfig config;
    config.wakes_per_day = 0;
    CHECK(daily_consumption_mah(config) == Catch::Approx(0.144).margin(1e-12));
}

TEST_CASE("doubling the wake count doubles the active term") {
    NodeEnergyConfig two, four;
    four.wakes_per_day = 4;
    const double hib = two.hibernation_current_ma * 24.0;
    CHECK(daily_consumption_mah(four) - hib ==
          Catch::Approx(2.0 * (daily_consumption_mah(two) - hib)).epsilon(1e-12));
}

TEST_CASE("solar harvest offset from the reference cell") {
    NodeEnergyConfig config;
    const auto cell = HarvestSource::solar(5.2 * 2.7, 13.0, 0.7);
    CHECK(harvest_offset_mah({&cell, 1}, config) == Catch::Approx(0.93).margin(0.01));
}

TEST_CASE("rf harvest offset at the -8 dBm operating point") {
    NodeEnergyConfig config;
    const auto rf = HarvestSource::rf(0.018);
    CHECK(harvest_offset_mah({&rf, 1}, config) == Catch::Approx(0.432).margin(1e-12));
}

TEST_CASE("no sources harvest nothing") {
    CHECK(harvest_offset_mah({}, NodeEnergyConfig{}) == 0.0);
}

TEST_CASE("lux scaling is linear around the 500 lux reference") {
    CHECK(solar_density_at_lux(500.0) == Catch::Approx(13.0));
    CHECK(solar_density_at_lux(250.0) == Catch::Approx(6.5));
}

TEST_CASE("battery life lands near two years on the stock configuration") {
    const auto months = battery_life_months(NodeEnergyConfig{});
    REQUIRE(months.has_value());
    CHECK(*months >= 20.0);
    CHECK(*months <= 30.0);
}

TEST_CASE("harvesting beyond consumption means unbounded life") {
    const auto rf = HarvestSource::rf(1.0);  // 24 mAh/day >> consumption
    CHECK_FALSE(battery_life_months(NodeEnergyConfig{}, {&rf, 1}).has_value());
}

TEST_CASE("battery life is monotone in the demand and harvest parameters") {
    NodeEnergyConfig base;
    NodeEnergyConfig hungry = base;
    hungry.active_current_ma *= 1.5;
    CHECK(*battery_life_months(hungry) <= *battery_life_months(base));

    NodeEnergyConfig busy = base;
    busy.wakes_per_day += 2;
    CHECK(*battery_life_months(busy) <= *battery_life_months(base));

    const auto small = HarvestSource::solar(5.0, 13.0, 0.7);
    const auto large = HarvestSource::solar(10.0, 13.0, 0.7);
    CHECK(*battery_life_months(base, {&large, 1}) >= *battery_life_months(base, {&small, 1}));
}

TEST_CASE("a constant scene never transfers and matches the capture-only closed form") {
    NodeEnergyConfig config;
    const auto feed = [](std::size_t) { return flat(120); };
    const auto sim = simulate_node(100000, feed, config, ChangeParams{});
    CHECK(sim.depleted);
    CHECK(sim.state.total_transfers == 0);

    NodeEnergyConfig capture_only = config;
    capture_only.transfer_seconds = 0.0;
    const double expected_months = *battery_life_months(capture_only);
    CHECK(sim.lifetime_months() == Catch::Approx(expected_months).epsilon(0.01));
}

TEST_CASE("a scene changing every wake matches the full closed form") {
    NodeEnergyConfig config;
    const auto feed = [](std::size_t wake) { return flat(wake % 2 ? 210 : 90); };
    const auto sim = simulate_node(100000, feed, config, ChangeParams{});
    CHECK(sim.depleted);
    // every wake transfers except none are skipped
    CHECK(sim.state.total_transfers == sim.state.total_wakes);
    CHECK(sim.lifetime_months() == Catch::Approx(*battery_life_months(config)).epsilon(0.01));
}

TEST_CASE("a dead battery halts immediately with an empty trace") {
    NodeEnergyConfig config;
    config.battery_capacity_mah = 0.0;
    const auto sim = simulate_node(10, [](std::size_t) { return flat(100); }, config, ChangeParams{});
    CHECK(sim.days.empty());
    CHECK(sim.depleted);
}

TEST_CASE("the ledger conserves energy exactly") {
    NodeEnergyConfig config;
    config.battery_capacity_mah = 5.0;  // dies within a few days
    const auto rf = HarvestSource::rf(0.01);
    const auto feed = [](std::size_t wake) { return flat(wake % 3 ? 90 : 200); };
    const auto sim = simulate_node(10000, feed, config, ChangeParams{}, {&rf, 1});

    double charge = config.battery_capacity_mah;
    for (const auto& day : sim.days) {
        charge -= day.consumed_mah;
        charge += day.harvested_mah;
        CHECK(day.charge_mah == Catch::Approx(charge).margin(1e-9));
        charge = day.charge_mah;
        CHECK(charge >= 0.0);
        CHECK(charge <= config.battery_capacity_mah);
    }
    CHECK(sim.state.charge_mah == Catch::Approx(charge).margin(1e-9));
}

TEST_CASE("simulation runs are reproducible") {
    NodeEnergyConfig config;
    config.battery_capacity_mah = 3.0;
    const auto feed = [](std::size_t wake) { return flat(wake % 5 ? 100 : 220); };
    const auto a = simulate_node(5000, feed, config, ChangeParams{});
    const auto b = simulate_node(5000, feed, config, ChangeParams{});
    REQUIRE(a.days.size() == b.days.size());
    for (std::size_t i = 0; i < a.days.size(); ++i) {
        CHECK(a.days[i].consumed_mah == b.days[i].consumed_mah);
        CHECK(a.days[i].charge_mah == b.days[i].charge_mah);
        CHECK(a.days[i].transfers == b.days[i].transfers);
    }
    CHECK(a.state.total_wakes == b.state.total_wakes);
}
