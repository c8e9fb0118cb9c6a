#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <random>

#include "shelfwatch/ingest.hpp"

using namespace shelfwatch;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("shelfwatch-test-" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("sha256 of a known vector") {
    const std::string abc = "abc";
    CHECK(sha256_hex({reinterpret_cast<const std::uint8_t*>(abc.data()), abc.size()}) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("a 1600x1200 shelf splits into three full-width racks") {
    const auto shelf = Image::filled(1600, 1200, {10, 20, 30});
    const auto racks = split_racks(shelf, 3);
    REQUIRE(racks.size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(racks[i].source_row_begin == i * 400);
        CHECK(racks[i].source_row_end == (i + 1) * 400);
        CHECK(racks[i].image.width == 1600);
        CHECK(racks[i].image.height == 400);
    }
}

TEST_CASE("a single rack resizes the whole view to the working height") {
    const auto shelf = Image::filled(1600, 1200, {0, 0, 0});
    const auto racks = split_racks(shelf, 1);
    REQUIRE(racks.size() == 1);
    CHECK(racks[0].image.height == 400);
    CHECK(racks[0].image.width == 533);  // 1600 * 400 / 1200 rounded
}

TEST_CASE("four racks come out upscaled to the working height") {
    const auto shelf = Image::filled(1600, 1200, {0, 0, 0});
    const auto racks = split_racks(shelf, 4);
    REQUIRE(racks.size() == 4);
    for (const auto& r : racks) {
        CHECK(r.source_row_end - r.source_row_begin == 300);
        CHECK(r.image.height == 400);
        CHECK(r.image.width == 2133);  // 1600 * 400 / 300 rounded
    }
}

TEST_CASE("strips tile the source exactly even for awkward counts") {
    const auto shelf = Image::filled(64, 101, {0, 0, 0});
    const auto racks = split_racks(shelf, 7, 16);
    int expected_begin = 0;
    for (const auto& r : racks) {
        CHECK(r.source_row_begin == expected_begin);
        expected_begin = r.source_row_end;
    }
    CHECK(expected_begin == 101);
}

TEST_CASE("split validation") {
    const auto shelf = Image::filled(8, 6, {0, 0, 0});
    CHECK_THROWS_AS(split_racks(shelf, 0), std::invalid_argument);
    CHECK_THROWS_AS(split_racks(shelf, 7), std::invalid_argument);
}

TEST_CASE("letterboxing a 1600x400 rack") {
    const auto rack = Image::filled(1600, 400, {50, 60, 70});
    const auto padded = pad_for_detector(rack, 640);
    CHECK(padded.image.width == 640);
    CHECK(padded.image.height == 640);
    CHECK(padded.transform.scale == Catch::Approx(0.4).epsilon(1e-12));
    CHECK(padded.transform.dx == 0.0);
    CHECK(padded.transform.dy == 240.0);
    // padding rows are the neutral fill, content rows are not
    CHECK(padded.image.at(320, 0)[0] == 114);
    CHECK(padded.image.at(320, 639)[0] == 114);
    CHECK(padded.image.at(320, 320)[0] != 114);
}

TEST_CASE("square input needs no padding") {
    const auto rack = Image::filled(400, 400, {90, 90, 90});
    const auto padded = pad_for_detector(rack, 640);
    CHECK(padded.transform.dy == 0.0);
    CHECK(padded.transform.scale == Catch::Approx(1.6).epsilon(1e-12));
}

TEST_CASE("taller-than-wide input is rejected") {
    CHECK_THROWS_AS(pad_for_detector(Image::filled(100, 200, {0, 0, 0})), std::invalid_argument);
}

TEST_CASE("box coordinates round-trip through the letterbox transform") {
    const auto rack = Image::filled(1600, 400, {0, 0, 0});
    const auto padded = pad_for_detector(rack, 640);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> x(0.0, 1600.0), y(0.0, 400.0);
    for (int i = 0; i < 200; ++i) {
        const Point p{x(rng), y(rng)};
        const Point round_tripped = padded.transform.to_rack(padded.transform.to_detector(p));
        CHECK(std::abs(round_tripped.x - p.x) < 0.5);
        CHECK(std::abs(round_tripped.y - p.y) < 0.5);
    }
}

TEST_CASE("object store is content addressed and idempotent") {
    TempDir dir;
    ObjectStore store(dir.path);
    const std::vector<std::uint8_t> payload{1, 2, 3, 4, 5};
    const auto h1 = store.put(payload);
    const auto h2 = store.put(payload);
    CHECK(h1 == h2);
    CHECK(store.contains(h1));
    CHECK(store.get(h1) == payload);

    // exactly one object file exists
    int files = 0;
    for (const auto& e : std::filesystem::recursive_directory_iterator(dir.path / "objects"))
        if (e.is_regular_file()) ++files;
    CHECK(files == 1);
}

TEST_CASE("reports append to the log and survive a restart") {
    TempDir dir;
    {
        ObjectStore store(dir.path);
        store.append_report("job-1", {{"mu", 0.5}});
        store.append_report("job-2", {{"mu", 1.0}});
        REQUIRE(store.find_report("job-1").has_value());
        CHECK((*store.find_report("job-1"))["mu"] == 0.5);
        CHECK_FALSE(store.find_report("missing").has_value());
    }
    ObjectStore reopened(dir.path);
    REQUIRE(reopened.find_report("job-2").has_value());
    CHECK((*reopened.find_report("job-2"))["mu"] == 1.0);
}
