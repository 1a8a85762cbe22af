#include <doctest.h>
#include <omp.h>

#include <cmath>

#include "gevent/reference.hpp"
#include "helpers.hpp"

using namespace gevent;
using testing::cube_from;
using testing::error_code;

TEST_SUITE("photon_sim") {
TEST_CASE("alpha calibration hits the target photons per pixel") {
    FluxVideo v(4, 4, 3, 1000.0, 2.0);
    CHECK(calibrate_alpha(v, 1.0).alpha == doctest::Approx(0.5));
    CHECK(calibrate_alpha(v, 1.0).dark == kDefaultDarkRate);
    FluxVideo q(2, 2, 1, 1000.0, 0.25);
    CHECK(calibrate_alpha(q, 1.0).alpha == doctest::Approx(4.0));
    FluxVideo zero(2, 2, 5);
    CHECK(error_code([&] { calibrate_alpha(zero); }) == Errc::numeric);
}

TEST_CASE("zero flux and zero dark never detect; huge flux always detects") {
    FluxVideo dark(8, 8, 4);
    CHECK(simulate_cube(dark, {1.0, 0.0}, 16, 1).mean_rate() == 0.0);
    FluxVideo bright(8, 8, 4, 1000.0, 1e6);
    CHECK(simulate_cube(bright, {1.0, 0.0}, 16, 1).mean_rate() == 1.0);
}

TEST_CASE("detection rate at one photon per pixel is 1 - 1/e within 4 sigma") {
    FluxVideo v(64, 64, 64, 1000.0, 1.0);
    const PhotonCube c = simulate_cube(v, {1.0, 0.0}, 4, 11);
    const double p = 1.0 - std::exp(-1.0);
    const double n = static_cast<double>(c.total_bits());
    CHECK(std::abs(c.mean_rate() - p) <= 4.0 * std::sqrt(p * (1 - p) / n));
}

TEST_CASE("calibrated simulation recovers the target photons per pixel within 2%") {
    FluxVideo v(8, 8, 1, 1000.0);
    for (std::uint32_t y = 0; y < 8; ++y)
        for (std::uint32_t x = 0; x < 8; ++x) v.at(0, x, y) = 0.2 + 0.05 * (x + y);
    const SpadCalibration cal = calibrate_alpha(v, 1.0);
    const PhotonCube c = simulate_cube(v, cal, 16384, 3);
    double ppp = 0.0;
    for (std::uint32_t y = 0; y < 8; ++y)
        for (std::uint32_t x = 0; x < 8; ++x) {
            std::uint32_t ones = 0;
            for (std::uint32_t t = 0; t < c.frames(); ++t) ones += c.bit(x, y, t);
            ppp += -std::log1p(-static_cast<double>(ones) / c.frames()) - cal.dark;
        }
    CHECK(ppp / 64 == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("consecutive bits are uncorrelated") {
    FluxVideo v(32, 32, 1, 1000.0, 0.7);
    const PhotonCube c = simulate_cube(v, {1.0, 0.0}, 1025, 5);
    double sa = 0, sb = 0, sab = 0, saa = 0, sbb = 0, n = 0;
    for (std::uint32_t y = 0; y < 32; ++y)
        for (std::uint32_t x = 0; x < 32; ++x)
            for (std::uint32_t t = 0; t + 1 < c.frames(); ++t) {
                const double a = c.bit(x, y, t), b = c.bit(x, y, t + 1);
                sa += a, sb += b, sab += a * b, saa += a * a, sbb += b * b, n += 1;
            }
    const double cov = sab / n - (sa / n) * (sb / n);
    const double r = cov / std::sqrt((saa / n - sa * sa / n / n) * (sbb / n - sb * sb / n / n));
    CHECK(n >= 1e6);
    CHECK(std::abs(r) < 0.01);
}

TEST_CASE("simulation is deterministic in the seed and independent of thread count") {
    SceneParams p;
    p.width = 37;
    p.height = 19;
    p.frames = 9;
    const FluxVideo v = synth_scene(SceneKind::moving_block, p);
    const SpadCalibration cal = calibrate_alpha(v);
    const PhotonCube ref = reference::simulate_cube(v, cal, 7, 42);
    const int saved = omp_get_max_threads();
    for (int threads : {1, 2, 3, 8}) {
        omp_set_num_threads(threads);
        CHECK(simulate_cube(v, cal, 7, 42) == ref);
    }
    omp_set_num_threads(saved);
    CHECK_FALSE(simulate_cube(v, cal, 7, 43) == ref);
}

TEST_CASE("pad bits of a packed frame stay zero") {
    FluxVideo v(3, 3, 2, 1000.0, 1e6);
    const PhotonCube c = simulate_cube(v, {1.0, 0.0}, 2, 1);
    CHECK(c.frame_bytes() == 2);
    for (std::uint32_t t = 0; t < c.frames(); ++t) {
        CHECK(c.frame_data(t)[0] == 0xFF);
        CHECK(c.frame_data(t)[1] == 0x80);
    }
}

TEST_CASE("bits are packed most significant first") {
    const char* pattern = "10110010";
    const PhotonCube row = cube_from(8, 1, 1, [&](auto x, auto, auto) { return pattern[x] == '1'; });
    CHECK(row.bytes().size() == 1);
    CHECK(row.bytes()[0] == 0xB2);
    // One pixel over eight frames occupies one byte per frame.
    const PhotonCube series = cube_from(1, 1, 8, [&](auto, auto, auto t) { return pattern[t] == '1'; });
    CHECK(series.bytes().size() == 8);
    for (std::uint32_t t = 0; t < 8; ++t) CHECK(series.bytes()[t] == (pattern[t] == '1' ? 0x80 : 0x00));
}

TEST_CASE("dither places exactly k ones in every 32 frames at p = k/32") {
    for (int k : {0, 1, 7, 16, 31, 32}) {
        FluxVideo v(2, 1, 4, 1000.0, k / 32.0);
        const PhotonCube c = dither_cube(v, 32);
        for (std::uint32_t x = 0; x < 2; ++x)
            for (std::uint32_t w = 0; w < 4; ++w) {
                int ones = 0;
                for (std::uint32_t t = 0; t < 32; ++t) ones += c.bit(x, 0, w * 32 + t);
                CHECK(ones == k);
            }
    }
}

TEST_CASE("synthetic scenes") {
    SceneParams p;
    p.width = 16;
    p.height = 8;
    p.frames = 100;
    p.level = 0.5;
    const FluxVideo s = synth_scene(SceneKind::static_scene, p);
    CHECK(s.frame_count() == 100);
    for (double v : s.data) CHECK(v == 0.5);

    p.frames = 1000;
    p.level = 0.2;
    p.level2 = 0.8;
    p.step_frame = 500;
    const FluxVideo st = synth_scene(SceneKind::step, p);
    CHECK(st.at(499, 3, 3) == 0.2);
    CHECK(st.at(500, 3, 3) == 0.8);

    p.frames = 40;
    p.speed = 0.25;
    p.block_size = 4;
    p.block_x0 = 2;
    p.block_y0 = 1;
    const FluxVideo mb = synth_scene(SceneKind::moving_block, p);
    for (std::uint32_t f = 0; f < 40; ++f) {
        const std::uint32_t left = 2 + static_cast<std::uint32_t>(std::floor(0.25 * f));
        CHECK(mb.at(f, left, 1) == 0.8);
        CHECK(mb.at(f, left + 3, 4) == 0.8);
        CHECK(mb.at(f, left + 4, 1) == 0.2);
        if (left > 0) CHECK(mb.at(f, left - 1, 1) == 0.2);
        CHECK(mb.at(f, left, 5) == 0.2);
    }

    p.pieces = {{3, 0.1}, {2, 0.9}};
    const FluxVideo pw = synth_scene(SceneKind::piecewise_1d, p);
    CHECK(pw.width == 1);
    CHECK(pw.data == std::vector<double>{0.1, 0.1, 0.1, 0.9, 0.9});

    CHECK(parse_scene_kind("moving_block") == SceneKind::moving_block);
    CHECK(error_code([] { parse_scene_kind("spiral"); }) == Errc::invalid_argument);
    SceneParams bad = p;
    bad.step_frame = 5000;
    CHECK(error_code([&] { synth_scene(SceneKind::step, bad); }) == Errc::invalid_argument);
}

TEST_CASE("hot pixels are flagged by their dark-frame rate") {
    FluxVideo none(8, 8, 10);
    CHECK(detect_hot_pixels(simulate_cube(none, {1.0, 0.0}, 100, 1), 0.01).count() == 0);

    const PhotonCube one = cube_from(4, 4, 50, [](auto x, auto y, auto) { return x == 2 && y == 1; });
    const HotPixelMask m1 = detect_hot_pixels(one, 0.5);
    CHECK(m1.count() == 1);
    CHECK(m1.is_hot(2, 1));

    FluxVideo v(20, 10, 1);
    std::vector<std::size_t> hot;
    for (std::size_t i = 0; i < 10; ++i) hot.push_back(i * 19 + 3);  // 5% of 200
    for (std::size_t i : hot) v.data[i] = -std::log(0.1);
    const PhotonCube c = simulate_cube(v, {1.0, kDefaultDarkRate}, 1000, 9);
    const HotPixelMask m = detect_hot_pixels(c, 0.5);
    CHECK(m.count() == hot.size());
    for (std::size_t i : hot) CHECK(m.hot[i] == 1);
}

TEST_CASE("invalid inputs are rejected") {
    FluxVideo neg(2, 2, 1, 1000.0, -1.0);
    CHECK(error_code([&] { neg.validate(); }) == Errc::invalid_argument);
    FluxVideo nan(2, 2, 1, 1000.0, std::nan(""));
    CHECK(error_code([&] { nan.validate(); }) == Errc::invalid_argument);
    CHECK(error_code([] { SpadCalibration{0.0, 0.0}.validate(); }) == Errc::invalid_argument);
    FluxVideo ok(2, 2, 1, 1000.0, 1.0);
    CHECK(error_code([&] { simulate_cube(ok, {1.0, 0.0}, 0, 1); }) == Errc::invalid_argument);
}
}
