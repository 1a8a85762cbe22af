#include <doctest.h>

#include <random>

#include "helpers.hpp"

using namespace gevent;
using testing::error_code;

namespace {

EventPacket scalar(std::uint32_t t, std::uint16_t x, std::uint16_t y, double v) { return {t, x, y, ScalarPayload{v}}; }

}  // namespace

TEST_SUITE("reconstruct") {
TEST_CASE("a single flush spans the whole clip") {
    EventStream s{default_config(Method::ema, 1, 1, 4096), {scalar(4095, 0, 0, 0.25)}};
    const SegmentMap m = backtrack(s, BacktrackOptions{false});
    REQUIRE(m.at(0, 0).size() == 1);
    CHECK(m.at(0, 0)[0] == Segment{0, 4096, 0.25, {}});
}

TEST_CASE("an event timestamp is the last frame of its segment") {
    EventStream s{default_config(Method::ema, 1, 1, 4096), {scalar(100, 0, 0, 0.2), scalar(4095, 0, 0, 0.8)}};
    const SegmentMap m = backtrack(s);
    REQUIRE(m.at(0, 0).size() == 2);
    CHECK(m.at(0, 0)[0].start == 0);
    CHECK(m.at(0, 0)[0].end == 101);
    CHECK(m.at(0, 0)[1].start == 101);
    CHECK(m.at(0, 0)[1].end == 4096);
    CHECK(m.at(0, 0)[0].value == requantize(0.2, 10));
    CHECK(backtrack(s, BacktrackOptions{false}).at(0, 0)[0].value == 0.2);
}

TEST_CASE("chunk segments start and end on chunk boundaries and scatter to the patch") {
    CameraConfig c = default_config(Method::chunk, 4, 4, 256);
    std::vector<double> a(16), b(16, 0.5);
    for (int i = 0; i < 16; ++i) a[i] = i / 16.0;
    EventStream s{c, {{2, 0, 0, PatchPayload{a}}, {7, 0, 0, PatchPayload{b}}}};
    const SegmentMap m = backtrack(s, BacktrackOptions{false});
    for (std::uint32_t y = 0; y < 4; ++y)
        for (std::uint32_t x = 0; x < 4; ++x) {
            const auto& segs = m.at(x, y);
            REQUIRE(segs.size() == 2);
            CHECK(segs[0].end == 96);
            CHECK(segs[1].start == 96);
            CHECK(segs[0].value == a[y * 4 + x]);
        }
}

TEST_CASE("coded windows keep their bucket means and static stretches their long value") {
    CameraConfig c = default_config(Method::coded, 1, 1, 8192);
    c.buckets = 2;
    c.subframes = 8;
    EventStream s{c, {{3, 0, 0, CodedPayload{{1.0, 0.0}, 0.25}}, scalar(7, 0, 0, 0.5)}};
    const SegmentMap m = backtrack(s, BacktrackOptions{false});
    const auto& segs = m.at(0, 0);
    REQUIRE(segs.size() == 3);
    CHECK(segs[0] == Segment{0, 3072, 0.25, {}});
    CHECK(segs[1] == Segment{3072, 4096, 0.5, {1.0, 0.0}});
    CHECK(segs[2] == Segment{4096, 8192, 0.5, {}});

    EventStream missing_long{c, {{3, 0, 0, CodedPayload{{1.0, 0.0}, std::nullopt}}, scalar(7, 0, 0, 0.5)}};
    CHECK(error_code([&] { backtrack(missing_long); }) == Errc::malformed_stream);
    EventStream extra_long{c, {{0, 0, 0, CodedPayload{{1.0, 0.0}, 0.5}}, scalar(7, 0, 0, 0.5)}};
    CHECK(error_code([&] { backtrack(extra_long); }) == Errc::malformed_stream);
}

TEST_CASE("pseudo-inverse of two complementary codes") {
    CameraConfig c = default_config(Method::coded, 1, 1, 2048);
    c.buckets = 2;
    c.subframes = 8;
    const CodedMasks masks = pixel_masks(c, 0, 0);
    EventStream s{c, {{1, 0, 0, CodedPayload{{0.75, 0.125}, 0.3}}}};
    const SegmentMap y = pseudo_inverse(backtrack(s, BacktrackOptions{false}), c);
    const auto& segs = y.at(0, 0);
    REQUIRE(segs.size() == 9);
    CHECK(segs[0] == Segment{0, 1024, 0.3, {}});
    for (std::uint32_t n = 0; n < 8; ++n) {
        CHECK(segs[1 + n].start == 1024 + n * 128);
        CHECK(segs[1 + n].end == 1024 + (n + 1) * 128);
        CHECK(segs[1 + n].value == (masks.on(0, n) ? 0.75 : 0.125));
    }
    CHECK_NOTHROW(y.validate_tiling());
}

TEST_CASE("pseudo-inverse is linear in the bucket values") {
    CameraConfig c = default_config(Method::coded, 2, 1, 1024);
    const auto window = [&](std::vector<double> a, std::vector<double> b) {
        SegmentMap m(2, 1, 1024);
        m.at(0, 0).push_back(Segment{0, 1024, 0.0, std::move(a)});
        m.at(1, 0).push_back(Segment{0, 1024, 0.0, std::move(b)});
        return pseudo_inverse(m, c);
    };
    const std::vector<double> u{0.1, 0.4, 0.3, 0.9}, v{0.6, 0.2, 0.05, 0.5};
    std::vector<double> mix(4);
    for (int j = 0; j < 4; ++j) mix[j] = 0.3 * u[j] + 0.5 * v[j];
    const SegmentMap yu = window(u, v), yv = window(v, u), ymix = window(mix, mix);
    for (std::size_t n = 0; n < 16; ++n) {
        CHECK(ymix.at(0, 0)[n].value == doctest::Approx(0.3 * yu.at(0, 0)[n].value + 0.5 * yv.at(0, 0)[n].value).epsilon(1e-12));
        CHECK(ymix.at(1, 0)[n].value == doctest::Approx(0.3 * yv.at(1, 0)[n].value + 0.5 * yu.at(1, 0)[n].value).epsilon(1e-12));
    }
}

TEST_CASE("uniform sampling") {
    EventStream s{default_config(Method::ema, 2, 1, 4096), {scalar(4095, 0, 0, 0.5), scalar(4095, 1, 0, 0.25)}};
    const SegmentMap m = backtrack(s);
    CHECK(sample_uniform(m, 4096).samples() == 1);
    const BacktrackedCube b = sample_uniform(m, 32);
    CHECK(b.samples() == 128);
    for (std::size_t k = 0; k < b.samples(); ++k) {
        CHECK(b.at(k, 0, 0) == requantize(0.5, 10));
        CHECK(b.segment_end[k * 2] == 4096);
    }
    CHECK(sample_uniform(m, 1000).sample_times == std::vector<std::uint32_t>{0, 1000, 2000, 3000, 4000});
    CHECK(error_code([&] { sample_uniform(m, 0); }) == Errc::invalid_argument);
}

TEST_CASE("every sample takes the payload of the earliest packet at or after it") {
    const PhotonCube cube = testing::moving_block_cube(16, 16, 2048, 6);
    const EventStream s = encode(cube, default_config(Method::ema, 16, 16, 2048));
    const BacktrackedCube b = decode(s, 1, BacktrackOptions{false});
    std::vector<std::vector<EventPacket>> per(256);
    for (const auto& p : s.packets) per[p.y * 16 + p.x].push_back(p);
    for (std::size_t i = 0; i < 256; ++i) {
        std::size_t k = 0;
        for (std::uint32_t t = 0; t < 2048; ++t) {
            while (per[i][k].t < t) ++k;
            REQUIRE(b.values[t * 256 + i] == std::get<ScalarPayload>(per[i][k].payload).value);
        }
    }
}

TEST_CASE("gaps and overlaps are rejected") {
    SegmentMap gap(1, 1, 10);
    gap.at(0, 0) = {Segment{0, 4, 0.0, {}}, Segment{5, 10, 0.0, {}}};
    CHECK(error_code([&] { gap.validate_tiling(); }) == Errc::malformed_stream);
    SegmentMap overlap(1, 1, 10);
    overlap.at(0, 0) = {Segment{0, 6, 0.0, {}}, Segment{5, 10, 0.0, {}}};
    CHECK(error_code([&] { overlap.validate_tiling(); }) == Errc::malformed_stream);
    SegmentMap short_map(1, 1, 10);
    short_map.at(0, 0) = {Segment{0, 9, 0.0, {}}};
    CHECK(error_code([&] { short_map.validate_tiling(); }) == Errc::malformed_stream);
}

TEST_CASE("hot pixel inpainting") {
    BacktrackedCube c;
    c.width = 3;
    c.height = 3;
    c.sample_times = {0};
    c.values = {1, 2, 3, 4, 5, 6, 7, 8, 9};
    HotPixelMask none(3, 3);
    CHECK(inpaint_hot(c, none).values == c.values);

    HotPixelMask center(3, 3);
    center.hot[4] = 1;
    CHECK(inpaint_hot(c, center).values[4] == 2);  // up wins ties

    HotPixelMask top(3, 3);
    top.hot[1] = 1;
    CHECK(inpaint_hot(c, top).values[1] == 1);  // no up neighbour: left

    HotPixelMask corner(3, 3);
    corner.hot = {1, 1, 0, 1, 0, 0, 0, 0, 0};
    const auto r = inpaint_hot(c, corner);
    CHECK(r.values[1] == 3);  // right
    CHECK(r.values[3] == 5);  // right (up and left are hot)
    CHECK(r.values[0] == 3);  // nearest non-hot via the BFS order

    BacktrackedCube flat = c;
    std::fill(flat.values.begin(), flat.values.end(), 0.7);
    CHECK(inpaint_hot(flat, center).values[4] == 0.7);

    HotPixelMask all(3, 3);
    std::fill(all.hot.begin(), all.hot.end(), 1);
    CHECK(error_code([&] { inpaint_hot(c, all); }) == Errc::invalid_argument);
}
}
