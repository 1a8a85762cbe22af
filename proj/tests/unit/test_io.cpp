#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gevent/io.hpp"
#include "helpers.hpp"

using namespace gevent;
using testing::error_code;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("gevent_test_" + name)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string cube_bytes(const PhotonCube& c) {
    std::ostringstream out;
    io::write_photon_cube(out, c);
    return out.str();
}

std::string stream_bytes(const EventStream& s) {
    std::ostringstream out;
    io::write_event_stream(out, s);
    return out.str();
}

template <class Read>
Errc read_error(const std::string& bytes, Read read) {
    return error_code([&] {
        std::istringstream in(bytes);
        read(in);
    });
}

const auto read_cube = [](std::istream& in) { return io::read_photon_cube(in); };
const auto read_stream = [](std::istream& in) { return io::read_event_stream(in); };

EventStream requantized(EventStream s) {
    const unsigned qb = s.config.quant_bits;
    for (auto& p : s.packets)
        std::visit(
            [&](auto& pl) {
                using T = std::decay_t<decltype(pl)>;
                if constexpr (std::is_same_v<T, ScalarPayload>) pl.value = requantize(pl.value, qb);
                if constexpr (std::is_same_v<T, PatchPayload>)
                    for (double& v : pl.values) v = requantize(v, qb);
                if constexpr (std::is_same_v<T, CodedPayload>) {
                    for (double& v : pl.buckets) v = requantize(v, qb);
                    if (pl.long_value) pl.long_value = requantize(*pl.long_value, qb);
                }
            },
            p.payload);
    return s;
}

}  // namespace

TEST_SUITE("io") {
TEST_CASE("photon cube round trip") {
    const PhotonCube c = testing::moving_block_cube(13, 5, 96, 2, 0.3, 0.8, 8, 0.25, 4);
    const std::string bytes = cube_bytes(c);
    CHECK(bytes.size() == 4 + 12 + 24 + 96 * 9);
    std::istringstream in(bytes);
    CHECK(io::read_photon_cube(in) == c);
}

TEST_CASE("photon cube payload layout") {
    const char* pattern = "10110010";
    const PhotonCube c = testing::cube_from(8, 1, 1, [&](auto x, auto, auto) { return pattern[x] == '1'; });
    const std::string bytes = cube_bytes(c);
    CHECK(bytes.substr(0, 4) == "PHC1");
    CHECK(static_cast<unsigned char>(bytes.back()) == 0xB2);
}

TEST_CASE("corrupt photon cubes are rejected") {
    const PhotonCube c = testing::cube_from(3, 3, 4, [](auto x, auto y, auto t) { return (x + y + t) % 2; });
    const std::string good = cube_bytes(c);
    CHECK(read_error(good.substr(0, good.size() - 1), read_cube) == Errc::truncated);
    CHECK(read_error(good + "x", read_cube) == Errc::corrupt);
    CHECK(read_error("PHX1" + good.substr(4), read_cube) == Errc::bad_magic);
    std::string pad = good;
    pad.back() = static_cast<char>(pad.back() | 0x01);
    CHECK(read_error(pad, read_cube) == Errc::corrupt);
    CHECK(read_error("", read_cube) == Errc::truncated);
}

TEST_CASE("event streams round trip for every method") {
    const PhotonCube c = testing::moving_block_cube(16, 16, 4096, 3);
    for (Method m : {Method::dvs, Method::ema, Method::bayes, Method::chunk, Method::coded}) {
        CAPTURE(method_name(m));
        CameraConfig cfg = default_config(m, 16, 16, 4096);
        cfg.quant_bits = m == Method::chunk ? 8 : 10;
        const EventStream s = encode(c, cfg);
        std::istringstream in(stream_bytes(s));
        const EventStream back = io::read_event_stream(in);
        CHECK(back == requantized(s));
        CHECK(backtrack(back) == backtrack(s));
        CHECK(stream_bytes(back) == stream_bytes(s));
    }
}

TEST_CASE("corrupt event streams are rejected") {
    const PhotonCube c = testing::moving_block_cube(8, 8, 1024, 3);
    const EventStream s = encode(c, default_config(Method::ema, 8, 8, 1024));
    const std::string good = stream_bytes(s);

    std::string version = good;
    version[4] = 2;
    CHECK(read_error(version, read_stream) == Errc::bad_version);
    std::string method = good;
    method[6] = 9;
    CHECK(read_error(method, read_stream) == Errc::unknown_method);
    CHECK(read_error("GEVX" + good.substr(4), read_stream) == Errc::bad_magic);
    CHECK(read_error(good.substr(0, good.size() - 3), read_stream) == Errc::truncated);
    CHECK(read_error(good + '\0', read_stream) == Errc::corrupt);

    // Last packet: flags byte then a 16-bit level.
    std::string level = good;
    level[level.size() - 1] = static_cast<char>(0x7F);
    CHECK(read_error(level, read_stream) == Errc::corrupt);
    std::string flags = good;
    flags[flags.size() - 3] = 3;
    CHECK(read_error(flags, read_stream) == Errc::corrupt);

    EventStream unsorted = s;
    std::swap(unsorted.packets.front(), unsorted.packets.back());
    CHECK(error_code([&] { stream_bytes(unsorted); }) == Errc::malformed_stream);
    // Swap the first and last 11-byte scalar packet records on disk.
    std::string swapped = good;
    const std::size_t first = good.size() - 11 * s.packets.size(), last = good.size() - 11;
    std::swap_ranges(swapped.begin() + first, swapped.begin() + first + 11, swapped.begin() + last);
    CHECK(read_error(swapped, read_stream) == Errc::malformed_stream);
}

TEST_CASE("file round trips") {
    TempDir dir("files");
    const PhotonCube c = testing::moving_block_cube(8, 8, 64, 1);
    io::write_photon_cube(dir.path / "a.phc", c);
    CHECK(io::read_photon_cube(dir.path / "a.phc") == c);
    const EventStream s = encode(c, default_config(Method::bayes, 8, 8, 64));
    io::write_event_stream(dir.path / "a.gev", s);
    CHECK(io::read_event_stream(dir.path / "a.gev") == requantized(s));
    CHECK(error_code([&] { io::read_photon_cube(dir.path / "missing.phc"); }) == Errc::io);
}

TEST_CASE("sRGB transfer") {
    CHECK(io::srgb_to_linear(128.0 / 255.0) == doctest::Approx(0.215860500114).epsilon(1e-11));
    CHECK(io::srgb_to_linear(0.0) == 0.0);
    CHECK(io::srgb_to_linear(1.0) == doctest::Approx(1.0));
    CHECK(io::parse_gamma("srgb") == io::Gamma::srgb);
    CHECK(error_code([] { io::parse_gamma("log"); }) == Errc::invalid_argument);
}

TEST_CASE("pgm frames") {
    TempDir dir("pgm");
    io::GrayImage a{3, 2, 255, {0, 128, 255, 10, 20, 30}};
    io::write_pgm(dir.path / "f1.pgm", a);
    const io::GrayImage back = io::read_pgm(dir.path / "f1.pgm");
    CHECK(back.pixels == a.pixels);
    CHECK(back.maxval == 255);

    std::istringstream commented(std::string("P5\n# note\n2 1\n# more\n65535\n") + std::string("\x01\x00\xff\xff", 4));
    const io::GrayImage wide = io::read_pgm(commented);
    CHECK(wide.pixels == std::vector<std::uint16_t>{256, 65535});
    std::istringstream ascii("P2\n1 1\n255\n0\n");
    CHECK(error_code([&] { io::read_pgm(ascii); }) == Errc::bad_magic);

    io::GrayImage b{3, 2, 255, {255, 255, 255, 255, 255, 255}};
    io::write_pgm(dir.path / "f0.pgm", b);
    const FluxVideo v = io::read_flux_video(dir.path, io::Gamma::linear);
    CHECK(v.frame_count() == 2);
    CHECK(v.at(0, 0, 0) == 1.0);  // f0 sorts first
    CHECK(v.at(1, 1, 0) == doctest::Approx(128.0 / 255.0));
    const FluxVideo g = io::read_flux_video(dir.path, io::Gamma::srgb);
    CHECK(g.at(1, 1, 0) == doctest::Approx(0.215860500114));

    io::write_pgm(dir.path / "f2.pgm", io::GrayImage{2, 2, 255, {0, 0, 0, 0}});
    CHECK(error_code([&] { io::read_flux_video(dir.path, io::Gamma::linear); }) == Errc::dimension_mismatch);
}

TEST_CASE("flux video directories round trip at 16 bits") {
    TempDir dir("video");
    FluxVideo v(4, 3, 5);
    for (std::size_t i = 0; i < v.data.size(); ++i) v.data[i] = (i % 7) / 6.0;
    io::write_flux_video(dir.path, v);
    const FluxVideo back = io::read_flux_video(dir.path, io::Gamma::linear);
    REQUIRE(back.data.size() == v.data.size());
    for (std::size_t i = 0; i < v.data.size(); ++i) CHECK(back.data[i] == doctest::Approx(v.data[i]).epsilon(1e-5));
}

TEST_CASE("hot masks and bit series") {
    TempDir dir("mask");
    HotPixelMask m(5, 2);
    m.hot[3] = m.hot[7] = 1;
    io::write_hot_mask(dir.path / "hot.pgm", m);
    const HotPixelMask back = io::read_hot_mask(dir.path / "hot.pgm");
    CHECK(back.hot == m.hot);

    std::istringstream bits("01 1\n0\t1\n");
    CHECK(io::read_bit_series(bits) == std::vector<std::uint8_t>{0, 1, 1, 0, 1});
    std::istringstream bad("0102");
    CHECK(error_code([&] { io::read_bit_series(bad); }) == Errc::corrupt);
    std::istringstream empty("  \n");
    CHECK(error_code([&] { io::read_bit_series(empty); }) == Errc::corrupt);
}
}
