#include "gevent/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "gevent/error.hpp"

namespace gevent::io {

namespace fs = std::filesystem;

namespace {

class Writer {
public:
    explicit Writer(std::ostream& out) : out_(out) {}
    void raw(const void* p, std::size_t n) { out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n)); }
    template <class U>
    void le(U v) {
        unsigned char b[sizeof(U)];
        for (std::size_t i = 0; i < sizeof(U); ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
        raw(b, sizeof(U));
    }
    void f64(double v) { le(std::bit_cast<std::uint64_t>(v)); }
    void finish() {
        out_.flush();
        if (!out_) fail(Errc::io, "write failed");
    }

private:
    std::ostream& out_;
};

class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}
    void raw(void* p, std::size_t n) {
        in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in_.gcount()) != n) fail(Errc::truncated, "unexpected end of file");
    }
    template <class U>
    U le() {
        unsigned char b[sizeof(U)];
        raw(b, sizeof(U));
        U v = 0;
        for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(static_cast<U>(b[i]) << (8 * i));
        return v;
    }
    double f64() { return std::bit_cast<double>(le<std::uint64_t>()); }
    void expect_end() {
        if (in_.peek() != std::char_traits<char>::eof()) fail(Errc::corrupt, "trailing bytes after payload");
    }

private:
    std::istream& in_;
};

void magic(Reader& r, const char* tag) {
    char m[4];
    r.raw(m, 4);
    if (std::memcmp(m, tag, 4) != 0) fail(Errc::bad_magic, std::string("bad magic, expected ") + tag);
}

std::ofstream open_out(const fs::path& path, bool binary = true) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) fail(Errc::io, "cannot write '" + path.string() + "'");
    return out;
}

std::ifstream open_in(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::io, "cannot open '" + path.string() + "'");
    return in;
}

}  // namespace

void write_photon_cube(std::ostream& out, const PhotonCube& cube) {
    Writer w(out);
    w.raw("PHC1", 4);
    w.le<std::uint32_t>(cube.width());
    w.le<std::uint32_t>(cube.height());
    w.le<std::uint32_t>(cube.frames());
    w.f64(cube.calibration().alpha);
    w.f64(cube.calibration().dark);
    w.f64(cube.binary_frame_rate());
    w.raw(cube.bytes().data(), cube.bytes().size());
    w.finish();
}

PhotonCube read_photon_cube(std::istream& in) {
    Reader r(in);
    magic(r, "PHC1");
    const auto W = r.le<std::uint32_t>(), H = r.le<std::uint32_t>(), T = r.le<std::uint32_t>();
    SpadCalibration cal;
    cal.alpha = r.f64();
    cal.dark = r.f64();
    const double rate = r.f64();
    if (W == 0 || H == 0 || T == 0) fail(Errc::dimension_mismatch, "photon cube: zero dimension");
    if (std::uint64_t{W} * H > (std::uint64_t{1} << 34) || std::uint64_t{W} * H * T > (std::uint64_t{1} << 40))
        fail(Errc::dimension_mismatch, "photon cube: implausible dimensions");
    if (!(cal.alpha > 0.0) || !(cal.dark >= 0.0) || !(rate > 0.0) || !std::isfinite(cal.alpha) ||
        !std::isfinite(rate))
        fail(Errc::corrupt, "photon cube: invalid calibration or frame rate");

    PhotonCube cube(W, H, T, cal, rate);
    auto bytes = cube.bytes();
    r.raw(bytes.data(), bytes.size());
    r.expect_end();
    const std::size_t npix = cube.pixels();
    if (npix % 8 != 0) {
        const auto pad = static_cast<std::uint8_t>(0xFFu >> (npix % 8));
        for (std::uint32_t t = 0; t < T; ++t)
            if (cube.frame_data(t).back() & pad) fail(Errc::corrupt, "photon cube: nonzero pad bits");
    }
    return cube;
}

void write_photon_cube(const fs::path& path, const PhotonCube& cube) {
    auto out = open_out(path);
    write_photon_cube(out, cube);
}

PhotonCube read_photon_cube(const fs::path& path) {
    auto in = open_in(path);
    return read_photon_cube(in);
}

void write_event_stream(std::ostream& out, const EventStream& stream) {
    validate_stream(stream);
    const CameraConfig& c = stream.config;
    const unsigned qb = c.quant_bits;
    Writer w(out);
    w.raw("GEV1", 4);
    w.le<std::uint16_t>(kStreamVersion);
    w.le<std::uint8_t>(static_cast<std::uint8_t>(c.method));
    w.le<std::uint32_t>(c.width);
    w.le<std::uint32_t>(c.height);
    w.le<std::uint32_t>(c.frames);
    w.le<std::uint8_t>(c.quant_bits);
    switch (c.method) {
    case Method::dvs: w.f64(c.tau); w.f64(c.gamma_ema); break;
    case Method::ema: w.f64(c.tau); w.f64(c.gamma_ema); w.le<std::uint32_t>(c.warmup); break;
    case Method::bayes: w.f64(c.gamma_bayes); w.le<std::uint16_t>(c.forecasters); break;
    case Method::chunk: w.f64(c.tau); w.le<std::uint16_t>(c.chunk_size); w.le<std::uint16_t>(c.patch); break;
    case Method::coded:
        w.f64(c.z);
        w.le<std::uint16_t>(c.t_code);
        w.le<std::uint16_t>(c.buckets);
        w.le<std::uint16_t>(c.subframes);
        w.le<std::uint64_t>(c.mask_seed);
        break;
    }
    w.le<std::uint64_t>(stream.packets.size());
    for (const EventPacket& p : stream.packets) {
        w.le<std::uint32_t>(p.t);
        w.le<std::uint16_t>(p.x);
        w.le<std::uint16_t>(p.y);
        const auto put = [&](double v) { w.le<std::uint16_t>(static_cast<std::uint16_t>(quantize(v, qb))); };
        if (const auto* s = std::get_if<ScalarPayload>(&p.payload)) {
            w.le<std::uint8_t>(0);
            put(s->value);
        } else if (const auto* patch = std::get_if<PatchPayload>(&p.payload)) {
            w.le<std::uint8_t>(1);
            for (double v : patch->values) put(v);
        } else {
            const auto& coded = std::get<CodedPayload>(p.payload);
            w.le<std::uint8_t>(coded.long_value ? 2 | 4 : 2);
            for (double v : coded.buckets) put(v);
            if (coded.long_value) put(*coded.long_value);
        }
    }
    w.finish();
}

EventStream read_event_stream(std::istream& in) {
    Reader r(in);
    magic(r, "GEV1");
    const auto version = r.le<std::uint16_t>();
    if (version != kStreamVersion) fail(Errc::bad_version, "unsupported stream version " + std::to_string(version));
    const auto method = r.le<std::uint8_t>();
    if (method > static_cast<std::uint8_t>(Method::coded))
        fail(Errc::unknown_method, "unknown method id " + std::to_string(method));
    EventStream s;
    CameraConfig& c = s.config;
    const auto W = r.le<std::uint32_t>(), H = r.le<std::uint32_t>(), T = r.le<std::uint32_t>();
    c = default_config(static_cast<Method>(method), W, H, T);
    c.quant_bits = r.le<std::uint8_t>();
    switch (c.method) {
    case Method::dvs: c.tau = r.f64(); c.gamma_ema = r.f64(); break;
    case Method::ema: c.tau = r.f64(); c.gamma_ema = r.f64(); c.warmup = r.le<std::uint32_t>(); break;
    case Method::bayes: c.gamma_bayes = r.f64(); c.forecasters = r.le<std::uint16_t>(); break;
    case Method::chunk: c.tau = r.f64(); c.chunk_size = r.le<std::uint16_t>(); c.patch = r.le<std::uint16_t>(); break;
    case Method::coded:
        c.z = r.f64();
        c.t_code = r.le<std::uint16_t>();
        c.buckets = r.le<std::uint16_t>();
        c.subframes = r.le<std::uint16_t>();
        c.mask_seed = r.le<std::uint64_t>();
        break;
    }
    if (c.width == 0 || c.height == 0 || c.frames == 0) fail(Errc::dimension_mismatch, "stream: zero dimension");
    try {
        c.validate();
    } catch (const Error& e) {
        fail(Errc::corrupt, std::string("stream header: ") + e.what());
    }
    const unsigned qb = c.quant_bits;
    const std::uint32_t levels = (1u << qb) - 1;

    const auto count = r.le<std::uint64_t>();
    if (count > (std::uint64_t{1} << 40)) fail(Errc::corrupt, "stream: implausible packet count");
    s.packets.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(count, 1u << 20)));
    for (std::uint64_t i = 0; i < count; ++i) {
        EventPacket p;
        p.t = r.le<std::uint32_t>();
        p.x = r.le<std::uint16_t>();
        p.y = r.le<std::uint16_t>();
        const auto flags = r.le<std::uint8_t>();
        const auto get = [&] {
            const auto q = r.le<std::uint16_t>();
            if (q > levels) fail(Errc::corrupt, "stream: value level exceeds quant_bits");
            return dequantize(q, qb);
        };
        const unsigned kind = flags & 3u;
        if ((flags & ~7u) != 0 || kind == 3 || (kind != 2 && (flags & 4u)))
            fail(Errc::corrupt, "stream: invalid packet flags");
        if (kind == 0) {
            p.payload = ScalarPayload{get()};
        } else if (kind == 1) {
            PatchPayload patch;
            for (std::uint32_t k = 0; k < c.unit_pixels(); ++k) patch.values.push_back(get());
            p.payload = std::move(patch);
        } else {
            CodedPayload coded;
            for (unsigned j = 0; j < c.buckets; ++j) coded.buckets.push_back(get());
            if (flags & 4u) coded.long_value = get();
            p.payload = std::move(coded);
        }
        s.packets.push_back(std::move(p));
    }
    r.expect_end();
    validate_stream(s);
    return s;
}

void write_event_stream(const fs::path& path, const EventStream& stream) {
    auto out = open_out(path);
    write_event_stream(out, stream);
}

EventStream read_event_stream(const fs::path& path) {
    auto in = open_in(path);
    return read_event_stream(in);
}

Gamma parse_gamma(const std::string& name) {
    if (name == "linear") return Gamma::linear;
    if (name == "srgb") return Gamma::srgb;
    fail(Errc::invalid_argument, "unknown gamma '" + name + "' (expected linear or srgb)");
}

double srgb_to_linear(double v) {
    return v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
}

namespace {

// Next header token, skipping whitespace and '#' comments.
std::uint32_t pgm_token(std::istream& in) {
    int ch = in.get();
    while (true) {
        if (ch == '#') {
            while (ch != '\n' && ch != EOF) ch = in.get();
        } else if (std::isspace(ch)) {
            ch = in.get();
        } else {
            break;
        }
    }
    if (ch == EOF) fail(Errc::truncated, "pgm: truncated header");
    if (!std::isdigit(ch)) fail(Errc::corrupt, "pgm: malformed header");
    std::uint64_t v = 0;
    while (ch != EOF && std::isdigit(ch)) {
        v = v * 10 + static_cast<unsigned>(ch - '0');
        if (v > 0xFFFFFFFFu) fail(Errc::corrupt, "pgm: header value too large");
        ch = in.get();
    }
    if (ch != EOF && !std::isspace(ch)) fail(Errc::corrupt, "pgm: malformed header");
    return static_cast<std::uint32_t>(v);
}

}  // namespace

GrayImage read_pgm(std::istream& in) {
    char m[2];
    in.read(m, 2);
    if (in.gcount() != 2 || m[0] != 'P' || m[1] != '5') fail(Errc::bad_magic, "pgm: expected binary P5 image");
    GrayImage img;
    img.width = pgm_token(in);
    img.height = pgm_token(in);
    img.maxval = pgm_token(in);
    if (img.width == 0 || img.height == 0) fail(Errc::dimension_mismatch, "pgm: zero dimension");
    if (img.maxval == 0 || img.maxval > 65535) fail(Errc::corrupt, "pgm: maxval must be in [1,65535]");
    const std::size_t n = std::size_t{img.width} * img.height;
    const std::size_t bpp = img.maxval > 255 ? 2 : 1;
    std::vector<unsigned char> raw(n * bpp);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size()) fail(Errc::truncated, "pgm: truncated pixel data");
    img.pixels.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        img.pixels[i] = bpp == 2 ? static_cast<std::uint16_t>(raw[2 * i] << 8 | raw[2 * i + 1]) : raw[i];
        if (img.pixels[i] > img.maxval) fail(Errc::corrupt, "pgm: pixel exceeds maxval");
    }
    return img;
}

GrayImage read_pgm(const fs::path& path) {
    auto in = open_in(path);
    return read_pgm(in);
}

void write_pgm(std::ostream& out, const GrayImage& img) {
    require(img.maxval >= 1 && img.maxval <= 65535, "pgm: maxval must be in [1,65535]");
    require(img.pixels.size() == std::size_t{img.width} * img.height, "pgm: pixel count mismatch");
    out << "P5\n" << img.width << ' ' << img.height << '\n' << img.maxval << '\n';
    std::vector<unsigned char> raw;
    raw.reserve(img.pixels.size() * 2);
    for (std::uint16_t v : img.pixels) {
        if (img.maxval > 255) raw.push_back(static_cast<unsigned char>(v >> 8));
        raw.push_back(static_cast<unsigned char>(v & 0xFF));
    }
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!out) fail(Errc::io, "pgm: write failed");
}

void write_pgm(const fs::path& path, const GrayImage& image) {
    auto out = open_out(path);
    write_pgm(out, image);
}

FluxVideo read_flux_video(const fs::path& dir, Gamma gamma, double frame_rate) {
    if (!fs::is_directory(dir)) fail(Errc::io, "not a directory: '" + dir.string() + "'");
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".pgm") files.push_back(e.path());
    if (files.empty()) fail(Errc::io, "no .pgm frames in '" + dir.string() + "'");
    std::sort(files.begin(), files.end());

    FluxVideo video;
    video.frame_rate = frame_rate;
    std::uint32_t maxval = 0;
    for (const auto& f : files) {
        const GrayImage img = read_pgm(f);
        if (video.data.empty()) {
            video.width = img.width;
            video.height = img.height;
            maxval = img.maxval;
        } else if (img.width != video.width || img.height != video.height || img.maxval != maxval) {
            fail(Errc::dimension_mismatch, "frame '" + f.filename().string() + "' differs in size or bit depth");
        }
        for (std::uint16_t v : img.pixels) {
            const double x = static_cast<double>(v) / maxval;
            video.data.push_back(gamma == Gamma::srgb ? srgb_to_linear(x) : x);
        }
    }
    return video;
}

namespace {

std::string frame_name(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "frame_%05zu.pgm", i);
    return buf;
}

GrayImage to_gray16(std::span<const double> values, std::uint32_t w, std::uint32_t h) {
    GrayImage img{w, h, 65535, {}};
    img.pixels.reserve(values.size());
    for (double v : values)
        img.pixels.push_back(static_cast<std::uint16_t>(std::lround(std::clamp(v, 0.0, 1.0) * 65535.0)));
    return img;
}

}  // namespace

void write_flux_video(const fs::path& dir, const FluxVideo& video) {
    video.validate();
    fs::create_directories(dir);
    for (std::size_t f = 0; f < video.frame_count(); ++f)
        write_pgm(dir / frame_name(f), to_gray16(video.frame(f), video.width, video.height));
}

void write_frames(const BacktrackedCube& cube, const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) fail(Errc::io, "cannot create '" + dir.string() + "'");
    for (std::size_t s = 0; s < cube.samples(); ++s)
        write_pgm(dir / frame_name(s), to_gray16(cube.frame(s), cube.width, cube.height));
}

HotPixelMask read_hot_mask(const fs::path& path) {
    const GrayImage img = read_pgm(path);
    HotPixelMask mask(img.width, img.height);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) mask.hot[i] = img.pixels[i] != 0 ? 1 : 0;
    return mask;
}

void write_hot_mask(const fs::path& path, const HotPixelMask& mask) {
    GrayImage img{mask.width, mask.height, 255, {}};
    for (std::uint8_t h : mask.hot) img.pixels.push_back(h ? 255 : 0);
    write_pgm(path, img);
}

std::vector<std::uint8_t> read_bit_series(std::istream& in) {
    std::vector<std::uint8_t> bits;
    char ch;
    while (in.get(ch)) {
        if (ch == '0' || ch == '1')
            bits.push_back(static_cast<std::uint8_t>(ch - '0'));
        else if (!std::isspace(static_cast<unsigned char>(ch)))
            fail(Errc::corrupt, std::string("bit series: unexpected character '") + ch + "'");
    }
    if (bits.empty()) fail(Errc::corrupt, "bit series: no bits");
    return bits;
}

}  // namespace gevent::io
