#include "gevent/event_model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "gevent/error.hpp"

namespace gevent {

std::string_view method_name(Method m) {
    switch (m) {
    case Method::dvs: return "dvs";
    case Method::ema: return "ema";
    case Method::bayes: return "bayes";
    case Method::chunk: return "chunk";
    case Method::coded: return "coded";
    }
    return "?";
}

Method parse_method(std::string_view name) {
    for (Method m : {Method::dvs, Method::ema, Method::bayes, Method::chunk, Method::coded})
        if (method_name(m) == name) return m;
    fail(Errc::unknown_method, "unknown method '" + std::string(name) + "'");
}

void CameraConfig::validate() const {
    require(width >= 1 && height >= 1 && frames >= 1, "config: W, H, T must be >= 1");
    require(quant_bits >= 1 && quant_bits <= 16, "config: quant_bits must be in [1,16]");
    switch (method) {
    case Method::dvs:
        require(tau > 0.0, "config: tau must be > 0");
        require(gamma_ema > 0.0 && gamma_ema < 1.0, "config: gamma_ema must be in (0,1)");
        break;
    case Method::ema:
        require(tau > 0.0, "config: tau must be > 0");
        require(gamma_ema > 0.0 && gamma_ema < 1.0, "config: gamma_ema must be in (0,1)");
        require(warmup >= 1 && warmup < frames, "config: warmup must be in [1, T)");
        break;
    case Method::bayes:
        require(gamma_bayes > 0.0 && gamma_bayes < 1.0, "config: gamma_bayes must be in (0,1)");
        require(forecasters >= 2, "config: need at least 2 forecasters");
        break;
    case Method::chunk:
        require(tau > 0.0, "config: tau must be > 0");
        require(chunk_size >= 1, "config: chunk size must be >= 1");
        require(patch >= 1, "config: patch size must be >= 1");
        require(frames % chunk_size == 0, "config: T must be a multiple of the chunk size");
        require(width % patch == 0 && height % patch == 0, "config: W and H must be multiples of the patch size");
        break;
    case Method::coded:
        require(z > 0.0, "config: z must be > 0");
        require(buckets >= 2 && buckets <= 255, "config: J must be in [2,255]");
        require(subframes >= buckets && subframes % buckets == 0, "config: N must be a positive multiple of J");
        require(t_code >= subframes && t_code % subframes == 0, "config: T_code must be a multiple of N");
        require(frames % t_code == 0, "config: T must be a multiple of T_code");
        break;
    }
    require(std::isfinite(tau) && std::isfinite(gamma_ema) && std::isfinite(gamma_bayes) && std::isfinite(z),
            "config: parameters must be finite");
    require(units_x() <= 65536 && units_y() <= 65536, "config: at most 65536 units per axis");
}

CameraConfig default_config(Method method, std::uint32_t width, std::uint32_t height, std::uint32_t frames) {
    CameraConfig c;
    c.method = method;
    c.width = width;
    c.height = height;
    c.frames = frames;
    if (method == Method::chunk) c.tau = kDefaultChunkTau;
    return c;
}

double sensitivity(const CameraConfig& c) {
    switch (c.method) {
    case Method::bayes: return c.gamma_bayes;
    case Method::coded: return c.z;
    default: return c.tau;
    }
}

void set_sensitivity(CameraConfig& c, double value) {
    switch (c.method) {
    case Method::bayes: c.gamma_bayes = value; break;
    case Method::coded: c.z = value; break;
    default: c.tau = value; break;
    }
}

bool sensitivity_increases_with_value(Method m) { return m == Method::bayes; }

std::size_t payload_values(const EventPayload& p) {
    if (std::holds_alternative<ScalarPayload>(p)) return 1;
    if (const auto* patch = std::get_if<PatchPayload>(&p)) return patch->values.size();
    const auto& coded = std::get<CodedPayload>(p);
    return coded.buckets.size() + (coded.long_value ? 1 : 0);
}

namespace {

void check_value(double v) {
    if (!(v >= 0.0 && v <= 1.0)) fail(Errc::malformed_stream, "payload value outside [0,1]");
}

}  // namespace

void validate_stream(const EventStream& stream) {
    const CameraConfig& c = stream.config;
    try {
        c.validate();
    } catch (const Error& e) {
        fail(Errc::malformed_stream, std::string("stream config: ") + e.what());
    }
    const std::uint32_t ux = c.units_x(), uy = c.units_y(), tu = c.time_units();
    const std::uint32_t last_t = tu - 1;
    std::vector<std::int64_t> last(std::size_t{ux} * uy, -1);

    const EventPacket* prev = nullptr;
    for (const EventPacket& p : stream.packets) {
        if (p.x >= ux || p.y >= uy || p.t >= tu) fail(Errc::malformed_stream, "packet outside the unit grid");
        if (prev && !packet_before(*prev, p)) fail(Errc::malformed_stream, "packets not in strict (t,y,x) order");
        prev = &p;

        if (const auto* s = std::get_if<ScalarPayload>(&p.payload)) {
            if (c.method == Method::chunk) fail(Errc::malformed_stream, "chunk streams carry patch payloads");
            if (c.method == Method::coded && p.t != last_t)
                fail(Errc::malformed_stream, "coded scalar payload is only valid as the terminal flush");
            check_value(s->value);
        } else if (const auto* patch = std::get_if<PatchPayload>(&p.payload)) {
            if (c.method != Method::chunk) fail(Errc::malformed_stream, "patch payload in a non-chunk stream");
            if (patch->values.size() != c.unit_pixels()) fail(Errc::malformed_stream, "patch payload size mismatch");
            for (double v : patch->values) check_value(v);
        } else {
            const auto& coded = std::get<CodedPayload>(p.payload);
            if (c.method != Method::coded) fail(Errc::malformed_stream, "coded payload in a non-coded stream");
            if (coded.buckets.size() != c.buckets) fail(Errc::malformed_stream, "coded payload bucket count mismatch");
            for (double v : coded.buckets) check_value(v);
            if (coded.long_value) check_value(*coded.long_value);
        }
        last[std::size_t{p.y} * ux + p.x] = p.t;
    }
    for (std::int64_t t : last)
        if (t != static_cast<std::int64_t>(last_t)) fail(Errc::malformed_stream, "unit without a terminal packet");
}

std::uint32_t quantize(double value, unsigned bits) {
    if (std::isnan(value)) fail(Errc::numeric, "quantize: NaN value");
    require(bits >= 1 && bits <= 16, "quantize: bits must be in [1,16]");
    const double levels = static_cast<double>((1u << bits) - 1);
    const double v = std::clamp(value, 0.0, 1.0);
    return static_cast<std::uint32_t>(std::min(levels, std::floor(v * levels + 0.5)));
}

double dequantize(std::uint32_t level, unsigned bits) {
    require(bits >= 1 && bits <= 16, "dequantize: bits must be in [1,16]");
    const std::uint32_t levels = (1u << bits) - 1;
    require(level <= levels, "dequantize: level out of range");
    return static_cast<double>(level) / static_cast<double>(levels);
}

unsigned ceil_log2(std::uint64_t n) {
    require(n >= 1, "ceil_log2: n must be >= 1");
    return n == 1 ? 0u : static_cast<unsigned>(std::bit_width(n - 1));
}

unsigned header_bits(const CameraConfig& c) {
    return ceil_log2(c.units_x()) + ceil_log2(c.units_y()) + ceil_log2(c.time_units());
}

std::uint64_t packet_bits(const EventPacket& packet, const CameraConfig& c) {
    std::uint64_t bits = header_bits(c) + payload_values(packet.payload) * std::uint64_t{c.quant_bits};
    if (std::holds_alternative<CodedPayload>(packet.payload)) bits += 1;
    return bits;
}

ReadoutReport readout_report(const EventStream& stream, double duration_s) {
    require(duration_s > 0.0, "readout: duration must be > 0");
    const CameraConfig& c = stream.config;
    ReadoutReport r;
    r.packets = stream.packets.size();
    const unsigned header = header_bits(c);
    for (const EventPacket& p : stream.packets) {
        r.total_bits += header + payload_values(p.payload) * std::uint64_t{c.quant_bits};
        if (std::holds_alternative<CodedPayload>(p.payload)) r.total_bits += 1;
    }
    const double pixels = static_cast<double>(c.width) * c.height;
    r.bits_per_pixel_per_second = static_cast<double>(r.total_bits) / (pixels * duration_s);
    if (r.total_bits > 0)
        r.compression_vs_raw = pixels * static_cast<double>(c.frames) / static_cast<double>(r.total_bits);
    return r;
}

namespace {

void sort_packets(std::vector<EventPacket>& packets) {
    std::sort(packets.begin(), packets.end(), packet_before);
    for (std::size_t i = 1; i < packets.size(); ++i)
        if (!packet_before(packets[i - 1], packets[i]))
            fail(Errc::malformed_stream, "merge: duplicate (t,y,x) packet");
}

}  // namespace

EventStream merge_streams(std::span<const EventStream> parts) {
    require(!parts.empty(), "merge: no streams");
    EventStream out;
    out.config = parts.front().config;
    std::size_t total = 0;
    for (const EventStream& s : parts) {
        require(s.config == out.config, "merge: config mismatch");
        total += s.packets.size();
    }
    out.packets.reserve(total);
    for (const EventStream& s : parts) out.packets.insert(out.packets.end(), s.packets.begin(), s.packets.end());
    sort_packets(out.packets);
    return out;
}

EventStream merge_streams(const CameraConfig& config, std::vector<std::vector<EventPacket>>&& parts) {
    EventStream out;
    out.config = config;
    std::size_t total = 0;
    for (const auto& p : parts) total += p.size();
    out.packets.reserve(total);
    for (auto& p : parts) {
        std::move(p.begin(), p.end(), std::back_inserter(out.packets));
        std::vector<EventPacket>().swap(p);
    }
    sort_packets(out.packets);
    return out;
}

}  // namespace gevent
