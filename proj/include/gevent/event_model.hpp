#pragma once

// Event packets, the stream container and readout accounting shared by all
// detectors.
//
// Timestamps are stored in the method's native unit (binary frame, temporal
// chunk or code window) and name the LAST unit covered by the packet's
// payload. A unit's packets therefore tile [0, T) as
// [prev + 1, ts + 1) in native units, and its terminal packet always sits at
// time_units() - 1.

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace gevent {

enum class Method : std::uint8_t { dvs = 0, ema = 1, bayes = 2, chunk = 3, coded = 4 };

std::string_view method_name(Method m);
Method parse_method(std::string_view name);

struct CameraConfig {
    Method method = Method::ema;
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::uint32_t frames = 0;
    std::uint8_t quant_bits = 10;

    // dvs, ema, chunk: contrast threshold
    double tau = 0.45;
    // dvs, ema
    double gamma_ema = 0.97;
    std::uint32_t warmup = 64;
    // bayes
    double gamma_bayes = 1e-4;
    std::uint16_t forecasters = 3;
    // chunk
    std::uint16_t chunk_size = 32;
    std::uint16_t patch = 4;
    // coded
    double z = 3.0;
    std::uint16_t t_code = 1024;
    std::uint16_t buckets = 4;
    std::uint16_t subframes = 16;
    std::uint64_t mask_seed = 0;

    // Spatial units: pixels, or patches for the chunk method.
    std::uint32_t units_x() const { return method == Method::chunk ? width / patch : width; }
    std::uint32_t units_y() const { return method == Method::chunk ? height / patch : height; }
    std::uint32_t unit_pixels() const { return method == Method::chunk ? std::uint32_t{patch} * patch : 1; }
    // Distinct emission times and their length in binary frames.
    std::uint32_t time_units() const { return frames / unit_frames(); }
    std::uint32_t unit_frames() const {
        switch (method) {
        case Method::chunk: return chunk_size;
        case Method::coded: return t_code;
        default: return 1;
        }
    }

    // Throws invalid_argument on inconsistent dimensions or parameters.
    void validate() const;

    friend bool operator==(const CameraConfig&, const CameraConfig&) = default;
};

// Per-method defaults. The chunk threshold is calibrated for the identity
// feature matrix.
CameraConfig default_config(Method method, std::uint32_t width, std::uint32_t height, std::uint32_t frames);
inline constexpr double kDefaultChunkTau = 7.0;

// The method's sensitivity parameter (tau, gamma_bayes or z).
double sensitivity(const CameraConfig& c);
void set_sensitivity(CameraConfig& c, double value);
// True when raising the parameter makes the detector fire more often.
bool sensitivity_increases_with_value(Method m);

struct ScalarPayload {
    double value = 0.0;
    friend bool operator==(const ScalarPayload&, const ScalarPayload&) = default;
};

struct PatchPayload {
    std::vector<double> values;  // patch*patch, row-major within the patch
    friend bool operator==(const PatchPayload&, const PatchPayload&) = default;
};

struct CodedPayload {
    std::vector<double> buckets;            // J bucket means in [0,1]
    std::optional<double> long_value;       // cumulative static mean, if any
    friend bool operator==(const CodedPayload&, const CodedPayload&) = default;
};

using EventPayload = std::variant<ScalarPayload, PatchPayload, CodedPayload>;

// Number of transmitted scalar values in a payload.
std::size_t payload_values(const EventPayload& p);

struct EventPacket {
    std::uint32_t t = 0;  // native time unit
    std::uint16_t x = 0;  // unit column
    std::uint16_t y = 0;  // unit row
    EventPayload payload;

    friend bool operator==(const EventPacket&, const EventPacket&) = default;
};

// Strict stream order: (t, y, x).
inline bool packet_before(const EventPacket& a, const EventPacket& b) {
    if (a.t != b.t) return a.t < b.t;
    if (a.y != b.y) return a.y < b.y;
    return a.x < b.x;
}

struct EventStream {
    CameraConfig config;
    std::vector<EventPacket> packets;

    friend bool operator==(const EventStream&, const EventStream&) = default;
};

// Checks ranges, payload shapes, strict (t,y,x) order and that every unit
// ends with a packet at time_units()-1. Throws malformed_stream.
void validate_stream(const EventStream& stream);

// Uniform quantizer with round-half-up: round(v * (2^bits - 1)), clamped.
std::uint32_t quantize(double value, unsigned bits);
double dequantize(std::uint32_t level, unsigned bits);
inline double requantize(double value, unsigned bits) { return dequantize(quantize(value, bits), bits); }

// ceil(log2 n) for n >= 1 (0 for n == 1).
unsigned ceil_log2(std::uint64_t n);
unsigned header_bits(const CameraConfig& c);
// header + values * quant_bits (+1 presence flag for coded payloads).
std::uint64_t packet_bits(const EventPacket& packet, const CameraConfig& c);

struct ReadoutReport {
    std::uint64_t total_bits = 0;
    double bits_per_pixel_per_second = 0.0;
    double compression_vs_raw = std::numeric_limits<double>::infinity();
    std::uint64_t packets = 0;
};

ReadoutReport readout_report(const EventStream& stream, double duration_s);

// Concatenates per-unit (or per-thread) streams sharing one config and sorts
// by (t, y, x). Output is independent of input order.
EventStream merge_streams(std::span<const EventStream> parts);
EventStream merge_streams(const CameraConfig& config, std::vector<std::vector<EventPacket>>&& parts);

}  // namespace gevent
