#pragma once

// Event stream -> intensity video: backtracking into piecewise-constant
// segments, the coded-exposure pseudo-inverse, uniform temporal sampling and
// hot-pixel inpainting.

#include <cstdint>
#include <span>
#include <vector>

#include "gevent/event_model.hpp"
#include "gevent/photon_sim.hpp"

namespace gevent {

// Half-open [start, end) in binary frames.
struct Segment {
    std::uint32_t start = 0;
    std::uint32_t end = 0;
    double value = 0.0;
    // Coded-exposure bucket means for a coded window (empty otherwise).
    std::vector<double> buckets;

    friend bool operator==(const Segment&, const Segment&) = default;
};

struct SegmentMap {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::uint32_t frames = 0;
    std::vector<std::vector<Segment>> pixels;  // row-major

    SegmentMap() = default;
    SegmentMap(std::uint32_t w, std::uint32_t h, std::uint32_t t)
        : width(w), height(h), frames(t), pixels(std::size_t{w} * h) {}

    std::vector<Segment>& at(std::uint32_t x, std::uint32_t y) { return pixels[std::size_t{y} * width + x]; }
    const std::vector<Segment>& at(std::uint32_t x, std::uint32_t y) const { return pixels[std::size_t{y} * width + x]; }

    // Throws malformed_stream unless every pixel's segments tile [0, frames).
    void validate_tiling() const;

    friend bool operator==(const SegmentMap&, const SegmentMap&) = default;
};

struct BacktrackedCube {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::vector<std::uint32_t> sample_times;
    std::vector<double> values;  // sample-major, row-major within a sample
    // Provenance: covering segment of each value (may be empty).
    std::vector<std::uint32_t> segment_start;
    std::vector<std::uint32_t> segment_end;

    std::size_t pixels() const { return std::size_t{width} * height; }
    std::size_t samples() const { return sample_times.size(); }
    double at(std::size_t s, std::uint32_t x, std::uint32_t y) const { return values[s * pixels() + std::size_t{y} * width + x]; }
    double& at(std::size_t s, std::uint32_t x, std::uint32_t y) { return values[s * pixels() + std::size_t{y} * width + x]; }
    std::span<const double> frame(std::size_t s) const { return {values.data() + s * pixels(), pixels()}; }
};

struct BacktrackOptions {
    // Replace payload values by their quantized levels (what a receiver sees).
    bool dequantize = true;
};

// Per-pixel segments. Patch payloads scatter to member pixels; coded windows
// keep their bucket means. Throws malformed_stream on gaps or overlaps.
SegmentMap backtrack(const EventStream& stream, BacktrackOptions options = {});

// Expands coded windows into N subframe segments via the diagonal
// pseudo-inverse of the per-pixel masks. Static segments stay constant.
SegmentMap pseudo_inverse(const SegmentMap& coded, const CameraConfig& config);

// Samples at t = 0, stride, 2*stride, ... < frames.
BacktrackedCube sample_uniform(const SegmentMap& segments, std::uint32_t stride, bool provenance = true);

// Replace hot pixels by their nearest non-hot pixel (4-neighbour BFS, visiting
// up, left, right, down). Throws invalid_argument if every pixel is hot.
BacktrackedCube inpaint_hot(const BacktrackedCube& cube, const HotPixelMask& mask);

// backtrack -> pseudo_inverse (coded only) -> sample_uniform.
BacktrackedCube decode(const EventStream& stream, std::uint32_t stride, BacktrackOptions options = {});

}  // namespace gevent
