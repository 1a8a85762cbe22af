#pragma once

// Single-photon (SPAD) image formation: flux videos in, bit-packed binary
// photon-detection cubes out.
//
// A pixel receiving N(x,t) = alpha * I(x,t) + d photo-electrons per binary
// frame detects at least one photon with probability 1 - exp(-N).

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace gevent {

inline constexpr double kDefaultDarkRate = 7.74e-4;  // detections per binary frame
inline constexpr double kDefaultTargetPpp = 1.0;
inline constexpr std::uint32_t kDefaultFramesPerVideoFrame = 6;
inline constexpr double kDefaultVideoFps = 16000.0;

// Linear, nonnegative flux frames (already linearized; see io::read_flux_video).
struct FluxVideo {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    double frame_rate = kDefaultVideoFps;
    std::vector<double> data;  // frame-major, row-major within a frame

    FluxVideo() = default;
    FluxVideo(std::uint32_t w, std::uint32_t h, std::size_t frames, double fps = kDefaultVideoFps, double fill = 0.0);

    std::size_t pixels() const { return std::size_t{width} * height; }
    std::size_t frame_count() const { return pixels() == 0 ? 0 : data.size() / pixels(); }
    double& at(std::size_t f, std::uint32_t x, std::uint32_t y) { return data[f * pixels() + std::size_t{y} * width + x]; }
    double at(std::size_t f, std::uint32_t x, std::uint32_t y) const { return data[f * pixels() + std::size_t{y} * width + x]; }
    std::span<const double> frame(std::size_t f) const { return {data.data() + f * pixels(), pixels()}; }

    // Throws invalid_argument unless dimensions are consistent, there is at
    // least one frame and every value is finite and >= 0.
    void validate() const;
};

struct SpadCalibration {
    double alpha = 1.0;            // flux -> photo-electrons per binary frame
    double dark = kDefaultDarkRate;

    double photo_electrons(double flux) const { return alpha * flux + dark; }
    void validate() const;
};

// T x H x W binary detections. Frames are contiguous; each frame is
// ceil(W*H/8) bytes, row-major, most significant bit first. Pad bits are zero.
class PhotonCube {
public:
    PhotonCube() = default;
    PhotonCube(std::uint32_t width, std::uint32_t height, std::uint32_t frames,
               SpadCalibration calibration = {}, double binary_frame_rate = kDefaultVideoFps * kDefaultFramesPerVideoFrame);

    std::uint32_t width() const { return width_; }
    std::uint32_t height() const { return height_; }
    std::uint32_t frames() const { return frames_; }
    std::size_t pixels() const { return std::size_t{width_} * height_; }
    std::size_t frame_bytes() const { return (pixels() + 7) / 8; }
    std::size_t total_bits() const { return pixels() * frames_; }

    const SpadCalibration& calibration() const { return calibration_; }
    void set_calibration(const SpadCalibration& c) { calibration_ = c; }
    double binary_frame_rate() const { return binary_frame_rate_; }
    void set_binary_frame_rate(double hz) { binary_frame_rate_ = hz; }
    double duration_s() const { return frames_ / binary_frame_rate_; }

    bool bit(std::uint32_t x, std::uint32_t y, std::uint32_t t) const {
        return bit_at(t, std::size_t{y} * width_ + x);
    }
    bool bit_at(std::uint32_t t, std::size_t pixel) const {
        const std::uint8_t byte = bytes_[t * frame_bytes() + (pixel >> 3)];
        return (byte >> (7 - (pixel & 7))) & 1u;
    }
    void set_bit(std::uint32_t x, std::uint32_t y, std::uint32_t t, bool value);

    std::span<const std::uint8_t> frame_data(std::uint32_t t) const { return {bytes_.data() + t * frame_bytes(), frame_bytes()}; }
    std::span<std::uint8_t> frame_data(std::uint32_t t) { return {bytes_.data() + t * frame_bytes(), frame_bytes()}; }
    std::span<const std::uint8_t> bytes() const { return bytes_; }
    std::span<std::uint8_t> bytes() { return bytes_; }

    // Mean detection rate over all bits.
    double mean_rate() const;

    friend bool operator==(const PhotonCube& a, const PhotonCube& b) {
        return a.width_ == b.width_ && a.height_ == b.height_ && a.frames_ == b.frames_ &&
               a.calibration_.alpha == b.calibration_.alpha && a.calibration_.dark == b.calibration_.dark &&
               a.binary_frame_rate_ == b.binary_frame_rate_ && a.bytes_ == b.bytes_;
    }

private:
    std::uint32_t width_ = 0;
    std::uint32_t height_ = 0;
    std::uint32_t frames_ = 0;
    SpadCalibration calibration_{};
    double binary_frame_rate_ = kDefaultVideoFps * kDefaultFramesPerVideoFrame;
    std::vector<std::uint8_t> bytes_;
};

struct HotPixelMask {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::vector<std::uint8_t> hot;  // 1 = hot

    HotPixelMask() = default;
    HotPixelMask(std::uint32_t w, std::uint32_t h) : width(w), height(h), hot(std::size_t{w} * h, 0) {}
    bool is_hot(std::uint32_t x, std::uint32_t y) const { return hot[std::size_t{y} * width + x] != 0; }
    std::size_t count() const;
};

// alpha such that mean(alpha * I) == target_ppp; dark rate passed through.
SpadCalibration calibrate_alpha(const FluxVideo& video, double target_ppp = kDefaultTargetPpp,
                                double dark = kDefaultDarkRate);

// Bernoulli sampling with p = 1 - exp(-(alpha*I + d)), keyed by
// (seed, x, y, t). OpenMP-parallel over frames; identical to the serial
// reference for any thread count.
PhotonCube simulate_cube(const FluxVideo& video, const SpadCalibration& cal, std::uint32_t frames_per_video_frame,
                         std::uint64_t seed);

// Deterministic "noise-free" cube: each pixel's bits are an evenly spread
// (error-diffusion) sequence whose running rate tracks the given detection
// probability. Values of the input video are probabilities in [0,1].
PhotonCube dither_cube(const FluxVideo& probability, std::uint32_t frames_per_video_frame);

enum class SceneKind { static_scene, step, moving_block, piecewise_1d };

SceneKind parse_scene_kind(std::string_view name);
std::string_view scene_kind_name(SceneKind kind);

struct SceneParams {
    std::uint32_t width = 64;
    std::uint32_t height = 64;
    std::uint32_t frames = 100;
    double frame_rate = kDefaultVideoFps;
    double level = 0.5;          // static level; step "before"; block background
    double level2 = 0.8;         // step "after"; block foreground
    std::uint32_t step_frame = 50;
    double speed = 0.25;         // moving block, pixels per frame
    std::uint32_t block_size = 8;
    std::uint32_t block_x0 = 8;  // left edge at frame 0
    std::uint32_t block_y0 = 8;
    // piecewise_1d: consecutive (duration in frames, level) pieces
    std::vector<std::pair<std::uint32_t, double>> pieces;
};

FluxVideo synth_scene(SceneKind kind, const SceneParams& params);

// Pixel is hot iff its mean detection rate over the (dark) cube exceeds the threshold.
HotPixelMask detect_hot_pixels(const PhotonCube& dark_cube, double rate_threshold);

}  // namespace gevent
