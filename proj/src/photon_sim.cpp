#include "gevent/photon_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gevent/error.hpp"

namespace gevent {

FluxVideo::FluxVideo(std::uint32_t w, std::uint32_t h, std::size_t frames, double fps, double fill)
    : width(w), height(h), frame_rate(fps), data(std::size_t{w} * h * frames, fill) {}

void FluxVideo::validate() const {
    require(width >= 1 && height >= 1, "flux video: empty frame dimensions");
    require(!data.empty() && data.size() % pixels() == 0, "flux video: needs at least one whole frame");
    require(frame_rate > 0.0, "flux video: frame rate must be positive");
    for (double v : data) require(std::isfinite(v) && v >= 0.0, "flux video: values must be finite and >= 0");
}

void SpadCalibration::validate() const {
    require(alpha > 0.0 && std::isfinite(alpha), "calibration: alpha must be > 0");
    require(dark >= 0.0 && std::isfinite(dark), "calibration: dark rate must be >= 0");
}

PhotonCube::PhotonCube(std::uint32_t width, std::uint32_t height, std::uint32_t frames, SpadCalibration calibration,
                       double binary_frame_rate)
    : width_(width), height_(height), frames_(frames), calibration_(calibration),
      binary_frame_rate_(binary_frame_rate) {
    require(width >= 1 && height >= 1 && frames >= 1, "photon cube: W, H, T must be >= 1");
    require(binary_frame_rate > 0.0, "photon cube: binary frame rate must be positive");
    bytes_.assign(frame_bytes() * frames, 0);
}

void PhotonCube::set_bit(std::uint32_t x, std::uint32_t y, std::uint32_t t, bool value) {
    const std::size_t pixel = std::size_t{y} * width_ + x;
    std::uint8_t& byte = bytes_[t * frame_bytes() + (pixel >> 3)];
    const auto mask = static_cast<std::uint8_t>(0x80u >> (pixel & 7));
    byte = value ? static_cast<std::uint8_t>(byte | mask) : static_cast<std::uint8_t>(byte & ~mask);
}

double PhotonCube::mean_rate() const {
    std::uint64_t ones = 0;
    for (std::uint8_t b : bytes_) ones += static_cast<std::uint64_t>(__builtin_popcount(b));
    return total_bits() == 0 ? 0.0 : static_cast<double>(ones) / static_cast<double>(total_bits());
}

std::size_t HotPixelMask::count() const {
    return static_cast<std::size_t>(std::count_if(hot.begin(), hot.end(), [](std::uint8_t h) { return h != 0; }));
}

SpadCalibration calibrate_alpha(const FluxVideo& video, double target_ppp, double dark) {
    video.validate();
    require(target_ppp > 0.0, "calibrate_alpha: target PPP must be > 0");
    require(dark >= 0.0, "calibrate_alpha: dark rate must be >= 0");
    const double mean = std::accumulate(video.data.begin(), video.data.end(), 0.0) / static_cast<double>(video.data.size());
    if (!(mean > 0.0)) fail(Errc::numeric, "calibrate_alpha: all-zero video, alpha undefined");
    return SpadCalibration{target_ppp / mean, dark};
}

PhotonCube dither_cube(const FluxVideo& probability, std::uint32_t frames_per_video_frame) {
    probability.validate();
    require(frames_per_video_frame >= 1, "dither_cube: frames_per_video_frame must be >= 1");
    for (double p : probability.data) require(p <= 1.0, "dither_cube: probabilities must be <= 1");
    const auto frames = static_cast<std::uint32_t>(probability.frame_count() * frames_per_video_frame);
    PhotonCube cube(probability.width, probability.height, frames, SpadCalibration{1.0, 0.0},
                    probability.frame_rate * frames_per_video_frame);
    std::vector<double> carry(probability.pixels(), 0.0);
    for (std::uint32_t t = 0; t < frames; ++t) {
        const auto f = t / frames_per_video_frame;
        for (std::uint32_t y = 0; y < probability.height; ++y) {
            for (std::uint32_t x = 0; x < probability.width; ++x) {
                double& acc = carry[std::size_t{y} * probability.width + x];
                acc += probability.at(f, x, y);
                if (acc >= 1.0) {
                    acc -= 1.0;
                    cube.set_bit(x, y, t, true);
                }
            }
        }
    }
    return cube;
}

SceneKind parse_scene_kind(std::string_view name) {
    if (name == "static") return SceneKind::static_scene;
    if (name == "step") return SceneKind::step;
    if (name == "moving_block") return SceneKind::moving_block;
    if (name == "piecewise_1d") return SceneKind::piecewise_1d;
    fail(Errc::invalid_argument, "unknown scene kind '" + std::string(name) + "'");
}

std::string_view scene_kind_name(SceneKind kind) {
    switch (kind) {
    case SceneKind::static_scene: return "static";
    case SceneKind::step: return "step";
    case SceneKind::moving_block: return "moving_block";
    case SceneKind::piecewise_1d: return "piecewise_1d";
    }
    return "?";
}

FluxVideo synth_scene(SceneKind kind, const SceneParams& params) {
    require(params.level >= 0.0 && params.level2 >= 0.0, "synth: levels must be >= 0");
    if (kind == SceneKind::piecewise_1d) {
        require(!params.pieces.empty(), "synth piecewise_1d: needs at least one piece");
        std::size_t frames = 0;
        for (const auto& [duration, level] : params.pieces) {
            require(duration >= 1 && level >= 0.0, "synth piecewise_1d: pieces need duration >= 1 and level >= 0");
            frames += duration;
        }
        FluxVideo video(1, 1, frames, params.frame_rate);
        std::size_t f = 0;
        for (const auto& [duration, level] : params.pieces)
            for (std::uint32_t i = 0; i < duration; ++i) video.data[f++] = level;
        return video;
    }

    require(params.width >= 1 && params.height >= 1 && params.frames >= 1, "synth: W, H, frames must be >= 1");
    FluxVideo video(params.width, params.height, params.frames, params.frame_rate, params.level);
    switch (kind) {
    case SceneKind::static_scene:
        break;
    case SceneKind::step:
        require(params.step_frame < params.frames, "synth step: step frame must lie within the clip");
        std::fill(video.data.begin() + static_cast<std::ptrdiff_t>(params.step_frame * video.pixels()),
                  video.data.end(), params.level2);
        break;
    case SceneKind::moving_block: {
        require(params.speed >= 0.0, "synth moving_block: speed must be >= 0");
        require(params.block_size >= 1, "synth moving_block: block size must be >= 1");
        for (std::uint32_t f = 0; f < params.frames; ++f) {
            const auto left = params.block_x0 + static_cast<std::uint64_t>(std::floor(params.speed * f));
            for (std::uint64_t y = params.block_y0; y < std::min<std::uint64_t>(params.height, params.block_y0 + params.block_size); ++y)
                for (std::uint64_t x = left; x < std::min<std::uint64_t>(params.width, left + params.block_size); ++x)
                    video.at(f, static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y)) = params.level2;
        }
        break;
    }
    case SceneKind::piecewise_1d:
        break;
    }
    return video;
}

HotPixelMask detect_hot_pixels(const PhotonCube& dark_cube, double rate_threshold) {
    HotPixelMask mask(dark_cube.width(), dark_cube.height());
    std::vector<std::uint32_t> counts(dark_cube.pixels(), 0);
    for (std::uint32_t t = 0; t < dark_cube.frames(); ++t)
        for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += dark_cube.bit_at(t, i);
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double rate = static_cast<double>(counts[i]) / dark_cube.frames();
        mask.hot[i] = rate > rate_threshold ? 1 : 0;
    }
    return mask;
}

}  // namespace gevent
