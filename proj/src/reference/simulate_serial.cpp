#include "gevent/error.hpp"
#include "gevent/reference.hpp"
#include "internal/bits.hpp"

namespace gevent::reference {

PhotonCube simulate_cube(const FluxVideo& video, const SpadCalibration& cal, std::uint32_t frames_per_video_frame,
                         std::uint64_t seed) {
    video.validate();
    cal.validate();
    require(frames_per_video_frame >= 1, "simulate: frames_per_video_frame must be >= 1");
    const auto frames = static_cast<std::uint32_t>(video.frame_count() * frames_per_video_frame);
    PhotonCube cube(video.width, video.height, frames, cal, video.frame_rate * frames_per_video_frame);
    for (std::uint32_t t = 0; t < frames; ++t) {
        const std::size_t f = t / frames_per_video_frame;
        for (std::uint32_t y = 0; y < video.height; ++y)
            for (std::uint32_t x = 0; x < video.width; ++x) {
                const double p = -std::expm1(-(cal.alpha * video.at(f, x, y) + cal.dark));
                cube.set_bit(x, y, t, detail::photon_draw(seed, x, y, t) < p);
            }
    }
    return cube;
}

}  // namespace gevent::reference
