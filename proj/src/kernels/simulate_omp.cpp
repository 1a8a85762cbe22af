#include <vector>

#include "gevent/error.hpp"
#include "gevent/photon_sim.hpp"
#include "internal/bits.hpp"

namespace gevent {

PhotonCube simulate_cube(const FluxVideo& video, const SpadCalibration& cal, std::uint32_t frames_per_video_frame,
                         std::uint64_t seed) {
    video.validate();
    cal.validate();
    require(frames_per_video_frame >= 1, "simulate: frames_per_video_frame must be >= 1");
    const std::size_t frames64 = video.frame_count() * frames_per_video_frame;
    require(frames64 <= 0xFFFFFFFFu, "simulate: too many binary frames");
    const auto frames = static_cast<std::uint32_t>(frames64);
    const std::uint32_t W = video.width;
    const std::size_t npix = video.pixels();

    PhotonCube cube(W, video.height, frames, cal, video.frame_rate * frames_per_video_frame);

    std::vector<double> prob(video.data.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(prob.size()); ++i)
        prob[i] = detail::detection_probability(video.data[i], cal);

    const std::size_t fb = cube.frame_bytes();
    std::uint8_t* out = cube.bytes().data();
#pragma omp parallel for schedule(static)
    for (std::int64_t t = 0; t < static_cast<std::int64_t>(frames); ++t) {
        const double* p = prob.data() + (t / frames_per_video_frame) * npix;
        std::uint8_t* frame = out + t * fb;
        std::uint8_t acc = 0;
        std::size_t i = 0;
        for (std::uint32_t y = 0; y < video.height; ++y) {
            for (std::uint32_t x = 0; x < W; ++x, ++i) {
                const bool b = detail::photon_draw(seed, x, y, static_cast<std::uint32_t>(t)) < p[i];
                acc = static_cast<std::uint8_t>((acc << 1) | (b ? 1 : 0));
                if ((i & 7) == 7) {
                    frame[i >> 3] = acc;
                    acc = 0;
                }
            }
        }
        if (npix & 7) frame[npix >> 3] = static_cast<std::uint8_t>(acc << (8 - (npix & 7)));
    }
    return cube;
}

}  // namespace gevent
