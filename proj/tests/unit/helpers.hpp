#pragma once

#include <cmath>
#include <cstdint>
#include <functional>

#include "gevent/detectors.hpp"
#include "gevent/error.hpp"
#include "gevent/photon_sim.hpp"

namespace testing {

using BitFn = std::function<bool(std::uint32_t x, std::uint32_t y, std::uint32_t t)>;

inline gevent::PhotonCube cube_from(std::uint32_t w, std::uint32_t h, std::uint32_t t, const BitFn& fn) {
    gevent::PhotonCube c(w, h, t, gevent::SpadCalibration{1.0, 0.0});
    for (std::uint32_t f = 0; f < t; ++f)
        for (std::uint32_t y = 0; y < h; ++y)
            for (std::uint32_t x = 0; x < w; ++x)
                if (fn(x, y, f)) c.set_bit(x, y, f, true);
    return c;
}

// Flux giving detection probability p with alpha = 1, d = 0.
inline double flux_for(double p) { return -std::log1p(-p); }

// Seeded moving-block cube: background/foreground detection probabilities
// pb/pf, one video frame per `frames_per` binary frames.
inline gevent::PhotonCube moving_block_cube(std::uint32_t w, std::uint32_t h, std::uint32_t frames, std::uint64_t seed,
                                            double pb = 0.3, double pf = 0.8, std::uint32_t frames_per = 8,
                                            double speed = 0.25, std::uint32_t block = 8) {
    gevent::SceneParams p;
    p.width = w;
    p.height = h;
    p.frames = frames / frames_per;
    p.level = flux_for(pb);
    p.level2 = flux_for(pf);
    p.speed = speed;
    p.block_size = block;
    p.block_x0 = w / 8;
    p.block_y0 = h / 4;
    const auto video = gevent::synth_scene(gevent::SceneKind::moving_block, p);
    return gevent::simulate_cube(video, gevent::SpadCalibration{1.0, 0.0}, frames_per, seed);
}

template <class Fn>
gevent::Errc error_code(Fn&& fn) {
    try {
        fn();
    } catch (const gevent::Error& e) {
        return e.code();
    }
    throw std::runtime_error("expected a gevent::Error");
}

}  // namespace testing
