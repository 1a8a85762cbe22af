#include "gevent/detectors.hpp"
#include "gevent/error.hpp"
#include "internal/rows.hpp"

#include <cmath>

namespace gevent {

EventStream run_adaptive_ema(const PhotonCube& cube, double tau, double gamma_ema, std::uint32_t warmup) {
    CameraConfig config = default_config(Method::ema, cube.width(), cube.height(), cube.frames());
    config.tau = tau;
    config.gamma_ema = gamma_ema;
    config.warmup = warmup;
    config.validate();
    const std::uint32_t W = cube.width(), T = cube.frames();
    const double keep = 1.0 - gamma_ema;

    return detail::run_rows(config, cube.height(), [&](std::uint32_t y, std::vector<EventPacket>& out) {
        std::vector<double> ema(W, 0.0), ref(W, 0.0);
        std::vector<std::uint32_t> ones(W, 0), count(W, 0);
        const std::size_t base = std::size_t{y} * W;
        for (std::uint32_t t = 0; t < T; ++t) {
            const std::uint32_t step = t + 1;
            for (std::uint32_t x = 0; x < W; ++x) {
                const bool bit = cube.bit_at(t, base + x);
                ema[x] = gamma_ema * ema[x] + keep * (bit ? 1.0 : 0.0);
                ones[x] += bit;
                count[x] += 1;
            }
            if (step < warmup) continue;
            if (step == warmup) {
                ref = ema;
                continue;
            }
            if (step == T) {
                for (std::uint32_t x = 0; x < W; ++x)
                    out.push_back(detail::scalar_packet(t, x, y, static_cast<double>(ones[x]) / count[x]));
                continue;
            }
            for (std::uint32_t x = 0; x < W; ++x) {
                if (std::abs(ema[x] - ref[x]) > tau) {
                    out.push_back(detail::scalar_packet(t, x, y, static_cast<double>(ones[x]) / count[x]));
                    ref[x] = ema[x];
                    ones[x] = 0;
                    count[x] = 0;
                }
            }
        }
    });
}

}  // namespace gevent
