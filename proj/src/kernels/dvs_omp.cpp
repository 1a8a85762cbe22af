#include "gevent/detectors.hpp"
#include "gevent/error.hpp"
#include "internal/rows.hpp"

#include <cmath>

namespace gevent {

EventStream run_dvs_baseline(const PhotonCube& cube, double tau, double gamma_ema) {
    CameraConfig config = default_config(Method::dvs, cube.width(), cube.height(), cube.frames());
    config.tau = tau;
    config.gamma_ema = gamma_ema;
    config.validate();
    const std::uint32_t W = cube.width(), T = cube.frames();
    const double keep = 1.0 - gamma_ema;

    return detail::run_rows(config, cube.height(), [&](std::uint32_t y, std::vector<EventPacket>& out) {
        std::vector<double> ema(W, 0.0), ref(W, 0.0);
        const std::size_t base = std::size_t{y} * W;
        for (std::uint32_t t = 0; t + 1 < T; ++t) {
            for (std::uint32_t x = 0; x < W; ++x) {
                const double b = cube.bit_at(t, base + x) ? 1.0 : 0.0;
                ema[x] = gamma_ema * ema[x] + keep * b;
                if (std::abs(ema[x] - ref[x]) >= tau) {
                    out.push_back(detail::scalar_packet(t, x, y, ema[x] > ref[x] ? 1.0 : 0.0));
                    ref[x] = ema[x];
                }
            }
        }
        for (std::uint32_t x = 0; x < W; ++x) {
            const double b = cube.bit_at(T - 1, base + x) ? 1.0 : 0.0;
            ema[x] = gamma_ema * ema[x] + keep * b;
            out.push_back(detail::scalar_packet(T - 1, x, y, ema[x]));
        }
    });
}

}  // namespace gevent
