#include "gevent/detectors.hpp"
#include "gevent/error.hpp"
#include "internal/rows.hpp"

namespace gevent {

// Structure-of-arrays version of BayesianChangeDetector for one image row.
// Arithmetic follows BayesianChangeDetector::push operation for operation.
EventStream run_bayesian(const PhotonCube& cube, double gamma, std::uint16_t forecasters) {
    CameraConfig config = default_config(Method::bayes, cube.width(), cube.height(), cube.frames());
    config.gamma_bayes = gamma;
    config.forecasters = forecasters;
    config.validate();
    const std::uint32_t W = cube.width(), T = cube.frames();
    const std::size_t K = forecasters;

    return detail::run_rows(config, cube.height(), [&](std::uint32_t y, std::vector<EventPacket>& out) {
        std::vector<double> nu(W * K), pseudo(W * K), alpha(W * K), beta(W * K);
        std::vector<std::uint32_t> origin(W * K);
        std::vector<int> anchor(W);
        std::vector<std::uint32_t> ones(W, 0), count(W, 0);
        const auto reset = [&](std::uint32_t x, std::uint32_t o) {
            for (std::size_t k = 0; k < K; ++k) {
                nu[x * K + k] = pseudo[x * K + k] = alpha[x * K + k] = beta[x * K + k] = 0.0;
                origin[x * K + k] = 0;
            }
            nu[x * K] = pseudo[x * K] = alpha[x * K] = beta[x * K] = 1.0;
            origin[x * K] = o;
            anchor[x] = 0;
        };
        for (std::uint32_t x = 0; x < W; ++x) reset(x, 0);

        const std::size_t base = std::size_t{y} * W;
        for (std::uint32_t t = 0; t < T; ++t) {
            for (std::uint32_t x = 0; x < W; ++x) {
                const bool bit = cube.bit_at(t, base + x);
                ones[x] += bit;
                count[x] += 1;
                double* n = &nu[x * K];
                double* ps = &pseudo[x * K];
                double* a = &alpha[x * K];
                double* b = &beta[x * K];
                const double v = bit ? 1.0 : 0.0;
                for (std::size_t k = 0; k < K; ++k) {
                    if (!(a[k] > 0.0)) continue;
                    const double l = (bit ? a[k] : b[k]) / (a[k] + b[k]);
                    n[k] = (1.0 - gamma) * n[k] * l;
                    ps[k] = ps[k] * l;
                    a[k] += v;
                    b[k] += 1.0 - v;
                }
                double total = 0.0;
                for (std::size_t k = 0; k < K; ++k) total += ps[k];
                const double fresh = gamma * total;
                std::size_t kmin = 0;
                for (std::size_t k = 1; k < K; ++k)
                    if (n[k] < n[kmin]) kmin = k;
                if (fresh > n[kmin]) {
                    n[kmin] = ps[kmin] = fresh;
                    a[kmin] = b[kmin] = 1.0;
                    origin[x * K + kmin] = t;
                    if (static_cast<int>(kmin) == anchor[x]) anchor[x] = -1;
                }
                std::size_t kmax = 0;
                for (std::size_t k = 1; k < K; ++k)
                    if (n[k] > n[kmax]) kmax = k;
                bool change = anchor[x] < 0;
                if (!change)
                    for (std::size_t k = 0; k < K; ++k)
                        if (static_cast<int>(k) != anchor[x] && n[k] > n[anchor[x]]) change = true;

                if (change) {
                    out.push_back(detail::scalar_packet(t, x, y, static_cast<double>(ones[x]) / count[x]));
                    ones[x] = count[x] = 0;
                    reset(x, t + 1);
                    continue;
                }
                const double s = n[kmax];
                for (std::size_t k = 0; k < K; ++k) {
                    n[k] /= s;
                    ps[k] /= s;
                }
                if (t + 1 == T) out.push_back(detail::scalar_packet(t, x, y, static_cast<double>(ones[x]) / count[x]));
            }
        }
    });
}

}  // namespace gevent
