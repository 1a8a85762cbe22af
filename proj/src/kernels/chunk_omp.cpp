#include "gevent/detectors.hpp"
#include "gevent/error.hpp"
#include "internal/chunk_math.hpp"
#include "internal/rows.hpp"

namespace gevent {

namespace {

CameraConfig chunk_config(const PhotonCube& cube, double tau, std::uint16_t m, std::uint16_t patch,
                          const FeatureMatrix& P) {
    CameraConfig config = default_config(Method::chunk, cube.width(), cube.height(), cube.frames());
    config.tau = tau;
    config.chunk_size = m;
    config.patch = patch;
    config.validate();
    P.validate();
    require(P.cols == std::size_t{patch} * patch, "chunk: feature matrix must have patch*patch columns");
    return config;
}

PatchPayload segment_payload(const std::uint32_t* sum, std::uint32_t n, std::uint32_t m, std::size_t q) {
    PatchPayload p;
    p.values.resize(q);
    for (std::size_t i = 0; i < q; ++i) p.values[i] = detail::segment_mean(sum[i], n, m);
    return p;
}

}  // namespace

EventStream run_chunk(const PhotonCube& cube, double tau, std::uint16_t chunk_size, std::uint16_t patch,
                      const FeatureMatrix& P) {
    const CameraConfig config = chunk_config(cube, tau, chunk_size, patch, P);
    const std::uint32_t W = cube.width(), m = chunk_size, p = patch;
    const std::uint32_t ux = config.units_x(), chunks = config.time_units();
    const std::size_t q = std::size_t{p} * p;
    const bool identity = P.is_identity();

    return detail::run_rows(config, config.units_y(), [&](std::uint32_t py, std::vector<EventPacket>& out) {
        std::vector<std::uint32_t> sum(ux * q, 0), phi(ux * q);
        std::vector<std::uint32_t> n(ux, 0);
        std::vector<double> z(q);
        // offset of each image column within its patch's count vector
        std::vector<std::size_t> slot(W);
        for (std::uint32_t x = 0; x < W; ++x) slot[x] = (x / p) * q + x % p;

        for (std::uint32_t c = 0; c < chunks; ++c) {
            std::fill(phi.begin(), phi.end(), 0);
            for (std::uint32_t t = c * m; t < (c + 1) * m; ++t)
                for (std::uint32_t r = 0; r < p; ++r) {
                    const std::size_t base = std::size_t{py * p + r} * W;
                    std::uint32_t* row = phi.data() + std::size_t{r} * p;
                    for (std::uint32_t x = 0; x < W; ++x) row[slot[x]] += cube.bit_at(t, base + x);
                }
            for (std::uint32_t px = 0; px < ux; ++px) {
                std::uint32_t* S = &sum[px * q];
                const std::uint32_t* F = &phi[px * q];
                if (n[px] > 0) {
                    for (std::size_t i = 0; i < q; ++i) z[i] = detail::chunk_z(F[i], S[i], n[px], m);
                    const double norm = identity ? detail::identity_norm(z.data(), q) : detail::projected_norm(P, z.data());
                    if (norm >= tau) {
                        out.push_back(EventPacket{c - 1, static_cast<std::uint16_t>(px), static_cast<std::uint16_t>(py),
                                                  segment_payload(S, n[px], m, q)});
                        std::fill(S, S + q, 0);
                        n[px] = 0;
                    }
                }
                for (std::size_t i = 0; i < q; ++i) S[i] += F[i];
                n[px] += 1;
            }
        }
        for (std::uint32_t px = 0; px < ux; ++px)
            out.push_back(EventPacket{chunks - 1, static_cast<std::uint16_t>(px), static_cast<std::uint16_t>(py),
                                      segment_payload(&sum[px * q], n[px], m, q)});
    });
}

}  // namespace gevent
