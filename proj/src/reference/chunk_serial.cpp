#include "gevent/error.hpp"
#include "gevent/reference.hpp"
#include "internal/chunk_math.hpp"

namespace gevent::reference {

EventStream run_chunk(const PhotonCube& cube, double tau, std::uint16_t chunk_size, std::uint16_t patch,
                      const FeatureMatrix& P) {
    CameraConfig config = default_config(Method::chunk, cube.width(), cube.height(), cube.frames());
    config.tau = tau;
    config.chunk_size = chunk_size;
    config.patch = patch;
    config.validate();
    P.validate();
    const std::size_t q = std::size_t{patch} * patch;
    require(P.cols == q, "chunk: feature matrix must have patch*patch columns");
    const std::uint32_t m = chunk_size, chunks = config.time_units();

    std::vector<EventPacket> packets;
    for (std::uint32_t py = 0; py < config.units_y(); ++py)
        for (std::uint32_t px = 0; px < config.units_x(); ++px) {
            std::vector<std::uint32_t> sum(q, 0), phi(q);
            std::vector<double> z(q);
            std::uint32_t n = 0;
            const auto emit = [&](std::uint32_t t) {
                PatchPayload payload;
                for (std::size_t i = 0; i < q; ++i) payload.values.push_back(detail::segment_mean(sum[i], n, m));
                packets.push_back(EventPacket{t, static_cast<std::uint16_t>(px), static_cast<std::uint16_t>(py), payload});
            };
            for (std::uint32_t c = 0; c < chunks; ++c) {
                for (std::uint32_t i = 0; i < patch; ++i)
                    for (std::uint32_t j = 0; j < patch; ++j) {
                        std::uint32_t count = 0;
                        for (std::uint32_t t = c * m; t < (c + 1) * m; ++t)
                            count += cube.bit(px * patch + j, py * patch + i, t);
                        phi[i * patch + j] = count;
                    }
                if (n > 0) {
                    for (std::size_t i = 0; i < q; ++i) z[i] = detail::chunk_z(phi[i], sum[i], n, m);
                    if (detail::projected_norm(P, z.data()) >= tau) {
                        emit(c - 1);
                        std::fill(sum.begin(), sum.end(), 0);
                        n = 0;
                    }
                }
                for (std::size_t i = 0; i < q; ++i) sum[i] += phi[i];
                n += 1;
            }
            emit(chunks - 1);
        }
    std::vector<std::vector<EventPacket>> parts;
    parts.push_back(std::move(packets));
    EventStream s = merge_streams(config, std::move(parts));
    return s;
}

}  // namespace gevent::reference
