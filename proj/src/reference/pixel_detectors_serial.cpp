#include <cmath>

#include "gevent/error.hpp"
#include "gevent/reference.hpp"
#include "internal/rows.hpp"

namespace gevent::reference {

namespace {

EventStream finish(const CameraConfig& config, std::vector<EventPacket>&& packets) {
    std::vector<std::vector<EventPacket>> parts;
    parts.push_back(std::move(packets));
    return merge_streams(config, std::move(parts));
}

}  // namespace

EventStream run_dvs_baseline(const PhotonCube& cube, double tau, double gamma_ema) {
    CameraConfig config = default_config(Method::dvs, cube.width(), cube.height(), cube.frames());
    config.tau = tau;
    config.gamma_ema = gamma_ema;
    config.validate();
    const std::uint32_t T = cube.frames();
    std::vector<EventPacket> packets;
    for (std::uint32_t y = 0; y < cube.height(); ++y)
        for (std::uint32_t x = 0; x < cube.width(); ++x) {
            double ema = 0.0, ref = 0.0;
            for (std::uint32_t t = 0; t < T; ++t) {
                const double b = cube.bit(x, y, t) ? 1.0 : 0.0;
                ema = gamma_ema * ema + (1.0 - gamma_ema) * b;
                if (t == T - 1) {
                    packets.push_back(detail::scalar_packet(t, x, y, ema));
                } else if (std::abs(ema - ref) >= tau) {
                    packets.push_back(detail::scalar_packet(t, x, y, ema > ref ? 1.0 : 0.0));
                    ref = ema;
                }
            }
        }
    return finish(config, std::move(packets));
}

EventStream run_adaptive_ema(const PhotonCube& cube, double tau, double gamma_ema, std::uint32_t warmup) {
    CameraConfig config = default_config(Method::ema, cube.width(), cube.height(), cube.frames());
    config.tau = tau;
    config.gamma_ema = gamma_ema;
    config.warmup = warmup;
    config.validate();
    const std::uint32_t T = cube.frames();
    std::vector<EventPacket> packets;
    for (std::uint32_t y = 0; y < cube.height(); ++y)
        for (std::uint32_t x = 0; x < cube.width(); ++x) {
            double ema = 0.0, ref = 0.0;
            std::uint32_t ones = 0, n = 0;
            for (std::uint32_t i = 0; i < T; ++i) {
                const bool bit = cube.bit(x, y, i);
                ema = gamma_ema * ema + (1.0 - gamma_ema) * (bit ? 1.0 : 0.0);
                ones += bit;
                n += 1;
                const std::uint32_t t = i + 1;
                if (t == warmup) {
                    ref = ema;
                } else if (warmup < t && t < T) {
                    if (std::abs(ema - ref) > tau) {
                        packets.push_back(detail::scalar_packet(i, x, y, static_cast<double>(ones) / n));
                        ref = ema;
                        ones = 0;
                        n = 0;
                    }
                } else if (t == T) {
                    packets.push_back(detail::scalar_packet(i, x, y, static_cast<double>(ones) / n));
                }
            }
        }
    return finish(config, std::move(packets));
}

EventStream run_bayesian(const PhotonCube& cube, double gamma, std::uint16_t forecasters, bool renormalize) {
    CameraConfig config = default_config(Method::bayes, cube.width(), cube.height(), cube.frames());
    config.gamma_bayes = gamma;
    config.forecasters = forecasters;
    config.validate();
    const std::uint32_t T = cube.frames();
    std::vector<EventPacket> packets;
    for (std::uint32_t y = 0; y < cube.height(); ++y)
        for (std::uint32_t x = 0; x < cube.width(); ++x) {
            BayesianChangeDetector det(gamma, forecasters, renormalize);
            std::uint32_t ones = 0, n = 0;
            for (std::uint32_t t = 0; t < T; ++t) {
                const bool bit = cube.bit(x, y, t);
                ones += bit;
                n += 1;
                if (det.push(bit, t).change) {
                    packets.push_back(detail::scalar_packet(t, x, y, static_cast<double>(ones) / n));
                    ones = 0;
                    n = 0;
                    det.reset(t + 1);
                } else if (t == T - 1) {
                    packets.push_back(detail::scalar_packet(t, x, y, static_cast<double>(ones) / n));
                }
            }
        }
    return finish(config, std::move(packets));
}

EventStream encode(const PhotonCube& cube, const CameraConfig& config, const FeatureMatrix* P) {
    require(config.width == cube.width() && config.height == cube.height() && config.frames == cube.frames(),
            "encode: config dimensions do not match the cube");
    config.validate();
    EventStream s;
    switch (config.method) {
    case Method::dvs: s = reference::run_dvs_baseline(cube, config.tau, config.gamma_ema); break;
    case Method::ema: s = reference::run_adaptive_ema(cube, config.tau, config.gamma_ema, config.warmup); break;
    case Method::bayes: s = reference::run_bayesian(cube, config.gamma_bayes, config.forecasters); break;
    case Method::chunk: {
        const FeatureMatrix I = FeatureMatrix::identity(std::size_t{config.patch} * config.patch);
        s = reference::run_chunk(cube, config.tau, config.chunk_size, config.patch, P ? *P : I);
        break;
    }
    case Method::coded:
        s = reference::run_coded(cube, config.t_code, config.buckets, config.subframes, config.z, config.mask_seed);
        break;
    }
    s.config.quant_bits = config.quant_bits;
    return s;
}

}  // namespace gevent::reference
