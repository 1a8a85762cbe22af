#include <cmath>

#include "gevent/detectors.hpp"
#include "gevent/error.hpp"

namespace gevent {

// Event generation with a Heaviside gate k in {0,1} instead of branches,
// followed by backward recursion over the whole clip:
//   S(i) = (1 - k(i)) S(i-1) + Phi(i),   n(i) = (1 - k(i)) n(i-1) + 1
//   B(last) = Sigma(last),  B(i) = k(i+1) Sigma(i) + (1 - k(i+1)) B(i+1)
BacktrackedCube run_chunk_autodiff_reference(const PhotonCube& cube, double tau, std::uint16_t chunk_size,
                                             std::uint16_t patch, const FeatureMatrix& P) {
    CameraConfig config = default_config(Method::chunk, cube.width(), cube.height(), cube.frames());
    config.tau = tau;
    config.chunk_size = chunk_size;
    config.patch = patch;
    config.validate();
    P.validate();
    const std::size_t q = std::size_t{patch} * patch;
    require(P.cols == q, "chunk: feature matrix must have patch*patch columns");
    const std::uint32_t m = chunk_size, C = config.time_units();
    const double dm = m;

    BacktrackedCube out;
    out.width = cube.width();
    out.height = cube.height();
    for (std::uint32_t i = 0; i < C; ++i) out.sample_times.push_back(i * m);
    out.values.assign(out.samples() * out.pixels(), 0.0);

    std::vector<double> phi(C * q), S(C * q), sigma(C * q), B(C * q), k(C), n(C), z(q);
    for (std::uint32_t py = 0; py < config.units_y(); ++py)
        for (std::uint32_t px = 0; px < config.units_x(); ++px) {
            for (std::uint32_t i = 0; i < C; ++i)
                for (std::uint32_t a = 0; a < patch; ++a)
                    for (std::uint32_t b = 0; b < patch; ++b) {
                        double count = 0;
                        for (std::uint32_t t = i * m; t < (i + 1) * m; ++t)
                            count += cube.bit(px * patch + b, py * patch + a, t) ? 1.0 : 0.0;
                        phi[i * q + a * patch + b] = count;
                    }

            k[0] = 0.0;
            n[0] = 1.0;
            for (std::size_t j = 0; j < q; ++j) S[j] = phi[j];
            for (std::uint32_t i = 1; i < C; ++i) {
                const double np = n[i - 1];
                for (std::size_t j = 0; j < q; ++j) {
                    const double f = phi[i * q + j], s = S[(i - 1) * q + j];
                    const double ph = (s + f + 4.0) / (dm * (np + 1.0) + 8.0);
                    const double c = std::sqrt(ph * (1.0 - ph) * (1.0 / dm) * (1.0 + 1.0 / np));
                    z[j] = (f / dm - s / (np * dm)) / c;
                }
                double sq = 0.0;
                for (std::size_t r = 0; r < P.rows; ++r) {
                    double v = 0.0;
                    for (std::size_t col = 0; col < q; ++col) v += P.at(r, col) * z[col];
                    sq += v * v;
                }
                k[i] = std::sqrt(sq) - tau >= 0.0 ? 1.0 : 0.0;
                n[i] = (1.0 - k[i]) * np + 1.0;
                for (std::size_t j = 0; j < q; ++j) S[i * q + j] = (1.0 - k[i]) * S[(i - 1) * q + j] + phi[i * q + j];
            }
            for (std::uint32_t i = 0; i < C; ++i)
                for (std::size_t j = 0; j < q; ++j) sigma[i * q + j] = S[i * q + j] / (n[i] * dm);

            for (std::size_t j = 0; j < q; ++j) B[(C - 1) * q + j] = sigma[(C - 1) * q + j];
            for (std::int64_t i = static_cast<std::int64_t>(C) - 2; i >= 0; --i)
                for (std::size_t j = 0; j < q; ++j)
                    B[i * q + j] = k[i + 1] * sigma[i * q + j] + (1.0 - k[i + 1]) * B[(i + 1) * q + j];

            for (std::uint32_t i = 0; i < C; ++i)
                for (std::uint32_t a = 0; a < patch; ++a)
                    for (std::uint32_t b = 0; b < patch; ++b)
                        out.at(i, px * patch + b, py * patch + a) = B[i * q + a * patch + b];
        }
    return out;
}

}  // namespace gevent
