#pragma once

#include <cmath>
#include <cstdint>

#include "gevent/detectors.hpp"

namespace gevent::detail {

// Normalized difference between one chunk's counts (phi, m frames) and the
// running segment counts (sum, n chunks), with the ghost-sampled variance.
inline double chunk_z(std::uint32_t phi, std::uint32_t sum, std::uint32_t n, std::uint32_t m) {
    const double dm = m, dn = n;
    const double mean_phi = phi / dm;
    const double mean_sum = sum / (dn * dm);
    const double p = (static_cast<double>(sum) + phi + 4.0) / (dm * (dn + 1.0) + 8.0);
    const double c = std::sqrt(p * (1.0 - p) * (1.0 / dm) * (1.0 + 1.0 / dn));
    return (mean_phi - mean_sum) / c;
}

// ||P z||
inline double projected_norm(const FeatureMatrix& P, const double* z) {
    double sq = 0.0;
    for (std::size_t r = 0; r < P.rows; ++r) {
        double v = 0.0;
        for (std::size_t c = 0; c < P.cols; ++c) v += P.at(r, c) * z[c];
        sq += v * v;
    }
    return std::sqrt(sq);
}

inline double identity_norm(const double* z, std::size_t q) {
    double sq = 0.0;
    for (std::size_t i = 0; i < q; ++i) sq += z[i] * z[i];
    return std::sqrt(sq);
}

inline double segment_mean(std::uint32_t sum, std::uint32_t n, std::uint32_t m) {
    return sum / (static_cast<double>(n) * m);
}

}  // namespace gevent::detail
