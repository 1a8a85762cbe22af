#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gevent/detectors.hpp"
#include "gevent/error.hpp"

namespace gevent::detail {

inline CameraConfig coded_config(const PhotonCube& cube, std::uint16_t t_code, std::uint16_t buckets,
                                 std::uint16_t subframes, double z, std::uint64_t mask_seed) {
    CameraConfig config = default_config(Method::coded, cube.width(), cube.height(), cube.frames());
    config.t_code = t_code;
    config.buckets = buckets;
    config.subframes = subframes;
    config.z = z;
    config.mask_seed = mask_seed;
    config.validate();
    return config;
}

// Static iff every bucket mean lies in the Wilson interval around the window mean.
inline bool window_is_static(const std::uint32_t* counts, std::uint32_t total, const CameraConfig& c) {
    const double draws = static_cast<double>(c.t_code) / c.buckets;
    const WilsonInterval w = wilson_interval(draws, static_cast<double>(total) / c.t_code, c.z);
    for (unsigned j = 0; j < c.buckets; ++j)
        if (!w.contains(counts[j] / draws)) return false;
    return true;
}

inline CodedPayload coded_payload(const std::uint32_t* counts, const CameraConfig& c, std::uint64_t long_count,
                                  std::uint64_t long_frames) {
    const double draws = static_cast<double>(c.t_code) / c.buckets;
    CodedPayload p;
    for (unsigned j = 0; j < c.buckets; ++j) p.buckets.push_back(counts[j] / draws);
    if (long_frames > 0) p.long_value = static_cast<double>(long_count) / static_cast<double>(long_frames);
    return p;
}

}  // namespace gevent::detail
