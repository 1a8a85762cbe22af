#pragma once

#include <cmath>
#include <cstdint>

#include "gevent/philox.hpp"
#include "gevent/photon_sim.hpp"

namespace gevent::detail {

inline double detection_probability(double flux, const SpadCalibration& cal) {
    return -std::expm1(-cal.photo_electrons(flux));
}

inline double photon_draw(std::uint64_t seed, std::uint32_t x, std::uint32_t y, std::uint32_t t) {
    return philox_uniform(philox4x32({t, x, y, static_cast<std::uint32_t>(RngStream::photon)}, philox_key(seed)));
}

}  // namespace gevent::detail
