#pragma once

#include <cstdint>
#include <vector>

#include "gevent/event_model.hpp"
#include "internal/omp_guard.hpp"

namespace gevent::detail {

// Runs fn(row, packets) for every row in parallel and merges the per-row
// packet lists into one sorted stream.
template <class RowFn>
EventStream run_rows(const CameraConfig& config, std::uint32_t rows, RowFn fn) {
    std::vector<std::vector<EventPacket>> parts(rows);
    ExceptionSlot error;
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t y = 0; y < static_cast<std::int64_t>(rows); ++y)
        error.run([&] { fn(static_cast<std::uint32_t>(y), parts[y]); });
    error.rethrow();
    return merge_streams(config, std::move(parts));
}

inline EventPacket scalar_packet(std::uint32_t t, std::uint32_t x, std::uint32_t y, double v) {
    return EventPacket{t, static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y), ScalarPayload{v}};
}

}  // namespace gevent::detail
