#include "gevent/detectors.hpp"
#include "internal/coded_math.hpp"
#include "internal/rows.hpp"

namespace gevent {

EventStream run_coded(const PhotonCube& cube, std::uint16_t t_code, std::uint16_t buckets, std::uint16_t subframes,
                      double z, std::uint64_t mask_seed) {
    const CameraConfig config = detail::coded_config(cube, t_code, buckets, subframes, z, mask_seed);
    const std::uint32_t W = cube.width(), J = buckets, N = subframes;
    const std::uint32_t sub_len = t_code / subframes, windows = config.time_units();

    return detail::run_rows(config, cube.height(), [&](std::uint32_t y, std::vector<EventPacket>& out) {
        // bucket of pixel x at subframe n, subframe-major
        std::vector<std::uint8_t> bucket(std::size_t{N} * W);
        for (std::uint32_t x = 0; x < W; ++x) {
            const CodedMasks masks = pixel_masks(config, x, y);
            for (std::uint32_t n = 0; n < N; ++n) bucket[std::size_t{n} * W + x] = masks.bucket_of[n];
        }
        std::vector<std::uint32_t> counts(std::size_t{W} * J), total(W);
        std::vector<std::uint64_t> long_count(W, 0), long_frames(W, 0);
        const std::size_t base = std::size_t{y} * W;

        for (std::uint32_t w = 0; w < windows; ++w) {
            std::fill(counts.begin(), counts.end(), 0);
            std::fill(total.begin(), total.end(), 0);
            for (std::uint32_t n = 0; n < N; ++n) {
                const std::uint8_t* b = &bucket[std::size_t{n} * W];
                const std::uint32_t t0 = w * t_code + n * sub_len;
                for (std::uint32_t t = t0; t < t0 + sub_len; ++t)
                    for (std::uint32_t x = 0; x < W; ++x) {
                        const std::uint32_t bit = cube.bit_at(t, base + x);
                        counts[std::size_t{x} * J + b[x]] += bit;
                        total[x] += bit;
                    }
            }
            for (std::uint32_t x = 0; x < W; ++x) {
                const std::uint32_t* cnt = &counts[std::size_t{x} * J];
                if (detail::window_is_static(cnt, total[x], config)) {
                    long_count[x] += total[x];
                    long_frames[x] += t_code;
                    if (w + 1 == windows)
                        out.push_back(detail::scalar_packet(
                            w, x, y, static_cast<double>(long_count[x]) / static_cast<double>(long_frames[x])));
                } else {
                    out.push_back(EventPacket{w, static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y),
                                              detail::coded_payload(cnt, config, long_count[x], long_frames[x])});
                    long_count[x] = long_frames[x] = 0;
                }
            }
        }
    });
}

}  // namespace gevent
