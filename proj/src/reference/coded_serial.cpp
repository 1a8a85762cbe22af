#include "gevent/reference.hpp"
#include "internal/coded_math.hpp"
#include "internal/rows.hpp"

namespace gevent::reference {

EventStream run_coded(const PhotonCube& cube, std::uint16_t t_code, std::uint16_t buckets, std::uint16_t subframes,
                      double z, std::uint64_t mask_seed) {
    const CameraConfig config = detail::coded_config(cube, t_code, buckets, subframes, z, mask_seed);
    const std::uint32_t sub_len = t_code / subframes, windows = config.time_units();
    std::vector<EventPacket> packets;
    for (std::uint32_t y = 0; y < cube.height(); ++y)
        for (std::uint32_t x = 0; x < cube.width(); ++x) {
            const CodedMasks masks = pixel_masks(config, x, y);
            std::uint64_t long_count = 0, long_frames = 0;
            for (std::uint32_t w = 0; w < windows; ++w) {
                std::vector<std::uint32_t> counts(buckets, 0);
                std::uint32_t total = 0;
                for (std::uint32_t n = 0; n < subframes; ++n) {
                    std::uint32_t s = 0;
                    for (std::uint32_t t = w * t_code + n * sub_len; t < w * t_code + (n + 1) * sub_len; ++t)
                        s += cube.bit(x, y, t);
                    for (unsigned j = 0; j < buckets; ++j)
                        if (masks.on(j, n)) counts[j] += s;
                    total += s;
                }
                if (detail::window_is_static(counts.data(), total, config)) {
                    long_count += total;
                    long_frames += t_code;
                    if (w == windows - 1)
                        packets.push_back(detail::scalar_packet(
                            w, x, y, static_cast<double>(long_count) / static_cast<double>(long_frames)));
                } else {
                    packets.push_back(EventPacket{w, static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y),
                                                  detail::coded_payload(counts.data(), config, long_count, long_frames)});
                    long_count = long_frames = 0;
                }
            }
        }
    std::vector<std::vector<EventPacket>> parts;
    parts.push_back(std::move(packets));
    return merge_streams(config, std::move(parts));
}

}  // namespace gevent::reference
