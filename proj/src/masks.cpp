#include "gevent/masks.hpp"

#include <algorithm>
#include <numeric>

#include "gevent/error.hpp"
#include "gevent/event_model.hpp"
#include "gevent/philox.hpp"

namespace gevent {

unsigned CodedMasks::ones(unsigned j) const {
    return static_cast<unsigned>(std::count(bucket_of.begin(), bucket_of.end(), static_cast<std::uint8_t>(j)));
}

namespace {

// Uniform integer in [0, n) from the mask stream, counter = (seed word, i).
std::uint32_t mask_draw(const PhiloxKey& key, std::uint64_t i, std::uint32_t n) {
    const auto w = philox4x32({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32), 0,
                               static_cast<std::uint32_t>(RngStream::mask)},
                              key);
    return static_cast<std::uint32_t>(philox_uniform(w) * n);
}

}  // namespace

CodedMasks make_masks(std::uint16_t buckets, std::uint16_t subframes, std::uint64_t seed, MaskBalance balance) {
    require(buckets >= 1 && buckets <= 255, "masks: J must be in [1,255]");
    require(subframes >= buckets, "masks: need N >= J");
    CodedMasks m;
    m.buckets = buckets;
    m.subframes = subframes;
    m.bucket_of.resize(subframes);
    const auto key = philox_key(seed);
    if (balance == MaskBalance::exact) {
        if (subframes % buckets != 0) fail(Errc::invalid_argument, "masks: N must be divisible by J for exact balance");
        for (unsigned n = 0; n < subframes; ++n) m.bucket_of[n] = static_cast<std::uint8_t>(n % buckets);
        // Fisher-Yates
        for (unsigned n = subframes - 1; n > 0; --n) {
            const auto k = mask_draw(key, n, n + 1);
            std::swap(m.bucket_of[n], m.bucket_of[k]);
        }
    } else {
        for (unsigned n = 0; n < subframes; ++n) m.bucket_of[n] = static_cast<std::uint8_t>(mask_draw(key, n, buckets));
    }
    return m;
}

CodedMasks pixel_masks(const CameraConfig& config, std::uint32_t x, std::uint32_t y) {
    const std::uint64_t pixel = std::uint64_t{y} * config.width + x;
    // splitmix64 finalizer keeps neighbouring pixels' keys unrelated
    std::uint64_t s = config.mask_seed + 0x9E3779B97F4A7C15ull * (pixel + 1);
    s = (s ^ (s >> 30)) * 0xBF58476D1CE4E5B9ull;
    s = (s ^ (s >> 27)) * 0x94D049BB133111EBull;
    s ^= s >> 31;
    return make_masks(config.buckets, config.subframes, s, MaskBalance::exact);
}

}  // namespace gevent
