#pragma once

// Coded-exposure masks: J mutually orthogonal binary codes of length N that
// partition the subframe indices (exactly one code is on at each index).

#include <cstdint>
#include <vector>

namespace gevent {

struct CameraConfig;

enum class MaskBalance {
    exact,  // every code has exactly N/J ones (random balanced assignment)
    iid,    // independent uniform bucket per subframe
};

struct CodedMasks {
    std::uint16_t buckets = 0;
    std::uint16_t subframes = 0;
    std::vector<std::uint8_t> bucket_of;  // which code is on at subframe n

    bool on(unsigned j, unsigned n) const { return bucket_of[n] == j; }
    unsigned ones(unsigned j) const;
};

CodedMasks make_masks(std::uint16_t buckets, std::uint16_t subframes, std::uint64_t seed,
                      MaskBalance balance = MaskBalance::exact);

// Masks of one pixel in a coded stream, derived from (mask_seed, y*W + x).
CodedMasks pixel_masks(const CameraConfig& config, std::uint32_t x, std::uint32_t y);

}  // namespace gevent
