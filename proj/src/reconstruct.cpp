#include "gevent/reconstruct.hpp"

#include <deque>
#include <numeric>

#include "gevent/error.hpp"
#include "gevent/masks.hpp"
#include "internal/omp_guard.hpp"

namespace gevent {

void SegmentMap::validate_tiling() const {
    if (pixels.size() != std::size_t{width} * height) fail(Errc::malformed_stream, "segment map: wrong pixel count");
    for (const auto& segs : pixels) {
        std::uint32_t at = 0;
        for (const Segment& s : segs) {
            if (s.start != at) fail(Errc::malformed_stream, s.start > at ? "segment gap" : "segment overlap");
            if (s.end <= s.start) fail(Errc::malformed_stream, "empty segment");
            at = s.end;
        }
        if (at != frames) fail(Errc::malformed_stream, "segments do not reach the end of the clip");
    }
}

SegmentMap backtrack(const EventStream& stream, BacktrackOptions options) {
    validate_stream(stream);
    const CameraConfig& c = stream.config;
    const unsigned qb = c.quant_bits;
    const auto value = [&](double v) { return options.dequantize ? requantize(v, qb) : v; };
    const std::uint32_t uf = c.unit_frames(), ux = c.units_x();

    SegmentMap map(c.width, c.height, c.frames);
    std::vector<std::uint32_t> next(std::size_t{ux} * c.units_y(), 0);  // next uncovered native unit
    for (const EventPacket& p : stream.packets) {
        std::uint32_t& from = next[std::size_t{p.y} * ux + p.x];
        if (p.t < from) fail(Errc::malformed_stream, "packet overlaps an earlier segment");
        const std::uint32_t start = from * uf, end = (p.t + 1) * uf;

        if (const auto* s = std::get_if<ScalarPayload>(&p.payload)) {
            map.at(p.x, p.y).push_back(Segment{start, end, value(s->value), {}});
        } else if (const auto* patch = std::get_if<PatchPayload>(&p.payload)) {
            const std::uint32_t ps = c.patch;
            for (std::uint32_t i = 0; i < ps; ++i)
                for (std::uint32_t j = 0; j < ps; ++j)
                    map.at(p.x * ps + j, p.y * ps + i).push_back(Segment{start, end, value(patch->values[i * ps + j]), {}});
        } else {
            const auto& coded = std::get<CodedPayload>(p.payload);
            const std::uint32_t window = p.t * uf;
            auto& segs = map.at(p.x, p.y);
            if (coded.long_value) {
                if (start == window) fail(Errc::malformed_stream, "coded long value without preceding static windows");
                segs.push_back(Segment{start, window, value(*coded.long_value), {}});
            } else if (start != window) {
                fail(Errc::malformed_stream, "coded event leaves static windows without a long value");
            }
            Segment seg{window, end, 0.0, {}};
            for (double b : coded.buckets) seg.buckets.push_back(value(b));
            seg.value = std::accumulate(seg.buckets.begin(), seg.buckets.end(), 0.0) / seg.buckets.size();
            segs.push_back(std::move(seg));
        }
        from = p.t + 1;
    }
    map.validate_tiling();
    return map;
}

SegmentMap pseudo_inverse(const SegmentMap& coded, const CameraConfig& config) {
    require(config.method == Method::coded, "pseudo_inverse: config is not a coded-exposure config");
    require(coded.width == config.width && coded.height == config.height && coded.frames == config.frames,
            "pseudo_inverse: segment map does not match the config");
    config.validate();
    const std::uint32_t N = config.subframes, J = config.buckets, sub_len = config.t_code / N;

    SegmentMap out(coded.width, coded.height, coded.frames);
    detail::ExceptionSlot error;
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(coded.pixels.size()); ++i) error.run([&] {
        const auto x = static_cast<std::uint32_t>(i % coded.width), y = static_cast<std::uint32_t>(i / coded.width);
        const CodedMasks masks = pixel_masks(config, x, y);
        std::vector<double> ones(J);
        for (unsigned j = 0; j < J; ++j) ones[j] = masks.ones(j);
        auto& dst = out.pixels[i];
        for (const Segment& s : coded.pixels[i]) {
            if (s.buckets.empty()) {
                dst.push_back(s);
                continue;
            }
            if (s.buckets.size() != J || s.end - s.start != config.t_code)
                fail(Errc::malformed_stream, "pseudo_inverse: coded window shape mismatch");
            // Y(n) = sum_j Sigma^j C^j(n) / |C^j|, Sigma^j = bucket mean * |C^j|
            for (std::uint32_t n = 0; n < N; ++n) {
                double y_n = 0.0;
                for (unsigned j = 0; j < J; ++j)
                    if (masks.on(j, n)) y_n += s.buckets[j] * ones[j] / ones[j];
                dst.push_back(Segment{s.start + n * sub_len, s.start + (n + 1) * sub_len, y_n, {}});
            }
        }
    });
    error.rethrow();
    return out;
}

BacktrackedCube sample_uniform(const SegmentMap& segments, std::uint32_t stride, bool provenance) {
    require(stride >= 1, "sample_uniform: stride must be >= 1");
    BacktrackedCube out;
    out.width = segments.width;
    out.height = segments.height;
    for (std::uint32_t t = 0; t < segments.frames; t += stride) out.sample_times.push_back(t);
    const std::size_t P = out.pixels(), S = out.samples();
    out.values.assign(S * P, 0.0);
    if (provenance) {
        out.segment_start.assign(S * P, 0);
        out.segment_end.assign(S * P, 0);
    }
    detail::ExceptionSlot error;
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(P); ++i) error.run([&] {
        const auto& segs = segments.pixels[i];
        std::size_t k = 0;
        for (std::size_t s = 0; s < S; ++s) {
            const std::uint32_t t = out.sample_times[s];
            while (k < segs.size() && segs[k].end <= t) ++k;
            if (k == segs.size() || segs[k].start > t) fail(Errc::malformed_stream, "sample time not covered");
            out.values[s * P + i] = segs[k].value;
            if (provenance) {
                out.segment_start[s * P + i] = segs[k].start;
                out.segment_end[s * P + i] = segs[k].end;
            }
        }
    });
    error.rethrow();
    return out;
}

BacktrackedCube inpaint_hot(const BacktrackedCube& cube, const HotPixelMask& mask) {
    require(mask.width == cube.width && mask.height == cube.height, "inpaint: mask size does not match the video");
    require(mask.count() < cube.pixels(), "inpaint: every pixel is hot");
    BacktrackedCube out = cube;
    const std::int64_t W = cube.width, H = cube.height;
    const std::int64_t dx[4] = {0, -1, 1, 0}, dy[4] = {-1, 0, 0, 1};  // up, left, right, down
    std::vector<std::uint8_t> seen(cube.pixels());
    for (std::int64_t y = 0; y < H; ++y)
        for (std::int64_t x = 0; x < W; ++x) {
            if (!mask.is_hot(static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y))) continue;
            std::fill(seen.begin(), seen.end(), 0);
            std::deque<std::pair<std::int64_t, std::int64_t>> queue{{x, y}};
            seen[y * W + x] = 1;
            std::int64_t src = -1;
            while (!queue.empty() && src < 0) {
                const auto [cx, cy] = queue.front();
                queue.pop_front();
                for (int d = 0; d < 4 && src < 0; ++d) {
                    const std::int64_t nx = cx + dx[d], ny = cy + dy[d];
                    if (nx < 0 || ny < 0 || nx >= W || ny >= H || seen[ny * W + nx]) continue;
                    seen[ny * W + nx] = 1;
                    if (!mask.is_hot(static_cast<std::uint32_t>(nx), static_cast<std::uint32_t>(ny)))
                        src = ny * W + nx;
                    else
                        queue.emplace_back(nx, ny);
                }
            }
            const std::size_t dst = static_cast<std::size_t>(y * W + x);
            for (std::size_t s = 0; s < cube.samples(); ++s) {
                out.values[s * cube.pixels() + dst] = cube.values[s * cube.pixels() + src];
                if (!cube.segment_start.empty()) {
                    out.segment_start[s * cube.pixels() + dst] = cube.segment_start[s * cube.pixels() + src];
                    out.segment_end[s * cube.pixels() + dst] = cube.segment_end[s * cube.pixels() + src];
                }
            }
        }
    return out;
}

BacktrackedCube decode(const EventStream& stream, std::uint32_t stride, BacktrackOptions options) {
    SegmentMap seg = backtrack(stream, options);
    if (stream.config.method == Method::coded) seg = pseudo_inverse(seg, stream.config);
    return sample_uniform(seg, stride);
}

}  // namespace gevent
