#include "gevent/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "gevent/error.hpp"

namespace gevent {

double to_linear(double p_hat, const SpadCalibration& cal) {
    if (std::isnan(p_hat)) fail(Errc::numeric, "to_linear: NaN input");
    const double p = std::clamp(p_hat, 0.0, kMaxDetectionProbability);
    return (-std::log1p(-p) - cal.dark) / cal.alpha;
}

double psnr(const BacktrackedCube& recon, const FluxVideo& truth, const SpadCalibration& cal,
            std::uint32_t frames_per_video_frame, PeakMode peak) {
    truth.validate();
    cal.validate();
    require(frames_per_video_frame >= 1, "psnr: frames_per_video_frame must be >= 1");
    if (recon.width != truth.width || recon.height != truth.height)
        fail(Errc::dimension_mismatch, "psnr: reconstruction and truth sizes differ");
    require(recon.samples() > 0, "psnr: no samples");
    const std::size_t P = recon.pixels();

    double sq = 0.0;
    for (std::size_t s = 0; s < recon.samples(); ++s) {
        const std::size_t f = recon.sample_times[s] / frames_per_video_frame;
        if (f >= truth.frame_count()) fail(Errc::dimension_mismatch, "psnr: sample time beyond the truth video");
        const auto g = truth.frame(f);
        const auto r = recon.frame(s);
        for (std::size_t i = 0; i < P; ++i) {
            const double d = to_linear(r[i], cal) - g[i];
            sq += d * d;
        }
    }
    const double mse = sq / static_cast<double>(recon.samples() * P);
    const double top = peak == PeakMode::unit ? 1.0 : *std::max_element(truth.data.begin(), truth.data.end());
    if (!(top > 0.0)) fail(Errc::numeric, "psnr: peak of the truth video is zero");
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(top * top / mse);
}

std::vector<RateDistortionPoint> sweep(const SweepSpec& spec) {
    require(spec.cube && spec.truth, "sweep: cube and truth are required");
    require(!spec.grid.empty(), "sweep: empty parameter grid");
    require(std::is_sorted(spec.grid.begin(), spec.grid.end()), "sweep: grid must be sorted ascending");
    std::vector<RateDistortionPoint> points;
    for (double v : spec.grid) {
        RateDistortionPoint pt;
        pt.param_value = v;
        try {
            CameraConfig c = spec.base;
            set_sensitivity(c, v);
            const EventStream stream = encode(*spec.cube, c, spec.P.data.empty() ? nullptr : &spec.P);
            const ReadoutReport r = readout_report(stream, spec.cube->duration_s());
            pt.bits_total = r.total_bits;
            pt.bps_per_pixel = r.bits_per_pixel_per_second;
            pt.compression = r.compression_vs_raw;
            pt.psnr_db = psnr(decode(stream, spec.stride), *spec.truth, spec.cube->calibration(),
                              spec.frames_per_video_frame, spec.peak);
        } catch (const Error& e) {
            pt.failed = true;
            pt.error = e.what();
        }
        points.push_back(std::move(pt));
    }
    return points;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void write_sweep_csv(std::ostream& out, const std::vector<RateDistortionPoint>& points) {
    out << "param,bits_total,bps_per_pixel,compression,psnr_db\n";
    for (const auto& p : points) {
        out << format_number(p.param_value) << ',';
        if (p.failed)
            out << "nan,nan,nan,nan\n";
        else
            out << p.bits_total << ',' << format_number(p.bps_per_pixel) << ',' << format_number(p.compression) << ','
                << format_number(p.psnr_db) << '\n';
    }
}

}  // namespace gevent
