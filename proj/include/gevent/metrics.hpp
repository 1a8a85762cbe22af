#pragma once

// Linear-domain PSNR and the rate-distortion sweep harness.

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "gevent/detectors.hpp"
#include "gevent/event_model.hpp"
#include "gevent/photon_sim.hpp"
#include "gevent/reconstruct.hpp"

namespace gevent {

inline constexpr double kMaxDetectionProbability = 1.0 - 1e-6;

// Inverts the detection response: (log(1/(1-p)) - d) / alpha, with p clamped
// to [0, 1 - 1e-6].
double to_linear(double p_hat, const SpadCalibration& cal);

enum class PeakMode {
    max_truth,  // peak = max linear truth value over the clip (default)
    unit,       // peak = 1
};

// PSNR of backtracked detection rates against the flux video, both in linear
// flux units. Sample time t is compared with the video frame containing
// binary frame t (t / frames_per_video_frame). Returns +inf when MSE == 0.
double psnr(const BacktrackedCube& recon, const FluxVideo& truth, const SpadCalibration& cal,
            std::uint32_t frames_per_video_frame, PeakMode peak = PeakMode::max_truth);

struct RateDistortionPoint {
    double param_value = 0.0;
    std::uint64_t bits_total = 0;
    double bps_per_pixel = 0.0;
    double psnr_db = 0.0;
    double compression = 0.0;
    bool failed = false;
    std::string error;
};

struct SweepSpec {
    CameraConfig base;               // method + all non-swept parameters
    std::vector<double> grid;        // sensitivity values, sorted ascending
    const PhotonCube* cube = nullptr;
    const FluxVideo* truth = nullptr;
    std::uint32_t stride = 32;
    std::uint32_t frames_per_video_frame = kDefaultFramesPerVideoFrame;
    FeatureMatrix P;                 // chunk method only; empty = identity
    PeakMode peak = PeakMode::max_truth;
};

// One point per grid value, in grid order. A failing point is marked and the
// sweep continues.
std::vector<RateDistortionPoint> sweep(const SweepSpec& spec);

// CSV: param,bits_total,bps_per_pixel,compression,psnr_db (LF, '.' decimal).
void write_sweep_csv(std::ostream& out, const std::vector<RateDistortionPoint>& points);
std::string format_number(double v);

}  // namespace gevent
