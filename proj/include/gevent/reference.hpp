#pragma once

// Serial reference implementations: one unit at a time, following each
// algorithm line by line. Kept for equivalence testing and benchmarking
// against the OpenMP kernels.

#include "gevent/detectors.hpp"

namespace gevent::reference {

PhotonCube simulate_cube(const FluxVideo& video, const SpadCalibration& cal, std::uint32_t frames_per_video_frame,
                         std::uint64_t seed);

EventStream run_dvs_baseline(const PhotonCube& cube, double tau, double gamma_ema);
EventStream run_adaptive_ema(const PhotonCube& cube, double tau, double gamma_ema, std::uint32_t warmup);
EventStream run_bayesian(const PhotonCube& cube, double gamma, std::uint16_t forecasters, bool renormalize = true);
EventStream run_chunk(const PhotonCube& cube, double tau, std::uint16_t chunk_size, std::uint16_t patch,
                      const FeatureMatrix& P);
EventStream run_coded(const PhotonCube& cube, std::uint16_t t_code, std::uint16_t buckets, std::uint16_t subframes,
                      double z, std::uint64_t mask_seed);

EventStream encode(const PhotonCube& cube, const CameraConfig& config, const FeatureMatrix* P = nullptr);

}  // namespace gevent::reference
