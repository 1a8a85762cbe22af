#pragma once

// Generalized event cameras: per-pixel or per-patch streaming state
// machines that turn a PhotonCube into an EventStream.
//
// The functions in this header are the OpenMP kernels. Literal serial
// versions live in gevent/reference.hpp and must produce identical streams.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gevent/event_model.hpp"
#include "gevent/masks.hpp"
#include "gevent/photon_sim.hpp"
#include "gevent/reconstruct.hpp"

namespace gevent {

// r x q feature matrix for the chunk detector, row-major.
struct FeatureMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    static FeatureMatrix identity(std::size_t q);
    // Text format: "P <r> <q>" then r lines of q reals.
    static FeatureMatrix parse(std::istream& in);
    static FeatureMatrix load(const std::string& path);
    void validate() const;
    bool is_identity() const;
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

// Polarity events on an EMA of the bit stream (value 1 = positive, 0 =
// negative); the terminal flush carries the final EMA level.
EventStream run_dvs_baseline(const PhotonCube& cube, double tau, double gamma_ema);

EventStream run_adaptive_ema(const PhotonCube& cube, double tau, double gamma_ema, std::uint32_t warmup);

EventStream run_bayesian(const PhotonCube& cube, double gamma, std::uint16_t forecasters);

EventStream run_chunk(const PhotonCube& cube, double tau, std::uint16_t chunk_size, std::uint16_t patch,
                      const FeatureMatrix& P);

// Branch-free event generation + backtracking for the chunk detector. Returns
// backtracked values sampled at every chunk start (stride = chunk_size),
// without quantization. Exists as an equivalence oracle for run_chunk.
BacktrackedCube run_chunk_autodiff_reference(const PhotonCube& cube, double tau, std::uint16_t chunk_size,
                                             std::uint16_t patch, const FeatureMatrix& P);

EventStream run_coded(const PhotonCube& cube, std::uint16_t t_code, std::uint16_t buckets, std::uint16_t subframes,
                      double z, std::uint64_t mask_seed);

// Dispatch on config.method. P is only used by the chunk method (identity if null).
EventStream encode(const PhotonCube& cube, const CameraConfig& config, const FeatureMatrix* P = nullptr);

struct WilsonInterval {
    double center = 0.0;
    double half_width = 0.0;
    double lower() const { return center - half_width; }
    double upper() const { return center + half_width; }
    // Allows 1e-12 of rounding so a proportion of 0 or 1 is inside its own interval.
    bool contains(double p) const { return p >= lower() - 1e-12 && p <= upper() + 1e-12; }
};

// Wilson score interval for n trials around proportion p_hat at z standard deviations.
WilsonInterval wilson_interval(double n, double p_hat, double z);

// Restarted Beta-Bernoulli change detector for one pixel with top-K pruning.
// Shared by the serial reference and the detect1d tool.
class BayesianChangeDetector {
public:
    BayesianChangeDetector(double gamma, std::uint16_t forecasters, bool renormalize = true);

    struct Step {
        bool change = false;
        std::uint64_t map_origin = 0;  // origin of the most probable forecaster (before any reset)
    };

    // Consumes the bit observed at time t.
    Step push(bool bit, std::uint64_t t);
    void reset(std::uint64_t origin);

    std::size_t size() const { return nu_.size(); }
    double weight(std::size_t k) const { return nu_[k]; }
    double pseudo(std::size_t k) const { return pseudo_[k]; }
    double alpha(std::size_t k) const { return alpha_[k]; }
    double beta(std::size_t k) const { return beta_[k]; }
    std::uint64_t origin(std::size_t k) const { return origin_[k]; }

private:
    double gamma_;
    bool renormalize_;
    int anchor_ = 0;
    std::vector<double> nu_, pseudo_, alpha_, beta_;
    std::vector<std::uint64_t> origin_;
};

}  // namespace gevent
