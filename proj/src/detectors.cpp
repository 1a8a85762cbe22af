#include "gevent/detectors.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <string>

#include "gevent/error.hpp"

namespace gevent {

FeatureMatrix FeatureMatrix::identity(std::size_t q) {
    require(q >= 1, "feature matrix: size must be >= 1");
    FeatureMatrix P{q, q, std::vector<double>(q * q, 0.0)};
    for (std::size_t i = 0; i < q; ++i) P.data[i * q + i] = 1.0;
    return P;
}

FeatureMatrix FeatureMatrix::parse(std::istream& in) {
    std::string tag;
    FeatureMatrix P;
    if (!(in >> tag >> P.rows >> P.cols) || tag != "P") fail(Errc::corrupt, "feature matrix: expected 'P <r> <q>' header");
    if (P.rows == 0 || P.cols == 0 || P.rows > 4096 || P.cols > 4096)
        fail(Errc::corrupt, "feature matrix: bad dimensions");
    P.data.resize(P.rows * P.cols);
    for (double& v : P.data)
        if (!(in >> v)) fail(Errc::corrupt, "feature matrix: expected " + std::to_string(P.rows * P.cols) + " values");
    std::string extra;
    if (in >> extra) fail(Errc::corrupt, "feature matrix: trailing data");
    for (double v : P.data)
        if (!std::isfinite(v)) fail(Errc::corrupt, "feature matrix: non-finite entry");
    return P;
}

FeatureMatrix FeatureMatrix::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::io, "cannot open feature matrix '" + path + "'");
    return parse(in);
}

void FeatureMatrix::validate() const {
    require(rows >= 1 && cols >= 1 && data.size() == rows * cols, "feature matrix: inconsistent shape");
    for (double v : data) require(std::isfinite(v), "feature matrix: non-finite entry");
}

bool FeatureMatrix::is_identity() const {
    if (rows != cols) return false;
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            if (at(r, c) != (r == c ? 1.0 : 0.0)) return false;
    return true;
}

WilsonInterval wilson_interval(double n, double p_hat, double z) {
    require(n > 0.0, "wilson: n must be > 0");
    require(p_hat >= 0.0 && p_hat <= 1.0, "wilson: p_hat must be in [0,1]");
    require(z > 0.0, "wilson: z must be > 0");
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    WilsonInterval w;
    w.center = (p_hat + z2 / (2.0 * n)) / denom;
    w.half_width = z / denom * std::sqrt(p_hat * (1.0 - p_hat) / n + z2 / (4.0 * n * n));
    return w;
}

BayesianChangeDetector::BayesianChangeDetector(double gamma, std::uint16_t forecasters, bool renormalize)
    : gamma_(gamma), renormalize_(renormalize), nu_(forecasters), pseudo_(forecasters), alpha_(forecasters),
      beta_(forecasters), origin_(forecasters) {
    require(gamma > 0.0 && gamma < 1.0, "bayes: gamma must be in (0,1)");
    require(forecasters >= 2, "bayes: need at least 2 forecasters");
    reset(0);
}

void BayesianChangeDetector::reset(std::uint64_t origin) {
    std::fill(nu_.begin(), nu_.end(), 0.0);
    std::fill(pseudo_.begin(), pseudo_.end(), 0.0);
    std::fill(alpha_.begin(), alpha_.end(), 0.0);
    std::fill(beta_.begin(), beta_.end(), 0.0);
    std::fill(origin_.begin(), origin_.end(), 0);
    nu_[0] = pseudo_[0] = alpha_[0] = beta_[0] = 1.0;
    origin_[0] = origin;
    anchor_ = 0;
}

BayesianChangeDetector::Step BayesianChangeDetector::push(bool bit, std::uint64_t t) {
    const std::size_t K = nu_.size();
    const double x = bit ? 1.0 : 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        if (!(alpha_[k] > 0.0)) continue;  // empty slot
        const double l = (bit ? alpha_[k] : beta_[k]) / (alpha_[k] + beta_[k]);
        nu_[k] = (1.0 - gamma_) * nu_[k] * l;
        pseudo_[k] = pseudo_[k] * l;
        alpha_[k] += x;
        beta_[k] += 1.0 - x;
    }

    double total = 0.0;
    for (std::size_t k = 0; k < K; ++k) total += pseudo_[k];
    const double fresh = gamma_ * total;
    std::size_t kmin = 0;
    for (std::size_t k = 1; k < K; ++k)
        if (nu_[k] < nu_[kmin]) kmin = k;
    if (fresh > nu_[kmin]) {
        nu_[kmin] = pseudo_[kmin] = fresh;
        alpha_[kmin] = beta_[kmin] = 1.0;
        origin_[kmin] = t;
        if (static_cast<int>(kmin) == anchor_) anchor_ = -1;
    }

    std::size_t kmax = 0;
    for (std::size_t k = 1; k < K; ++k)
        if (nu_[k] > nu_[kmax]) kmax = k;

    Step step;
    step.map_origin = origin_[kmax];
    step.change = anchor_ < 0;
    if (!step.change)
        for (std::size_t k = 0; k < K; ++k)
            if (static_cast<int>(k) != anchor_ && nu_[k] > nu_[anchor_]) step.change = true;

    if (renormalize_ && !step.change) {
        const double s = nu_[kmax];
        for (std::size_t k = 0; k < K; ++k) {
            nu_[k] /= s;
            pseudo_[k] /= s;
        }
    }
    return step;
}

EventStream encode(const PhotonCube& cube, const CameraConfig& config, const FeatureMatrix* P) {
    require(config.width == cube.width() && config.height == cube.height() && config.frames == cube.frames(),
            "encode: config dimensions do not match the cube");
    config.validate();
    EventStream s;
    switch (config.method) {
    case Method::dvs: s = run_dvs_baseline(cube, config.tau, config.gamma_ema); break;
    case Method::ema: s = run_adaptive_ema(cube, config.tau, config.gamma_ema, config.warmup); break;
    case Method::bayes: s = run_bayesian(cube, config.gamma_bayes, config.forecasters); break;
    case Method::chunk: {
        const FeatureMatrix I = FeatureMatrix::identity(std::size_t{config.patch} * config.patch);
        s = run_chunk(cube, config.tau, config.chunk_size, config.patch, P ? *P : I);
        break;
    }
    case Method::coded:
        s = run_coded(cube, config.t_code, config.buckets, config.subframes, config.z, config.mask_seed);
        break;
    }
    s.config.quant_bits = config.quant_bits;
    return s;
}

}  // namespace gevent
