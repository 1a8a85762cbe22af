#include <doctest.h>
#include <omp.h>

#include "gevent/philox.hpp"
#include "gevent/reference.hpp"
#include "helpers.hpp"

using namespace gevent;

namespace {

struct ThreadScope {
    int saved = omp_get_max_threads();
    explicit ThreadScope(int n) { omp_set_num_threads(n); }
    ~ThreadScope() { omp_set_num_threads(saved); }
};

FeatureMatrix random_features(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    FeatureMatrix P{rows, cols, {}};
    for (std::size_t i = 0; i < rows * cols; ++i)
        P.data.push_back(philox_uniform(philox4x32({static_cast<std::uint32_t>(i), 0, 0, 0}, philox_key(seed))) - 0.5);
    return P;
}

}  // namespace

TEST_SUITE("equivalence") {
TEST_CASE("OpenMP kernels match the serial references for every thread count") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const PhotonCube c = testing::moving_block_cube(40, 24, 4096, seed);
        for (Method m : {Method::dvs, Method::ema, Method::bayes, Method::chunk, Method::coded}) {
            CAPTURE(method_name(m));
            CAPTURE(seed);
            CameraConfig cfg = default_config(m, 40, 24, 4096);
            if (m == Method::chunk) cfg.tau = 4.0;
            if (m == Method::coded) cfg.mask_seed = seed;
            const EventStream ref = reference::encode(c, cfg);
            CHECK(ref.packets.size() > 960);
            for (int threads : {1, 2, 5}) {
                ThreadScope scope(threads);
                CHECK(encode(c, cfg) == ref);
            }
        }
    }
}

TEST_CASE("non-identity feature matrices match the reference") {
    const PhotonCube c = testing::moving_block_cube(16, 16, 2048, 9);
    const FeatureMatrix P = random_features(6, 16, 4);
    CameraConfig cfg = default_config(Method::chunk, 16, 16, 2048);
    cfg.tau = 2.0;
    const EventStream ref = reference::encode(c, cfg, &P);
    CHECK(ref.packets.size() > 16);
    CHECK(encode(c, cfg, &P) == ref);
}

TEST_CASE("branch-free chunk backtracking equals the event path") {
    for (std::uint64_t seed : {4u, 5u}) {
        const PhotonCube c = testing::moving_block_cube(16, 16, 4096, seed);
        for (double tau : {3.0, 7.0}) {
            for (const FeatureMatrix& P : {FeatureMatrix::identity(16), random_features(5, 16, seed)}) {
                const EventStream s = run_chunk(c, tau, 32, 4, P);
                const BacktrackedCube path = decode(s, 32, BacktrackOptions{false});
                const BacktrackedCube diff = run_chunk_autodiff_reference(c, tau, 32, 4, P);
                CHECK(diff.sample_times == path.sample_times);
                CHECK(diff.values == path.values);
            }
        }
    }
}

TEST_CASE("odd cube shapes") {
    const PhotonCube c = testing::moving_block_cube(13, 7, 2048, 21, 0.3, 0.8, 8, 0.5, 4);
    for (Method m : {Method::dvs, Method::ema, Method::bayes, Method::coded}) {
        const CameraConfig cfg = default_config(m, 13, 7, 2048);
        ThreadScope scope(3);
        CHECK(encode(c, cfg) == reference::encode(c, cfg));
    }
}
}
