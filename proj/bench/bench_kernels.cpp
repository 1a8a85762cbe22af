// Serial reference vs OpenMP kernel for the simulator and each detector.
#include <benchmark/benchmark.h>

#include <cmath>

#include "gevent/reference.hpp"

using namespace gevent;

namespace {

constexpr std::uint32_t kW = 128, kH = 128, kT = 4096, kFramesPer = 8;

const FluxVideo& scene() {
    static const FluxVideo video = [] {
        SceneParams p;
        p.width = kW;
        p.height = kH;
        p.frames = kT / kFramesPer;
        p.level = 0.3;
        p.level2 = 1.0;
        p.block_size = 24;
        p.speed = 0.1;
        return synth_scene(SceneKind::moving_block, p);
    }();
    return video;
}

const PhotonCube& cube() {
    static const PhotonCube c = simulate_cube(scene(), calibrate_alpha(scene()), kFramesPer, 1);
    return c;
}

void set_rate(benchmark::State& state) {
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * kW * kH * kT);
}

void BM_SimulateSerial(benchmark::State& state) {
    const SpadCalibration cal = calibrate_alpha(scene());
    for (auto _ : state) benchmark::DoNotOptimize(reference::simulate_cube(scene(), cal, kFramesPer, 1));
    set_rate(state);
}

void BM_SimulateOmp(benchmark::State& state) {
    const SpadCalibration cal = calibrate_alpha(scene());
    for (auto _ : state) benchmark::DoNotOptimize(simulate_cube(scene(), cal, kFramesPer, 1));
    set_rate(state);
}

void BM_EncodeSerial(benchmark::State& state) {
    const CameraConfig c = default_config(static_cast<Method>(state.range(0)), kW, kH, kT);
    state.SetLabel(std::string(method_name(c.method)));
    for (auto _ : state) benchmark::DoNotOptimize(reference::encode(cube(), c));
    set_rate(state);
}

void BM_EncodeOmp(benchmark::State& state) {
    const CameraConfig c = default_config(static_cast<Method>(state.range(0)), kW, kH, kT);
    state.SetLabel(std::string(method_name(c.method)));
    for (auto _ : state) benchmark::DoNotOptimize(encode(cube(), c));
    set_rate(state);
}

void BM_ChunkAutodiff(benchmark::State& state) {
    const FeatureMatrix I = FeatureMatrix::identity(16);
    for (auto _ : state) benchmark::DoNotOptimize(run_chunk_autodiff_reference(cube(), kDefaultChunkTau, 32, 4, I));
    set_rate(state);
}

}  // namespace

BENCHMARK(BM_SimulateSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulateOmp)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EncodeSerial)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EncodeOmp)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ChunkAutodiff)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
