#include "rescale/metrics.hpp"
#include "rescale/rescale.hpp"
#include "rescale/serial_ref.hpp"
#include "rescale/sgm.hpp"
#include "rescale/synth.hpp"

#include <benchmark/benchmark.h>

// Parallel kernels vs. their serial reference at a KITTI-half-ish size.
// Run with:  build/tools/bench_kernels [--benchmark_filter=...]

namespace {

using namespace rescale;

constexpr int kW = 640;
constexpr int kH = 192;
constexpr int kDisp = 64;

const ImageU8& left_image() {
    static const ImageU8 img = synth::make_textured_image(kW, kH, 7);
    return img;
}

const ImageU8& right_image() {
    static const ImageU8 img = synth::shift_image(left_image(), 9, 7);
    return img;
}

const sgm::CostVolume& raw_costs() {
    static const sgm::CostVolume cv = [] {
        const sgm::CensusMap cl = sgm::census_transform(left_image(), 5);
        const sgm::CensusMap cr = sgm::census_transform(right_image(), 5);
        return sgm::matching_cost(cl, cr, kDisp, 5);
    }();
    return cv;
}

const RasterMap& disparity_map() {
    static const RasterMap map = [] {
        synth::SceneConfig cfg;
        cfg.width = kW;
        cfg.height = kH;
        return synth::make_disparity(synth::make_depth_map(cfg), 1.5, 0.05);
    }();
    return map;
}

const RasterMap& gt_map() {
    static const RasterMap map = [] {
        synth::SceneConfig cfg;
        cfg.width = kW;
        cfg.height = kH;
        return synth::make_depth_map(cfg);
    }();
    return map;
}

void BM_census_omp(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(sgm::census_transform(left_image(), 5));
}

void BM_census_serial(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(serial::census_transform(left_image(), 5));
}

void BM_matching_cost_omp(benchmark::State& state) {
    const sgm::CensusMap cl = sgm::census_transform(left_image(), 5);
    const sgm::CensusMap cr = sgm::census_transform(right_image(), 5);
    for (auto _ : state)
        benchmark::DoNotOptimize(sgm::matching_cost(cl, cr, kDisp, 5));
}

void BM_matching_cost_serial(benchmark::State& state) {
    const sgm::CensusMap cl = sgm::census_transform(left_image(), 5);
    const sgm::CensusMap cr = sgm::census_transform(right_image(), 5);
    for (auto _ : state)
        benchmark::DoNotOptimize(serial::matching_cost(cl, cr, kDisp, 5));
}

void BM_aggregate_omp(benchmark::State& state) {
    sgm::SgmConfig cfg;
    cfg.max_disparity = kDisp;
    for (auto _ : state)
        benchmark::DoNotOptimize(sgm::sgm_aggregate(raw_costs(), cfg));
}

void BM_aggregate_serial(benchmark::State& state) {
    sgm::SgmConfig cfg;
    cfg.max_disparity = kDisp;
    for (auto _ : state)
        benchmark::DoNotOptimize(serial::sgm_aggregate(raw_costs(), cfg));
}

void BM_apply_scale_omp(benchmark::State& state) {
    AffineScale scale;
    scale.alpha = 1.5;
    scale.beta = 0.05;
    for (auto _ : state)
        benchmark::DoNotOptimize(apply_scale(disparity_map(), scale, DepthCap{}));
}

void BM_apply_scale_serial(benchmark::State& state) {
    AffineScale scale;
    scale.alpha = 1.5;
    scale.beta = 0.05;
    for (auto _ : state)
        benchmark::DoNotOptimize(serial::apply_scale(disparity_map(), scale, DepthCap{}));
}

void BM_evaluate_image_omp(benchmark::State& state) {
    AffineScale scale;
    scale.alpha = 1.5;
    scale.beta = 0.05;
    const RasterMap pred = apply_scale(disparity_map(), scale, DepthCap{});
    const metrics::EvalConfig cfg;
    for (auto _ : state)
        benchmark::DoNotOptimize(metrics::evaluate_image(pred, gt_map(), cfg));
}

void BM_evaluate_image_serial(benchmark::State& state) {
    AffineScale scale;
    scale.alpha = 1.5;
    scale.beta = 0.05;
    const RasterMap pred = apply_scale(disparity_map(), scale, DepthCap{});
    const metrics::EvalConfig cfg;
    for (auto _ : state)
        benchmark::DoNotOptimize(serial::evaluate_image(pred, gt_map(), cfg));
}

BENCHMARK(BM_census_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_census_omp)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_matching_cost_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_matching_cost_omp)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_aggregate_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_aggregate_omp)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_apply_scale_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_apply_scale_omp)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_evaluate_image_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_evaluate_image_omp)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
