#include "rescale/serial_ref.hpp"

#include "rescale/rng.hpp"
#include "rescale/synth.hpp"

#include <doctest.h>

#include <random>

// The OpenMP kernels against the serial reference. Integer kernels and
// per-pixel maps must agree bit for bit; the metric reductions to 1e-12.

using namespace rescale;

TEST_CASE("census transform: parallel equals serial") {
    for (const int window : {3, 5, 7}) {
        const ImageU8 img = synth::make_textured_image(37, 23, 90 + window);
        const sgm::CensusMap a = sgm::census_transform(img, window);
        const sgm::CensusMap b = serial::census_transform(img, window);
        CHECK(a.bits == b.bits);
    }
}

TEST_CASE("matching cost: parallel equals serial") {
    const ImageU8 left = synth::make_textured_image(41, 17, 91);
    const ImageU8 right = synth::shift_image(left, 4, 91);
    const sgm::CensusMap cl = sgm::census_transform(left, 5);
    const sgm::CensusMap cr = sgm::census_transform(right, 5);
    const sgm::CostVolume a = sgm::matching_cost(cl, cr, 12, 5);
    const sgm::CostVolume b = serial::matching_cost(cl, cr, 12, 5);
    for (int y = 0; y < 17; ++y)
        for (int x = 0; x < 41; ++x)
            for (int d = 0; d < 12; ++d)
                CHECK(a.at(x, y, d) == b.at(x, y, d));
}

TEST_CASE("aggregation: parallel equals serial across path counts") {
    std::mt19937_64 rng(92);
    sgm::CostVolume cv(19, 11, 8);
    for (int y = 0; y < 11; ++y)
        for (int x = 0; x < 19; ++x)
            for (int d = 0; d < 8; ++d)
                cv.at(x, y, d) = static_cast<uint16_t>(uniform_index(rng, 25));

    for (const int paths : {4, 8}) {
        sgm::SgmConfig cfg;
        cfg.n_paths = paths;
        const sgm::CostVolume a = sgm::sgm_aggregate(cv, cfg);
        const sgm::CostVolume b = serial::sgm_aggregate(cv, cfg);
        for (int y = 0; y < 11; ++y)
            for (int x = 0; x < 19; ++x)
                for (int d = 0; d < 8; ++d)
                    CHECK(a.at(x, y, d) == b.at(x, y, d));
    }
}

TEST_CASE("apply_scale: parallel equals serial bit for bit") {
    synth::SceneConfig scene;
    scene.width = 33;
    scene.height = 27;
    scene.seed = 93;
    RasterMap disp = synth::make_disparity(synth::make_depth_map(scene), 1.5, 0.05);
    disp.set_invalid(5, 5);
    disp.set_invalid(30, 2);

    AffineScale s;
    s.alpha = 1.5;
    s.beta = 0.05;
    const RasterMap a = apply_scale(disp, s, {0.1, 80.0});
    const RasterMap b = serial::apply_scale(disp, s, {0.1, 80.0});
    for (int y = 0; y < 27; ++y)
        for (int x = 0; x < 33; ++x) {
            CHECK(a.is_valid(x, y) == b.is_valid(x, y));
            if (a.is_valid(x, y))
                CHECK(a.value(x, y) == b.value(x, y));
        }
}

TEST_CASE("evaluate_image: parallel matches serial to 1e-12") {
    std::mt19937_64 rng(94);
    for (int trial = 0; trial < 10; ++trial) {
        RasterMap gt(23, 19, MapKind::MetricDepth);
        RasterMap pred(23, 19, MapKind::MetricDepth);
        for (int y = 0; y < 19; ++y)
            for (int x = 0; x < 23; ++x) {
                if (uniform_double(rng) > 0.1)
                    gt.set(x, y, static_cast<float>(uniform_range(rng, 0.5, 70.0)));
                pred.set(x, y, static_cast<float>(uniform_range(rng, 0.5, 70.0)));
            }
        const metrics::EvalConfig cfg;
        const metrics::ImageMetrics a = metrics::evaluate_image(pred, gt, cfg);
        const metrics::ImageMetrics b = serial::evaluate_image(pred, gt, cfg);
        CHECK(a.n_pixels == b.n_pixels);
        CHECK(std::abs(a.delta1 - b.delta1) < 1e-12);
        CHECK(std::abs(a.abs_rel - b.abs_rel) < 1e-12);
        CHECK(std::abs(a.rmse - b.rmse) < 1e-12);
        CHECK(std::abs(a.rmse_log - b.rmse_log) < 1e-12);
        CHECK(std::abs(a.log10 - b.log10) < 1e-12);
    }
}
