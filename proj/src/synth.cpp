#include "rescale/synth.hpp"

#include "rescale/rng.hpp"

#include <algorithm>
#include <cmath>

namespace rescale::synth {

RasterMap make_depth_map(const SceneConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);

    // Sum of a handful of low-frequency waves, then squashed into the range.
    struct Wave {
        double fx, fy, phase, amp;
    };
    std::vector<Wave> waves(4);
    for (Wave& w : waves) {
        w.fx = uniform_range(rng, 0.5, 2.5);
        w.fy = uniform_range(rng, 0.5, 2.5);
        w.phase = uniform_range(rng, 0.0, 2.0 * M_PI);
        w.amp = uniform_range(rng, 0.3, 1.0);
    }
    const double tilt_x = uniform_range(rng, -1.0, 1.0);
    const double tilt_y = uniform_range(rng, -1.0, 1.0);

    RasterMap map(cfg.width, cfg.height, MapKind::MetricDepth);
    const double mid = 0.5 * (cfg.min_depth_m + cfg.max_depth_m);
    const double half = 0.5 * (cfg.max_depth_m - cfg.min_depth_m);
    for (int y = 0; y < cfg.height; ++y) {
        for (int x = 0; x < cfg.width; ++x) {
            const double u = static_cast<double>(x) / cfg.width;
            const double v = static_cast<double>(y) / cfg.height;
            double s = tilt_x * (u - 0.5) + tilt_y * (v - 0.5);
            for (const Wave& w : waves)
                s += w.amp * std::sin(2.0 * M_PI * (w.fx * u + w.fy * v) + w.phase);
            // tanh keeps the surface strictly inside the range
            map.set(x, y, static_cast<float>(mid + half * 0.95 * std::tanh(s)));
        }
    }
    return map;
}

RasterMap make_disparity(const RasterMap& gt_depth, double alpha, double beta) {
    if (gt_depth.kind() != MapKind::MetricDepth)
        throw InvalidConfigError("synth: disparity must be derived from metric depth");
    RasterMap disp(gt_depth.width(), gt_depth.height(), MapKind::AffineDisparity);
    for (int y = 0; y < gt_depth.height(); ++y)
        for (int x = 0; x < gt_depth.width(); ++x) {
            if (!gt_depth.is_valid(x, y))
                continue;
            const double g = 1.0 / static_cast<double>(gt_depth.value(x, y));
            disp.set(x, y, static_cast<float>((g - beta) / alpha));
        }
    return disp;
}

std::vector<ReferencePoint> corrupt_refpoints(std::vector<ReferencePoint> points,
                                              const CorruptionConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    for (ReferencePoint& p : points) {
        if (uniform_double(rng) < cfg.outlier_fraction) {
            p.depth = uniform_range(rng, cfg.junk_min_depth_m, cfg.junk_max_depth_m);
        } else if (cfg.noise_sigma > 0.0) {
            // noise applied in inverse-depth space, where the fit happens
            const double g = (1.0 / p.depth) * (1.0 + cfg.noise_sigma * gaussian(rng));
            if (g > 1e-6)
                p.depth = 1.0 / g;
        }
    }
    return points;
}

ImageU8 make_textured_image(int width, int height, uint64_t seed) {
    std::mt19937_64 rng(seed);
    ImageU8 img(width, height);
    for (uint8_t& px : img.pixels)
        px = static_cast<uint8_t>(uniform_index(rng, 256));
    return img;
}

ImageU8 shift_image(const ImageU8& left, int d0, uint64_t seed) {
    std::mt19937_64 rng(seed ^ 0x5151515151515151ULL);
    ImageU8 right(left.width, left.height);
    for (int y = 0; y < left.height; ++y)
        for (int x = 0; x < left.width; ++x)
            right.at(x, y) = (x + d0 < left.width)
                                 ? left.at(x + d0, y)
                                 : static_cast<uint8_t>(uniform_index(rng, 256));
    return right;
}

TwoViewScene make_two_view(const CameraIntrinsics& K, int n_points, double min_depth_m,
                           double max_depth_m, const RigidPose& rel, uint64_t seed) {
    K.validate();
    std::mt19937_64 rng(seed);

    TwoViewScene scene;
    scene.rel = rel;
    const RigidPose rel_inv = invert_pose(rel);

    int guard = 0;
    while (static_cast<int>(scene.points_b.size()) < n_points && guard < n_points * 1000) {
        ++guard;
        // Sample in frame B's frustum, then require visibility in frame A.
        const double z = uniform_range(rng, min_depth_m, max_depth_m);
        const double u = uniform_range(rng, 1.0, K.width - 2.0);
        const double v = uniform_range(rng, 1.0, K.height - 2.0);
        const Eigen::Vector3d x_b = backproject(u, v, z, K);
        const Eigen::Vector3d x_a = transform_point(rel_inv, x_b);
        if (!(x_a.z() > kDefaultZMin))
            continue;
        const double u1 = K.fx * x_a.x() / x_a.z() + K.cx;
        const double v1 = K.fy * x_a.y() / x_a.z() + K.cy;
        if (u1 < 0.0 || u1 > K.width - 1 || v1 < 0.0 || v1 > K.height - 1)
            continue;
        scene.points_b.push_back(x_b);
        scene.matches.push_back({u1, v1, u, v, 1.0});
    }
    return scene;
}

} // namespace rescale::synth
