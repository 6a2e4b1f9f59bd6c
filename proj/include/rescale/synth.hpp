#pragma once

#include "rescale/core.hpp"
#include "rescale/sfm.hpp"

#include <cstdint>
#include <vector>

// Self-consistent synthetic scenes: a smooth metric depth map, the affine
// disparity that inverts back to it under a chosen (alpha, beta), optional
// reference-point corruption, shifted stereo pairs, and exact two-view
// correspondence sets. Deterministic for a given seed.

namespace rescale::synth {

struct SceneConfig {
    int width = 96;
    int height = 64;
    double min_depth_m = 2.0;
    double max_depth_m = 10.0;
    double alpha = 1.5;
    double beta = 0.05;
    uint64_t seed = 0;
};

// Smooth random depth surface inside [min_depth_m, max_depth_m], all valid.
RasterMap make_depth_map(const SceneConfig& cfg);

// d = (1/D - beta) / alpha per pixel; invalid pixels carry over.
RasterMap make_disparity(const RasterMap& gt_depth, double alpha, double beta);

struct CorruptionConfig {
    double outlier_fraction = 0.0; // points whose depth becomes junk
    double junk_min_depth_m = 0.3;
    double junk_max_depth_m = 3.0;
    double noise_sigma = 0.0; // relative Gaussian noise on inlier 1/depth
    uint64_t seed = 0;
};

// Replaces a seeded fraction of the points with junk depths and applies
// multiplicative noise to the rest.
std::vector<ReferencePoint> corrupt_refpoints(std::vector<ReferencePoint> points,
                                              const CorruptionConfig& cfg);

// Uniform random texture, useful as a stereo matching target.
ImageU8 make_textured_image(int width, int height, uint64_t seed);

// Right view of a fronto-parallel scene: right(x) = left(x + d0). The band
// that leaves the image is filled with fresh noise.
ImageU8 shift_image(const ImageU8& left, int d0, uint64_t seed);

struct TwoViewScene {
    std::vector<Eigen::Vector3d> points_b; // ground truth, frame B
    std::vector<sfm::Correspondence> matches;
    RigidPose rel; // frame A -> frame B
};

// Random points in the shared frustum with exact projections in both frames.
TwoViewScene make_two_view(const CameraIntrinsics& K, int n_points, double min_depth_m,
                           double max_depth_m, const RigidPose& rel, uint64_t seed);

} // namespace rescale::synth
