#pragma once

#include "rescale/core.hpp"

#include <vector>

// Pose-gated two-view triangulation. Frame conventions: a Correspondence
// links pixel (u1, v1) in frame A (the earlier image) to (u2, v2) in frame B
// (the target image); `rel` maps frame-A coordinates into frame B,
// X_B = R * X_A + t. Triangulated points are returned in frame-B coordinates.

namespace rescale::sfm {

class EmptyResultError : public Error {
public:
    using Error::Error;
};

struct Correspondence {
    double u1 = 0.0, v1 = 0.0; // frame A
    double u2 = 0.0, v2 = 0.0; // frame B
    double score = 0.0;        // optional match confidence
};

enum class GateMode {
    TranslationOnly,
    TranslationOrRotation,
    TranslationAndRotation,
};

struct GateConfig {
    double min_translation_m = 1.5;
    double rotation_threshold_deg = 5.0;
    GateMode mode = GateMode::TranslationOnly;

    void validate() const;
};

// Whether the relative motion is large enough for reliable triangulation.
bool gate_pair(const RigidPose& rel, const GateConfig& cfg);

struct TriangulationConfig {
    double max_reprojection_px = 2.0;
    double min_parallax_deg = 1.0;
    double z_min = kDefaultZMin;
};

// Linear (DLT) triangulation of each correspondence, filtered by cheirality
// (positive depth in both frames), reprojection error in both frames, and
// parallax angle. Survivors keep input order. Throws EmptyResultError when
// nothing survives.
std::vector<Eigen::Vector3d> triangulate(const std::vector<Correspondence>& matches,
                                         const CameraIntrinsics& K, const RigidPose& rel,
                                         const TriangulationConfig& cfg = {});

// Project frame-B points onto frame B and tag them as SfM reference points.
std::vector<ReferencePoint> sfm_refpoints(const std::vector<Eigen::Vector3d>& points_b,
                                          const CameraIntrinsics& K);

// Minimal built-in detector/matcher: Harris corners + zero-mean NCC patches
// with mutual-best and ratio filtering. Production pipelines are expected to
// supply correspondence files instead.
struct MatchConfig {
    int max_corners = 500;
    double harris_k = 0.04;
    int nms_radius_px = 5;
    int patch_size = 11; // odd
    double ncc_ratio = 0.9;
    double min_response_frac = 0.01; // of the strongest corner response
};

std::vector<Correspondence> detect_and_match(const ImageU8& img_a, const ImageU8& img_b,
                                             const MatchConfig& cfg = {});

} // namespace rescale::sfm
