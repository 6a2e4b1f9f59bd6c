#pragma once

#include "rescale/core.hpp"
#include "rescale/rng.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <random>

namespace rescale::testing {

// Rodrigues formula via Eigen's angle-axis.
inline Eigen::Matrix3d axis_angle(const Eigen::Vector3d& axis, double angle_deg) {
    return Eigen::AngleAxisd(angle_deg * M_PI / 180.0, axis.normalized()).toRotationMatrix();
}

inline RigidPose make_pose(const Eigen::Vector3d& axis, double angle_deg,
                           const Eigen::Vector3d& translation) {
    RigidPose p;
    p.rotation = axis_angle(axis, angle_deg);
    p.translation = translation;
    return p;
}

inline RigidPose random_pose(std::mt19937_64& rng) {
    const Eigen::Vector3d axis(uniform_range(rng, -1.0, 1.0), uniform_range(rng, -1.0, 1.0),
                               uniform_range(rng, -1.0, 1.0));
    const double angle = uniform_range(rng, -179.0, 179.0);
    const Eigen::Vector3d t(uniform_range(rng, -5.0, 5.0), uniform_range(rng, -5.0, 5.0),
                            uniform_range(rng, -5.0, 5.0));
    return make_pose(axis.norm() > 1e-12 ? axis : Eigen::Vector3d::UnitZ(), angle, t);
}

inline CameraIntrinsics test_intrinsics(int width = 640, int height = 480, double f = 500.0) {
    CameraIntrinsics K;
    K.width = width;
    K.height = height;
    K.fx = K.fy = f;
    K.cx = (width - 1) / 2.0;
    K.cy = (height - 1) / 2.0;
    return K;
}

} // namespace rescale::testing
