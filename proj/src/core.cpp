#include "rescale/core.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>

namespace rescale {

void CameraIntrinsics::validate() const {
    if (width <= 0 || height <= 0)
        throw InvalidConfigError("intrinsics: image size must be positive");
    if (!(fx > 0.0) || !(fy > 0.0))
        throw InvalidConfigError("intrinsics: focal lengths must be positive");
    if (!(cx >= 0.0 && cx < width) || !(cy >= 0.0 && cy < height))
        throw InvalidConfigError("intrinsics: principal point outside the image");
}

void RigidPose::validate(double tol) const {
    const Eigen::Matrix3d delta = rotation.transpose() * rotation - Eigen::Matrix3d::Identity();
    if (delta.cwiseAbs().maxCoeff() > tol)
        throw InvalidConfigError("pose: rotation is not orthonormal");
    if (std::abs(rotation.determinant() - 1.0) > tol)
        throw InvalidConfigError("pose: rotation determinant is not +1");
    if (!translation.allFinite())
        throw InvalidConfigError("pose: translation is not finite");
}

const char* to_string(MapKind kind) {
    switch (kind) {
    case MapKind::AffineDisparity: return "affine_disparity";
    case MapKind::MetricDepth: return "metric_depth";
    case MapKind::MetricInverseDepth: return "metric_inverse_depth";
    }
    return "unknown";
}

int64_t RasterMap::valid_count() const {
    int64_t n = 0;
    for (uint8_t v : valid_)
        n += v != 0;
    return n;
}

void RasterMap::validate() const {
    for (size_t i = 0; i < values_.size(); ++i) {
        if (!valid_[i])
            continue;
        const float v = values_[i];
        if (!std::isfinite(v))
            throw Error("raster: valid pixel holds a non-finite value");
        if (kind_ == MapKind::MetricDepth && !(v > 0.0f))
            throw Error("raster: metric depth must be positive");
        if (kind_ == MapKind::MetricInverseDepth && !(v >= 0.0f))
            throw Error("raster: metric inverse depth must be non-negative");
    }
}

uint8_t ImageU8::at_clamped(int x, int y) const {
    x = std::clamp(x, 0, width - 1);
    y = std::clamp(y, 0, height - 1);
    return at(x, y);
}

ImageU8 rgb_to_gray(int width, int height, std::span<const uint8_t> rgb_interleaved) {
    if (rgb_interleaved.size() != static_cast<size_t>(width) * height * 3)
        throw InvalidConfigError("rgb_to_gray: buffer size does not match dimensions");
    ImageU8 out(width, height);
    for (size_t i = 0; i < out.pixels.size(); ++i) {
        const double r = rgb_interleaved[3 * i + 0];
        const double g = rgb_interleaved[3 * i + 1];
        const double b = rgb_interleaved[3 * i + 2];
        const double luma = 0.299 * r + 0.587 * g + 0.114 * b;
        out.pixels[i] = static_cast<uint8_t>(std::clamp(std::lround(luma), 0L, 255L));
    }
    return out;
}

const char* to_string(PointSource source) {
    switch (source) {
    case PointSource::LidarSim: return "lidar_sim";
    case PointSource::Stereo: return "stereo";
    case PointSource::Sfm: return "sfm";
    case PointSource::External: return "external";
    }
    return "unknown";
}

std::optional<PointSource> point_source_from_string(const std::string& tag) {
    if (tag == "lidar_sim") return PointSource::LidarSim;
    if (tag == "stereo") return PointSource::Stereo;
    if (tag == "sfm") return PointSource::Sfm;
    if (tag == "external") return PointSource::External;
    return std::nullopt;
}

std::vector<ProjectedPoint> project_points(std::span<const Eigen::Vector3d> points,
                                           const CameraIntrinsics& K, double z_min) {
    std::vector<ProjectedPoint> out;
    out.reserve(points.size());
    for (const Eigen::Vector3d& p : points) {
        if (!(p.z() > z_min))
            continue;
        const double u = K.fx * p.x() / p.z() + K.cx;
        const double v = K.fy * p.y() / p.z() + K.cy;
        if (u < 0.0 || u > K.width - 1 || v < 0.0 || v > K.height - 1)
            continue;
        out.push_back({u, v, p.z()});
    }
    return out;
}

Eigen::Vector3d backproject(double u, double v, double depth, const CameraIntrinsics& K) {
    return {(u - K.cx) / K.fx * depth, (v - K.cy) / K.fy * depth, depth};
}

std::optional<double> bilinear_sample(const RasterMap& map, double u, double v) {
    if (u < 0.0 || u > map.width() - 1 || v < 0.0 || v > map.height() - 1)
        throw OutOfBoundsError("bilinear_sample: coordinates outside the grid");

    const int x0 = static_cast<int>(std::floor(u));
    const int y0 = static_cast<int>(std::floor(v));
    const int x1 = std::min(x0 + 1, map.width() - 1);
    const int y1 = std::min(y0 + 1, map.height() - 1);
    const double ax = u - x0;
    const double ay = v - y0;

    // Conservative validity: any invalid neighbor invalidates the sample.
    if (!map.is_valid(x0, y0) || !map.is_valid(x1, y0) ||
        !map.is_valid(x0, y1) || !map.is_valid(x1, y1))
        return std::nullopt;

    const double v00 = map.value(x0, y0);
    const double v10 = map.value(x1, y0);
    const double v01 = map.value(x0, y1);
    const double v11 = map.value(x1, y1);
    return v00 * (1.0 - ax) * (1.0 - ay) + v10 * ax * (1.0 - ay) +
           v01 * (1.0 - ax) * ay + v11 * ax * ay;
}

RigidPose compose_pose(const RigidPose& a, const RigidPose& b) {
    RigidPose out;
    out.rotation = a.rotation * b.rotation;
    out.translation = a.rotation * b.translation + a.translation;
    return out;
}

RigidPose invert_pose(const RigidPose& p) {
    RigidPose out;
    out.rotation = p.rotation.transpose();
    out.translation = -(p.rotation.transpose() * p.translation);
    return out;
}

Eigen::Vector3d transform_point(const RigidPose& p, const Eigen::Vector3d& x) {
    return p.rotation * x + p.translation;
}

double rotation_angle_deg(const RigidPose& p) {
    const double c = std::clamp((p.rotation.trace() - 1.0) / 2.0, -1.0, 1.0);
    return std::acos(c) * 180.0 / M_PI;
}

double translation_norm_m(const RigidPose& p) {
    return p.translation.norm();
}

} // namespace rescale
