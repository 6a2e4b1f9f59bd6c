#pragma once

#include <Eigen/Core>

#include <cassert>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

// Image coordinate convention used throughout: pixel centers sit at integer
// coordinates, the origin is the top-left pixel, u runs along the width and
// v along the height. Every provider and sampler in this project follows it.

namespace rescale {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class OutOfBoundsError : public Error {
public:
    using Error::Error;
};

class InvalidConfigError : public Error {
public:
    using Error::Error;
};

struct CameraIntrinsics {
    double fx = 0.0;
    double fy = 0.0;
    double cx = 0.0;
    double cy = 0.0;
    int width = 0;
    int height = 0;

    // fx > 0, fy > 0, 0 <= cx < width, 0 <= cy < height
    void validate() const;
};

// SE(3) transform. rotation must be orthonormal with det +1 (within 1e-9);
// loaders re-orthonormalize small numeric drift before constructing one.
struct RigidPose {
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Eigen::Vector3d translation = Eigen::Vector3d::Zero();

    void validate(double tol = 1e-9) const;
};

enum class MapKind : uint8_t {
    AffineDisparity,    // unitless, correct up to an affine transform
    MetricDepth,        // meters, valid values > 0
    MetricInverseDepth, // 1/m, valid values >= 0
};

const char* to_string(MapKind kind);

// Dense H x W scalar grid with a per-pixel validity mask.
class RasterMap {
public:
    RasterMap() = default;
    RasterMap(int width, int height, MapKind kind)
        : width_(width), height_(height), kind_(kind),
          values_(static_cast<size_t>(width) * height, 0.0f),
          valid_(static_cast<size_t>(width) * height, 0) {
        if (width <= 0 || height <= 0)
            throw InvalidConfigError("RasterMap dimensions must be positive");
    }

    int width() const { return width_; }
    int height() const { return height_; }
    MapKind kind() const { return kind_; }
    void set_kind(MapKind kind) { kind_ = kind; }

    size_t index(int x, int y) const {
        assert(x >= 0 && x < width_ && y >= 0 && y < height_);
        return static_cast<size_t>(y) * width_ + x;
    }

    float value(int x, int y) const { return values_[index(x, y)]; }
    bool is_valid(int x, int y) const { return valid_[index(x, y)] != 0; }

    void set(int x, int y, float v) {
        const size_t i = index(x, y);
        values_[i] = v;
        valid_[i] = 1;
    }
    void set_invalid(int x, int y) { valid_[index(x, y)] = 0; }

    std::span<const float> values() const { return values_; }
    std::span<const uint8_t> valid() const { return valid_; }
    std::span<float> values() { return values_; }
    std::span<uint8_t> valid() { return valid_; }

    const float* row_values(int y) const { return values_.data() + static_cast<size_t>(y) * width_; }
    const uint8_t* row_valid(int y) const { return valid_.data() + static_cast<size_t>(y) * width_; }
    float* row_values(int y) { return values_.data() + static_cast<size_t>(y) * width_; }
    uint8_t* row_valid(int y) { return valid_.data() + static_cast<size_t>(y) * width_; }

    int64_t valid_count() const;

    // Enforces the per-kind value invariants (MetricDepth > 0, inverse >= 0).
    void validate() const;

private:
    int width_ = 0;
    int height_ = 0;
    MapKind kind_ = MapKind::AffineDisparity;
    std::vector<float> values_;
    std::vector<uint8_t> valid_;
};

// 8-bit grayscale image, row-major.
struct ImageU8 {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> pixels;

    ImageU8() = default;
    ImageU8(int w, int h) : width(w), height(h), pixels(static_cast<size_t>(w) * h, 0) {}

    uint8_t at(int x, int y) const { return pixels[static_cast<size_t>(y) * width + x]; }
    uint8_t& at(int x, int y) { return pixels[static_cast<size_t>(y) * width + x]; }
    uint8_t at_clamped(int x, int y) const;
};

// luma = 0.299 R + 0.587 G + 0.114 B, rounded to nearest
ImageU8 rgb_to_gray(int width, int height, std::span<const uint8_t> rgb_interleaved);

enum class PointSource : uint8_t { LidarSim, Stereo, Sfm, External };

const char* to_string(PointSource source);
std::optional<PointSource> point_source_from_string(const std::string& tag);

// A metric anchor: continuous pixel location + positive metric depth.
struct ReferencePoint {
    double u = 0.0;
    double v = 0.0;
    double depth = 0.0; // meters, > 0
    PointSource source = PointSource::External;
    double weight = 1.0;
};

struct ProjectedPoint {
    double u = 0.0;
    double v = 0.0;
    double depth = 0.0;
};

inline constexpr double kDefaultZMin = 1e-3; // meters; projection cutoff

// Pinhole projection of camera-frame points. Points with Z <= z_min or whose
// projection falls outside [0, W-1] x [0, H-1] are dropped; the survivors keep
// their input order.
std::vector<ProjectedPoint> project_points(std::span<const Eigen::Vector3d> points,
                                           const CameraIntrinsics& K,
                                           double z_min = kDefaultZMin);

// Inverse of project_points for a single pixel: the camera-frame point at
// depth Z seen at (u, v).
Eigen::Vector3d backproject(double u, double v, double depth, const CameraIntrinsics& K);

// Bilinear interpolation at continuous (u, v). Returns nullopt if any of the
// four surrounding grid values is invalid. Exact at integer coordinates.
// Throws OutOfBoundsError outside [0, W-1] x [0, H-1].
std::optional<double> bilinear_sample(const RasterMap& map, double u, double v);

// compose_pose(a, b) applies b first, then a: x -> a(b(x)).
RigidPose compose_pose(const RigidPose& a, const RigidPose& b);
RigidPose invert_pose(const RigidPose& p);
Eigen::Vector3d transform_point(const RigidPose& p, const Eigen::Vector3d& x);

// acos((trace(R) - 1) / 2) in degrees, argument clamped to [-1, 1].
double rotation_angle_deg(const RigidPose& p);
double translation_norm_m(const RigidPose& p);

} // namespace rescale
