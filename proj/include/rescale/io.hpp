#pragma once

#include "rescale/core.hpp"
#include "rescale/rescale.hpp"
#include "rescale/sfm.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

// File formats:
//   depth PNG16   16-bit grayscale, depth = raw / divisor meters, raw 0 invalid
//   PFM           "Pf" grayscale float, rows bottom-up, scale sign = endianness,
//                 non-finite (and non-positive metric depth) pixels invalid
//   npy           2-D little-endian float32, C order, format version 1.0 only
//   intrinsics    key:value lines fx, fy, cx, cy, size (width height)
//   poses         one 3x4 (or homogeneous 4x4) row-major matrix per line
//   matches       "u1 v1 u2 v2 [score]" per line
//   refpoints     "u v depth source weight" per line
//   manifest      key:value header plus [record] blocks, paths relative to it

namespace rescale::io {

class IoError : public Error {
public:
    using Error::Error;
};

class UnsupportedFormatError : public IoError {
public:
    using IoError::IoError;
};

RasterMap load_depth_png16(const std::filesystem::path& path, double scale_divisor = 256.0);
void save_depth_png16(const RasterMap& map, const std::filesystem::path& path,
                      double scale_divisor = 256.0);

// Disparity as fixed-point PNG16 (x256); 0 marks invalid.
void save_disparity_png16(const RasterMap& map, const std::filesystem::path& path);

RasterMap load_pfm(const std::filesystem::path& path, MapKind kind);
void save_pfm(const RasterMap& map, const std::filesystem::path& path);

RasterMap load_npy_f32(const std::filesystem::path& path, MapKind kind);

// 8-bit grayscale or RGB PNG; RGB is converted via the fixed luma weights.
ImageU8 load_image_png(const std::filesystem::path& path);
void save_image_png(const ImageU8& img, const std::filesystem::path& path);

CameraIntrinsics load_intrinsics(const std::filesystem::path& path);
void save_intrinsics(const CameraIntrinsics& K, const std::filesystem::path& path);

std::vector<RigidPose> load_poses(const std::filesystem::path& path);
void save_poses(const std::vector<RigidPose>& poses, const std::filesystem::path& path);

std::vector<sfm::Correspondence> load_matches(const std::filesystem::path& path);
void save_matches(const std::vector<sfm::Correspondence>& matches,
                  const std::filesystem::path& path);

std::vector<ReferencePoint> load_refpoints(const std::filesystem::path& path);
void save_refpoints(const std::vector<ReferencePoint>& points,
                    const std::filesystem::path& path);

// Dispatch on extension: .pfm or .npy for float maps, .png for PNG16 depth.
RasterMap load_map_auto(const std::filesystem::path& path, MapKind kind);

struct ManifestRecord {
    std::string name;
    std::filesystem::path disparity_path;
    std::filesystem::path gt_depth_path;   // optional
    std::filesystem::path left_image_path; // optional
    std::filesystem::path right_image_path;
    std::filesystem::path pose_path;    // relative pose of the previous frame
    std::filesystem::path matches_path; // correspondences vs the previous frame
    std::filesystem::path refpoints_path;
    std::optional<CameraIntrinsics> intrinsics; // per-record override
};

struct DatasetManifest {
    std::string profile; // "indoor", "outdoor", or empty
    std::optional<CameraIntrinsics> intrinsics;
    std::optional<double> baseline_m;
    std::vector<ManifestRecord> records;

    const CameraIntrinsics& intrinsics_for(size_t record_index) const;
};

// Parses the manifest and checks that every referenced path exists.
DatasetManifest load_manifest(const std::filesystem::path& path);

} // namespace rescale::io
