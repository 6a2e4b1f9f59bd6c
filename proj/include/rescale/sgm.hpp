#pragma once

#include "rescale/core.hpp"

#include <cstdint>
#include <vector>

// Census-based Semi-Global Matching. Costs are Hamming distances between
// census bitstrings; aggregation runs the standard per-direction recurrence
//   L_r(p,d) = C(p,d) + min(L_r(p-r,d), L_r(p-r,d+-1)+P1, min_k L_r(p-r,k)+P2)
//            - min_k L_r(p-r,k)
// summed over 4 or 8 path directions.

namespace rescale::sgm {

struct StereoRig {
    CameraIntrinsics intrinsics; // rectified, shared by both views
    double baseline_m = 0.0;

    void validate() const;
};

struct SgmConfig {
    int max_disparity = 128;
    int census_window = 5; // odd, window^2 - 1 <= 64
    int p1 = 8;
    int p2 = 96;
    int n_paths = 8; // 4 or 8
    double lr_check_max_diff = 1.0;
    bool subpixel = true;
    int min_disparity_px = 1; // reference points below this are dropped

    void validate() const;
};

// Census bitstrings, one 64-bit word per pixel.
struct CensusMap {
    int width = 0;
    int height = 0;
    std::vector<uint64_t> bits;

    uint64_t at(int x, int y) const { return bits[static_cast<size_t>(y) * width + x]; }
};

// Per-(pixel, disparity) costs, disparity fastest.
class CostVolume {
public:
    CostVolume() = default;
    CostVolume(int width, int height, int n_disp)
        : width_(width), height_(height), n_disp_(n_disp),
          costs_(static_cast<size_t>(width) * height * n_disp, 0) {}

    int width() const { return width_; }
    int height() const { return height_; }
    int n_disp() const { return n_disp_; }

    uint16_t at(int x, int y, int d) const { return costs_[index(x, y, d)]; }
    uint16_t& at(int x, int y, int d) { return costs_[index(x, y, d)]; }
    const uint16_t* ptr(int x, int y) const { return costs_.data() + index(x, y, 0); }
    uint16_t* ptr(int x, int y) { return costs_.data() + index(x, y, 0); }

    size_t index(int x, int y, int d) const {
        return (static_cast<size_t>(y) * width_ + x) * n_disp_ + d;
    }

private:
    int width_ = 0;
    int height_ = 0;
    int n_disp_ = 0;
    std::vector<uint16_t> costs_;
};

// One census bit per window neighbor (row-major order, center skipped):
// 1 iff the neighbor is darker than the center. Borders clamp coordinates.
CensusMap census_transform(const ImageU8& img, int window);

// cost(x, y, d) = Hamming(left(x, y), right(x - d, y)); shifts that leave the
// right image cost window^2 - 1 (the maximum).
CostVolume matching_cost(const CensusMap& left, const CensusMap& right, int max_disp,
                         int census_window);

// Same with the right image as base: cost(x, y, d) = Hamming(right(x,y), left(x+d,y)).
CostVolume matching_cost_right(const CensusMap& left, const CensusMap& right, int max_disp,
                               int census_window);

CostVolume sgm_aggregate(const CostVolume& cv, const SgmConfig& cfg);

// Per-pixel argmin with smallest-disparity tie-break; optional parabolic
// sub-pixel refinement from the three costs around the minimum.
RasterMap wta_disparity(const CostVolume& cv, const SgmConfig& cfg);

// Invalidates pixels where |d_L(x) - d_R(x - round(d_L(x)))| > max_diff, or
// where the right-view lookup leaves the image. Never validates a pixel the
// input had invalid.
RasterMap lr_consistency(const RasterMap& left_disp, const RasterMap& right_disp,
                         double max_diff);

// Full pipeline: census -> costs -> aggregation -> WTA both views -> LR check.
RasterMap compute_disparity(const ImageU8& left, const ImageU8& right, const SgmConfig& cfg);

// depth = fx * baseline / d for every stride-th valid pixel (row-major count)
// with d >= min_disparity_px.
std::vector<ReferencePoint> stereo_refpoints(const RasterMap& disp, const StereoRig& rig,
                                             int stride, int min_disparity_px = 1);

} // namespace rescale::sgm
