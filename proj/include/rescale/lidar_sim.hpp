#pragma once

#include "rescale/core.hpp"

#include <cstdint>
#include <vector>

namespace rescale::lidar {

class NoValidPointsError : public Error {
public:
    using Error::Error;
};

struct BeamConfig {
    int n_beams = 16;
    int max_points_per_row = 0; // 0 = unlimited
    double min_depth_m = 0.1;
    double max_depth_m = 80.0;
    uint64_t seed = 0; // for the optional per-row subsample

    void validate(int image_height) const;
};

// Row indices selected for B beams on an H-row image: floor((i + 0.5) * H / B).
// Centered so a single beam scans near the image middle. Note the set for B
// beams does not generally nest inside the set for 2B beams.
std::vector<int> beam_rows(int height, int n_beams);

// Every valid ground-truth pixel on a selected row whose depth lies inside
// [min_depth_m, max_depth_m] becomes a reference point at integer pixel
// coordinates. Invalid pixels are skipped, never interpolated.
std::vector<ReferencePoint> simulate_beams(const RasterMap& gt, const BeamConfig& cfg);

} // namespace rescale::lidar
