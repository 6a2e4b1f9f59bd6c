#include "rescale/lidar_sim.hpp"

#include "rescale/rng.hpp"

#include <algorithm>
#include <cmath>

namespace rescale::lidar {

void BeamConfig::validate(int image_height) const {
    if (n_beams < 1)
        throw InvalidConfigError("lidar: n_beams must be >= 1");
    if (n_beams > image_height)
        throw InvalidConfigError("lidar: more beams than image rows");
    if (!(min_depth_m > 0.0) || !(max_depth_m > min_depth_m))
        throw InvalidConfigError("lidar: depth range must satisfy 0 < min < max");
    if (max_points_per_row < 0)
        throw InvalidConfigError("lidar: max_points_per_row must be >= 0");
}

std::vector<int> beam_rows(int height, int n_beams) {
    std::vector<int> rows(n_beams);
    for (int i = 0; i < n_beams; ++i) {
        // floor((i + 0.5) * H / B), evaluated exactly in integers
        rows[i] = static_cast<int>((2LL * i + 1) * height / (2LL * n_beams));
    }
    return rows;
}

std::vector<ReferencePoint> simulate_beams(const RasterMap& gt, const BeamConfig& cfg) {
    if (gt.kind() != MapKind::MetricDepth)
        throw InvalidConfigError("lidar: ground truth must be a metric depth map");
    cfg.validate(gt.height());

    std::vector<ReferencePoint> points;
    std::vector<int> row_cols; // valid columns of the current row
    uint64_t subsample_state = cfg.seed;

    for (const int r : beam_rows(gt.height(), cfg.n_beams)) {
        row_cols.clear();
        const float* values = gt.row_values(r);
        const uint8_t* valid = gt.row_valid(r);
        for (int x = 0; x < gt.width(); ++x) {
            if (!valid[x])
                continue;
            const double depth = values[x];
            if (depth < cfg.min_depth_m || depth > cfg.max_depth_m)
                continue;
            row_cols.push_back(x);
        }

        if (cfg.max_points_per_row > 0 &&
            row_cols.size() > static_cast<size_t>(cfg.max_points_per_row)) {
            // Seeded uniform subsample: partial Fisher-Yates, then restore
            // left-to-right order.
            std::mt19937_64 rng(splitmix64(subsample_state));
            for (int k = 0; k < cfg.max_points_per_row; ++k) {
                const size_t j = k + uniform_index(rng, row_cols.size() - k);
                std::swap(row_cols[k], row_cols[j]);
            }
            row_cols.resize(cfg.max_points_per_row);
            std::sort(row_cols.begin(), row_cols.end());
        }

        for (const int x : row_cols)
            points.push_back({static_cast<double>(x), static_cast<double>(r),
                              static_cast<double>(values[x]), PointSource::LidarSim, 1.0});
    }

    if (points.empty())
        throw NoValidPointsError("lidar: all selected rows are invalid or out of range");
    return points;
}

} // namespace rescale::lidar
