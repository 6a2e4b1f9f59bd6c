#include "rescale/sgm.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace rescale::sgm {

void StereoRig::validate() const {
    intrinsics.validate();
    if (!(baseline_m > 0.0))
        throw InvalidConfigError("stereo rig: baseline must be positive");
}

void SgmConfig::validate() const {
    if (max_disparity < 2)
        throw InvalidConfigError("sgm: max_disparity must be >= 2");
    if (census_window % 2 == 0 || census_window < 3)
        throw InvalidConfigError("sgm: census window must be odd and >= 3");
    if (census_window * census_window - 1 > 64)
        throw InvalidConfigError("sgm: census window does not fit in 64 bits");
    if (!(p2 > p1) || p1 <= 0)
        throw InvalidConfigError("sgm: penalties must satisfy p2 > p1 > 0");
    if (n_paths != 4 && n_paths != 8)
        throw InvalidConfigError("sgm: n_paths must be 4 or 8");
    if (min_disparity_px < 1)
        throw InvalidConfigError("sgm: min_disparity_px must be >= 1");
    if (lr_check_max_diff < 0.0)
        throw InvalidConfigError("sgm: lr_check_max_diff must be non-negative");
}

CensusMap census_transform(const ImageU8& img, int window) {
    if (window % 2 == 0 || window < 3 || window * window - 1 > 64)
        throw InvalidConfigError("census: window must be odd, >= 3, and fit 64 bits");

    CensusMap out;
    out.width = img.width;
    out.height = img.height;
    out.bits.assign(static_cast<size_t>(img.width) * img.height, 0);
    const int r = window / 2;

#pragma omp parallel for schedule(static)
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const uint8_t center = img.at(x, y);
            uint64_t bits = 0;
            int bit = 0;
            for (int wy = -r; wy <= r; ++wy) {
                for (int wx = -r; wx <= r; ++wx) {
                    if (wx == 0 && wy == 0)
                        continue;
                    if (img.at_clamped(x + wx, y + wy) < center)
                        bits |= uint64_t{1} << bit;
                    ++bit;
                }
            }
            out.bits[static_cast<size_t>(y) * img.width + x] = bits;
        }
    }
    return out;
}

namespace {

CostVolume hamming_costs(const CensusMap& base, const CensusMap& match, int max_disp,
                         int census_window, int shift_sign) {
    if (base.width != match.width || base.height != match.height)
        throw InvalidConfigError("matching_cost: census maps differ in size");

    CostVolume cv(base.width, base.height, max_disp);
    const uint16_t max_cost = static_cast<uint16_t>(census_window * census_window - 1);

#pragma omp parallel for schedule(static)
    for (int y = 0; y < base.height; ++y) {
        for (int x = 0; x < base.width; ++x) {
            const uint64_t b = base.at(x, y);
            uint16_t* costs = cv.ptr(x, y);
            for (int d = 0; d < max_disp; ++d) {
                const int xm = x + shift_sign * d;
                costs[d] = (xm < 0 || xm >= base.width)
                               ? max_cost
                               : static_cast<uint16_t>(std::popcount(b ^ match.at(xm, y)));
            }
        }
    }
    return cv;
}

} // namespace

CostVolume matching_cost(const CensusMap& left, const CensusMap& right, int max_disp,
                         int census_window) {
    return hamming_costs(left, right, max_disp, census_window, -1);
}

CostVolume matching_cost_right(const CensusMap& left, const CensusMap& right, int max_disp,
                               int census_window) {
    return hamming_costs(right, left, max_disp, census_window, +1);
}

namespace {

struct PathDir {
    int dx;
    int dy;
};

// First the 4-connected paths, then the diagonals for n_paths = 8.
constexpr PathDir kPaths[8] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1},
                               {1, 1}, {-1, -1}, {1, -1}, {-1, 1}};

// Aggregate a single ray starting at (x0, y0) along (dx, dy), adding the
// per-pixel path costs into `out`. Only a rolling buffer of the previous
// pixel's costs is kept.
void aggregate_ray(const CostVolume& cv, int p1, int p2, int x0, int y0, int dx, int dy,
                   std::vector<uint32_t>& prev, CostVolume& out) {
    const int n_disp = cv.n_disp();
    const int w = cv.width();
    const int h = cv.height();

    int x = x0, y = y0;
    bool first = true;
    uint32_t min_prev = 0;

    while (x >= 0 && x < w && y >= 0 && y < h) {
        const uint16_t* raw = cv.ptr(x, y);
        uint16_t* acc = out.ptr(x, y);
        uint32_t min_cur = std::numeric_limits<uint32_t>::max();

        if (first) {
            for (int d = 0; d < n_disp; ++d) {
                prev[d] = raw[d];
                min_cur = std::min(min_cur, prev[d]);
            }
            first = false;
        } else {
            const uint32_t jump = min_prev + static_cast<uint32_t>(p2);
            uint32_t left_neighbor = std::numeric_limits<uint32_t>::max();
            uint32_t carry = prev[0];
            for (int d = 0; d < n_disp; ++d) {
                uint32_t best = std::min(carry, jump);
                if (d > 0)
                    best = std::min(best, left_neighbor + static_cast<uint32_t>(p1));
                if (d + 1 < n_disp)
                    best = std::min(best, prev[d + 1] + static_cast<uint32_t>(p1));
                left_neighbor = carry; // L_prev[d] before overwrite
                if (d + 1 < n_disp)
                    carry = prev[d + 1];
                prev[d] = raw[d] + best - min_prev;
                min_cur = std::min(min_cur, prev[d]);
            }
        }
        min_prev = min_cur;

        for (int d = 0; d < n_disp; ++d) {
            const uint32_t sum = acc[d] + prev[d];
            acc[d] = static_cast<uint16_t>(std::min<uint32_t>(sum, 65535));
        }
        x += dx;
        y += dy;
    }
}

} // namespace

CostVolume sgm_aggregate(const CostVolume& cv, const SgmConfig& cfg) {
    // Degenerate penalties (p1 = p2 = 0) are allowed here so the identity
    // "zero penalties => path-count-scaled raw cost" stays checkable; the
    // full pipeline enforces p2 > p1 > 0 via SgmConfig::validate.
    if (cfg.p1 < 0 || cfg.p2 < cfg.p1)
        throw InvalidConfigError("sgm: penalties must satisfy p2 >= p1 >= 0");
    if (cfg.n_paths != 4 && cfg.n_paths != 8)
        throw InvalidConfigError("sgm: n_paths must be 4 or 8");

    const int w = cv.width();
    const int h = cv.height();
    CostVolume out(w, h, cv.n_disp());

    for (int pi = 0; pi < cfg.n_paths; ++pi) {
        const auto [dx, dy] = kPaths[pi];

        // Ray start pixels: those whose predecessor lies outside the image.
        std::vector<std::pair<int, int>> starts;
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                if (x - dx < 0 || x - dx >= w || y - dy < 0 || y - dy >= h)
                    starts.emplace_back(x, y);

        // Rays of one direction touch disjoint pixels, so they can run in
        // parallel while accumulating into the shared output volume.
        const int64_t n_starts = static_cast<int64_t>(starts.size());
#pragma omp parallel
        {
            std::vector<uint32_t> prev(cv.n_disp());
#pragma omp for schedule(dynamic, 16)
            for (int64_t s = 0; s < n_starts; ++s)
                aggregate_ray(cv, cfg.p1, cfg.p2, starts[s].first, starts[s].second, dx, dy,
                              prev, out);
        }
    }
    return out;
}

RasterMap wta_disparity(const CostVolume& cv, const SgmConfig& cfg) {
    RasterMap disp(cv.width(), cv.height(), MapKind::AffineDisparity);
    const int n_disp = cv.n_disp();

#pragma omp parallel for schedule(static)
    for (int y = 0; y < cv.height(); ++y) {
        for (int x = 0; x < cv.width(); ++x) {
            const uint16_t* costs = cv.ptr(x, y);
            int best = 0;
            for (int d = 1; d < n_disp; ++d)
                if (costs[d] < costs[best])
                    best = d;

            double value = best;
            if (cfg.subpixel && best > 0 && best + 1 < n_disp) {
                // Parabola through the three costs around the minimum.
                const double c0 = costs[best - 1];
                const double c1 = costs[best];
                const double c2 = costs[best + 1];
                const double denom = c0 - 2.0 * c1 + c2;
                if (denom > 0.0) {
                    const double offset = std::clamp((c0 - c2) / (2.0 * denom), -0.5, 0.5);
                    value += offset;
                }
            }
            disp.set(x, y, static_cast<float>(value));
        }
    }
    return disp;
}

RasterMap lr_consistency(const RasterMap& left_disp, const RasterMap& right_disp,
                         double max_diff) {
    if (left_disp.width() != right_disp.width() || left_disp.height() != right_disp.height())
        throw InvalidConfigError("lr_consistency: disparity maps differ in size");

    RasterMap out = left_disp;
#pragma omp parallel for schedule(static)
    for (int y = 0; y < out.height(); ++y) {
        for (int x = 0; x < out.width(); ++x) {
            if (!out.is_valid(x, y))
                continue;
            const double dl = out.value(x, y);
            const int xr = static_cast<int>(std::lround(x - dl));
            if (xr < 0 || xr >= out.width() || !right_disp.is_valid(xr, y)) {
                out.set_invalid(x, y);
                continue;
            }
            if (std::abs(dl - right_disp.value(xr, y)) > max_diff)
                out.set_invalid(x, y);
        }
    }
    return out;
}

RasterMap compute_disparity(const ImageU8& left, const ImageU8& right, const SgmConfig& cfg) {
    cfg.validate();
    if (left.width != right.width || left.height != right.height)
        throw InvalidConfigError("sgm: stereo pair differs in size");

    const CensusMap census_left = census_transform(left, cfg.census_window);
    const CensusMap census_right = census_transform(right, cfg.census_window);

    const CostVolume cost_left =
        matching_cost(census_left, census_right, cfg.max_disparity, cfg.census_window);
    const CostVolume cost_right =
        matching_cost_right(census_left, census_right, cfg.max_disparity, cfg.census_window);

    const RasterMap disp_left = wta_disparity(sgm_aggregate(cost_left, cfg), cfg);
    const RasterMap disp_right = wta_disparity(sgm_aggregate(cost_right, cfg), cfg);

    return lr_consistency(disp_left, disp_right, cfg.lr_check_max_diff);
}

std::vector<ReferencePoint> stereo_refpoints(const RasterMap& disp, const StereoRig& rig,
                                             int stride, int min_disparity_px) {
    rig.validate();
    if (stride < 1)
        throw InvalidConfigError("stereo_refpoints: stride must be >= 1");

    std::vector<ReferencePoint> points;
    int64_t eligible = 0;
    for (int y = 0; y < disp.height(); ++y) {
        for (int x = 0; x < disp.width(); ++x) {
            if (!disp.is_valid(x, y))
                continue;
            const double d = disp.value(x, y);
            if (d < min_disparity_px)
                continue;
            if (eligible++ % stride != 0)
                continue;
            const double depth = rig.intrinsics.fx * rig.baseline_m / d;
            points.push_back({static_cast<double>(x), static_cast<double>(y), depth,
                              PointSource::Stereo, 1.0});
        }
    }
    return points;
}

} // namespace rescale::sgm
