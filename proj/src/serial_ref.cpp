#include "rescale/serial_ref.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <vector>

namespace rescale::serial {

sgm::CensusMap census_transform(const ImageU8& img, int window) {
    if (window % 2 == 0 || window < 3 || window * window - 1 > 64)
        throw InvalidConfigError("census: window must be odd, >= 3, and fit 64 bits");

    sgm::CensusMap out;
    out.width = img.width;
    out.height = img.height;
    out.bits.assign(static_cast<size_t>(img.width) * img.height, 0);
    const int r = window / 2;

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

sgm::CostVolume matching_cost(const sgm::CensusMap& left, const sgm::CensusMap& right,
                              int max_disp, int census_window) {
    sgm::CostVolume cv(left.width, left.height, max_disp);
    const uint16_t max_cost = static_cast<uint16_t>(census_window * census_window - 1);
    for (int y = 0; y < left.height; ++y)
        for (int x = 0; x < left.width; ++x)
            for (int d = 0; d < max_disp; ++d)
                cv.at(x, y, d) =
                    (x - d < 0) ? max_cost
                                : static_cast<uint16_t>(std::popcount(left.at(x, y) ^
                                                                      right.at(x - d, y)));
    return cv;
}

namespace {

// Textbook form of the recurrence: the whole L_r plane for one direction is
// materialized, then added into the output.
void aggregate_direction(const sgm::CostVolume& cv, int p1, int p2, int dx, int dy,
                         sgm::CostVolume& out) {
    const int w = cv.width();
    const int h = cv.height();
    const int nd = cv.n_disp();
    constexpr uint32_t kInf = std::numeric_limits<uint32_t>::max() / 4;

    std::vector<uint32_t> plane(static_cast<size_t>(w) * h * nd, 0);
    const auto lr = [&](int x, int y, int d) -> uint32_t& {
        return plane[(static_cast<size_t>(y) * w + x) * nd + d];
    };

    // Sweep in an order that visits p - r before p.
    const int x_begin = dx >= 0 ? 0 : w - 1;
    const int x_step = dx >= 0 ? 1 : -1;
    const int y_begin = dy >= 0 ? 0 : h - 1;
    const int y_step = dy >= 0 ? 1 : -1;

    for (int yi = 0, y = y_begin; yi < h; ++yi, y += y_step) {
        for (int xi = 0, x = x_begin; xi < w; ++xi, x += x_step) {
            const int px = x - dx;
            const int py = y - dy;
            const bool has_prev = px >= 0 && px < w && py >= 0 && py < h;

            uint32_t min_prev = kInf;
            if (has_prev)
                for (int k = 0; k < nd; ++k)
                    min_prev = std::min(min_prev, lr(px, py, k));

            for (int d = 0; d < nd; ++d) {
                uint32_t value = cv.at(x, y, d);
                if (has_prev) {
                    uint32_t best = lr(px, py, d);
                    if (d > 0)
                        best = std::min(best, lr(px, py, d - 1) + static_cast<uint32_t>(p1));
                    if (d + 1 < nd)
                        best = std::min(best, lr(px, py, d + 1) + static_cast<uint32_t>(p1));
                    best = std::min(best, min_prev + static_cast<uint32_t>(p2));
                    value += best - min_prev;
                }
                lr(x, y, d) = value;
            }
        }
    }

    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int d = 0; d < nd; ++d) {
                const uint32_t sum = out.at(x, y, d) + lr(x, y, d);
                out.at(x, y, d) = static_cast<uint16_t>(std::min<uint32_t>(sum, 65535));
            }
}

} // namespace

sgm::CostVolume sgm_aggregate(const sgm::CostVolume& cv, const sgm::SgmConfig& cfg) {
    constexpr int dirs[8][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1},
                                {1, 1}, {-1, -1}, {1, -1}, {-1, 1}};
    sgm::CostVolume out(cv.width(), cv.height(), cv.n_disp());
    for (int p = 0; p < cfg.n_paths; ++p)
        aggregate_direction(cv, cfg.p1, cfg.p2, dirs[p][0], dirs[p][1], out);
    return out;
}

RasterMap apply_scale(const RasterMap& disparity, const AffineScale& scale, const DepthCap& cap) {
    RasterMap depth(disparity.width(), disparity.height(), MapKind::MetricDepth);
    const double g_far = 1.0 / cap.max_m;
    const double g_near = 1.0 / cap.min_m;
    for (int y = 0; y < disparity.height(); ++y) {
        for (int x = 0; x < disparity.width(); ++x) {
            if (!disparity.is_valid(x, y))
                continue;
            const double g = scale.alpha * static_cast<double>(disparity.value(x, y)) + scale.beta;
            double d;
            if (g <= g_far)
                d = cap.max_m;
            else if (g >= g_near)
                d = cap.min_m;
            else
                d = 1.0 / g;
            depth.set(x, y, static_cast<float>(d));
        }
    }
    return depth;
}

metrics::ImageMetrics evaluate_image(const RasterMap& pred, const RasterMap& gt,
                                     const metrics::EvalConfig& cfg) {
    const metrics::CropWindow w = metrics::crop_window(cfg, gt.width(), gt.height());

    int64_t n = 0;
    double d1 = 0, d2 = 0, d3 = 0, abs_rel = 0, sq = 0, sq_log = 0, l10 = 0;
    for (int y = w.row_begin; y < w.row_end; ++y) {
        for (int x = w.col_begin; x < w.col_end; ++x) {
            if (!pred.is_valid(x, y) || !gt.is_valid(x, y))
                continue;
            const double g = gt.value(x, y);
            if (g < cfg.min_depth_m || g > cfg.max_depth_m)
                continue;
            double p = pred.value(x, y);
            if (cfg.clamp_pred)
                p = std::clamp(p, cfg.min_depth_m, cfg.max_depth_m);

            const double ratio = std::max(p / g, g / p);
            n += 1;
            d1 += ratio < 1.25 ? 1.0 : 0.0;
            d2 += ratio < 1.25 * 1.25 ? 1.0 : 0.0;
            d3 += ratio < 1.25 * 1.25 * 1.25 ? 1.0 : 0.0;
            abs_rel += std::abs(p - g) / g;
            sq += (p - g) * (p - g);
            const double dl = std::log(p) - std::log(g);
            sq_log += dl * dl;
            l10 += std::abs(std::log10(p) - std::log10(g));
        }
    }
    if (n == 0)
        throw metrics::EmptyMaskError("eval: empty mask");

    metrics::ImageMetrics m;
    const double dn = static_cast<double>(n);
    m.delta1 = d1 / dn;
    m.delta2 = d2 / dn;
    m.delta3 = d3 / dn;
    m.abs_rel = abs_rel / dn;
    m.rmse = std::sqrt(sq / dn);
    m.rmse_log = std::sqrt(sq_log / dn);
    m.log10 = l10 / dn;
    m.n_pixels = n;
    return m;
}

} // namespace rescale::serial
