#include "rescale/metrics.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace rescale::metrics {

namespace {

// Garg fractional bounds, the de-facto standard for KITTI-style evaluation.
constexpr double kEigenTop = 0.40810811;
constexpr double kEigenBottom = 1.0 - 0.99189189;
constexpr double kEigenLeft = 0.03594771;
constexpr double kEigenRight = 1.0 - 0.96405229;

} // namespace

void EvalConfig::validate() const {
    if (!(min_depth_m > 0.0) || !(max_depth_m > min_depth_m))
        throw InvalidConfigError("eval: depth range must satisfy 0 < min < max");
    for (const double f : {crop_top, crop_bottom, crop_left, crop_right})
        if (f < 0.0 || f >= 0.5)
            throw InvalidConfigError("eval: crop fractions must lie in [0, 0.5)");
}

CropWindow crop_window(const EvalConfig& cfg, int width, int height) {
    double top = 0.0, bottom = 0.0, left = 0.0, right = 0.0;
    switch (cfg.crop) {
    case CropKind::None:
        break;
    case CropKind::Eigen:
        top = kEigenTop;
        bottom = kEigenBottom;
        left = kEigenLeft;
        right = kEigenRight;
        break;
    case CropKind::Custom:
        top = cfg.crop_top;
        bottom = cfg.crop_bottom;
        left = cfg.crop_left;
        right = cfg.crop_right;
        break;
    }
    CropWindow w;
    w.row_begin = static_cast<int>(top * height);
    w.row_end = height - static_cast<int>(bottom * height);
    w.col_begin = static_cast<int>(left * width);
    w.col_end = width - static_cast<int>(right * width);
    return w;
}

namespace {

struct RowSums {
    int64_t n = 0;
    double d1 = 0, d2 = 0, d3 = 0;
    double abs_rel = 0, sq = 0, sq_log = 0, log10_sum = 0;
};

double median_over_mask(const RasterMap& map, const RasterMap& gt, const CropWindow& w,
                        const EvalConfig& cfg, bool of_gt) {
    std::vector<double> vals;
    for (int y = w.row_begin; y < w.row_end; ++y) {
        for (int x = w.col_begin; x < w.col_end; ++x) {
            if (!map.is_valid(x, y) || !gt.is_valid(x, y))
                continue;
            const double g = gt.value(x, y);
            if (g < cfg.min_depth_m || g > cfg.max_depth_m)
                continue;
            vals.push_back(of_gt ? g : map.value(x, y));
        }
    }
    if (vals.empty())
        return 0.0;
    std::sort(vals.begin(), vals.end());
    const size_t n = vals.size();
    return (n % 2 == 1) ? vals[n / 2] : 0.5 * (vals[n / 2 - 1] + vals[n / 2]);
}

} // namespace

ImageMetrics evaluate_image(const RasterMap& pred, const RasterMap& gt, const EvalConfig& cfg) {
    cfg.validate();
    if (pred.width() != gt.width() || pred.height() != gt.height())
        throw InvalidConfigError("eval: prediction and ground truth differ in size");

    const CropWindow w = crop_window(cfg, gt.width(), gt.height());

    double median_ratio = 1.0;
    if (cfg.alignment == Alignment::MedianScaling) {
        const double med_gt = median_over_mask(pred, gt, w, cfg, true);
        const double med_pred = median_over_mask(pred, gt, w, cfg, false);
        if (med_pred > 0.0)
            median_ratio = med_gt / med_pred;
    }

    const int rows = std::max(0, w.row_end - w.row_begin);
    std::vector<RowSums> partial(rows);

    // Per-row partial sums combined serially below: the reduction order is
    // fixed, so results do not depend on the thread count.
#pragma omp parallel for schedule(static)
    for (int y = w.row_begin; y < w.row_end; ++y) {
        RowSums& s = partial[y - w.row_begin];
        for (int x = w.col_begin; x < w.col_end; ++x) {
            if (!pred.is_valid(x, y) || !gt.is_valid(x, y))
                continue;
            const double g = gt.value(x, y);
            if (g < cfg.min_depth_m || g > cfg.max_depth_m)
                continue;
            double p = pred.value(x, y) * median_ratio;
            if (cfg.clamp_pred)
                p = std::clamp(p, cfg.min_depth_m, cfg.max_depth_m);

            const double ratio = std::max(p / g, g / p);
            s.n += 1;
            s.d1 += ratio < 1.25 ? 1.0 : 0.0;
            s.d2 += ratio < 1.25 * 1.25 ? 1.0 : 0.0;
            s.d3 += ratio < 1.25 * 1.25 * 1.25 ? 1.0 : 0.0;
            s.abs_rel += std::abs(p - g) / g;
            s.sq += (p - g) * (p - g);
            const double dlog = std::log(p) - std::log(g);
            s.sq_log += dlog * dlog;
            s.log10_sum += std::abs(std::log10(p) - std::log10(g));
        }
    }

    RowSums total;
    for (const RowSums& s : partial) {
        total.n += s.n;
        total.d1 += s.d1;
        total.d2 += s.d2;
        total.d3 += s.d3;
        total.abs_rel += s.abs_rel;
        total.sq += s.sq;
        total.sq_log += s.sq_log;
        total.log10_sum += s.log10_sum;
    }

    if (total.n == 0)
        throw EmptyMaskError("eval: no jointly valid in-range pixel inside the crop");

    ImageMetrics m;
    const double n = static_cast<double>(total.n);
    m.delta1 = total.d1 / n;
    m.delta2 = total.d2 / n;
    m.delta3 = total.d3 / n;
    m.abs_rel = total.abs_rel / n;
    m.rmse = std::sqrt(total.sq / n);
    m.rmse_log = std::sqrt(total.sq_log / n);
    m.log10 = total.log10_sum / n;
    m.n_pixels = total.n;
    return m;
}

void DatasetEvaluator::add(ImageRecord record) {
    records_.push_back(std::move(record));
}

EvalReport DatasetEvaluator::finalize() const {
    EvalReport r;
    r.per_image = records_;
    if (records_.empty())
        return r;
    for (const ImageRecord& rec : records_) {
        r.delta1 += rec.metrics.delta1;
        r.delta2 += rec.metrics.delta2;
        r.delta3 += rec.metrics.delta3;
        r.abs_rel += rec.metrics.abs_rel;
        r.rmse += rec.metrics.rmse;
        r.rmse_log += rec.metrics.rmse_log;
        r.log10 += rec.metrics.log10;
        r.n_pixels += rec.metrics.n_pixels;
    }
    const double n = static_cast<double>(records_.size());
    r.delta1 /= n;
    r.delta2 /= n;
    r.delta3 /= n;
    r.abs_rel /= n;
    r.rmse /= n;
    r.rmse_log /= n;
    r.log10 /= n;
    return r;
}

EvalReport evaluate_dataset(std::span<const std::pair<RasterMap, RasterMap>> pairs,
                            const EvalConfig& cfg) {
    DatasetEvaluator agg;
    for (size_t i = 0; i < pairs.size(); ++i) {
        ImageRecord rec;
        rec.name = "image_" + std::to_string(i);
        rec.metrics = evaluate_image(pairs[i].first, pairs[i].second, cfg);
        agg.add(std::move(rec));
    }
    return agg.finalize();
}

std::optional<double> r_squared_report(const std::vector<SamplePair>& pairs,
                                       const AffineScale& scale) {
    if (pairs.empty())
        return std::nullopt;
    double sw = 0.0, swg = 0.0;
    for (const SamplePair& p : pairs) {
        sw += p.weight;
        swg += p.weight * p.g;
    }
    if (!(sw > 0.0))
        return std::nullopt;
    const double gbar = swg / sw;
    double ss_res = 0.0, ss_tot = 0.0;
    for (const SamplePair& p : pairs) {
        const double r = p.g - (scale.alpha * p.d + scale.beta);
        ss_res += p.weight * r * r;
        ss_tot += p.weight * (p.g - gbar) * (p.g - gbar);
    }
    if (!(ss_tot > 0.0))
        return std::nullopt; // zero variance: R^2 undefined
    return 1.0 - ss_res / ss_tot;
}

void to_json(nlohmann::json& j, const ImageMetrics& m) {
    j = nlohmann::json{{"delta1", m.delta1},     {"delta2", m.delta2},
                       {"delta3", m.delta3},     {"abs_rel", m.abs_rel},
                       {"rmse", m.rmse},         {"rmse_log", m.rmse_log},
                       {"log10", m.log10},       {"n_pixels", m.n_pixels}};
}

void to_json(nlohmann::json& j, const EvalReport& r) {
    j = nlohmann::json{{"delta1", r.delta1},     {"delta2", r.delta2},
                       {"delta3", r.delta3},     {"abs_rel", r.abs_rel},
                       {"rmse", r.rmse},         {"rmse_log", r.rmse_log},
                       {"log10", r.log10},       {"n_pixels", r.n_pixels}};
    nlohmann::json images = nlohmann::json::array();
    for (const ImageRecord& rec : r.per_image) {
        nlohmann::json ji;
        to_json(ji, rec.metrics);
        ji["name"] = rec.name;
        if (rec.scale) {
            nlohmann::json js;
            rescale::to_json(js, *rec.scale);
            ji["scale"] = js;
        }
        images.push_back(std::move(ji));
    }
    j["per_image"] = std::move(images);
}

std::string format_table(const EvalReport& report) {
    std::string out;
    char line[256];
    std::snprintf(line, sizeof(line), "%-20s %8s %8s %8s %8s %8s %9s %8s\n", "image", "d1", "d2",
                  "d3", "AbsRel", "RMSE", "RMSE_log", "log10");
    out += line;
    const auto append = [&](const std::string& name, const ImageMetrics& m) {
        std::snprintf(line, sizeof(line), "%-20s %8.3f %8.3f %8.3f %8.3f %8.3f %9.3f %8.3f\n",
                      name.c_str(), m.delta1, m.delta2, m.delta3, m.abs_rel, m.rmse, m.rmse_log,
                      m.log10);
        out += line;
    };
    for (const ImageRecord& rec : report.per_image)
        append(rec.name, rec.metrics);
    ImageMetrics mean;
    mean.delta1 = report.delta1;
    mean.delta2 = report.delta2;
    mean.delta3 = report.delta3;
    mean.abs_rel = report.abs_rel;
    mean.rmse = report.rmse;
    mean.rmse_log = report.rmse_log;
    mean.log10 = report.log10;
    mean.n_pixels = report.n_pixels;
    append("mean", mean);
    return out;
}

} // namespace rescale::metrics
