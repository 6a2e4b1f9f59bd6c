#pragma once

#include "rescale/core.hpp"
#include "rescale/rescale.hpp"

#include <nlohmann/json_fwd.hpp>

#include <optional>
#include <string>
#include <vector>

namespace rescale::metrics {

class EmptyMaskError : public Error {
public:
    using Error::Error;
};

enum class CropKind {
    None,
    Eigen,  // the standard fractional crop used for KITTI-style evaluation
    Custom, // caller-provided fractions
};

enum class Alignment {
    NoneMetric,    // evaluate the metric prediction as-is
    MedianScaling, // diagnostic only: pred *= median(gt) / median(pred)
};

struct EvalConfig {
    double min_depth_m = 0.1;
    double max_depth_m = 80.0;
    CropKind crop = CropKind::None;
    // Fractions of height/width trimmed from each side (Custom crop only).
    double crop_top = 0.0, crop_bottom = 0.0, crop_left = 0.0, crop_right = 0.0;
    Alignment alignment = Alignment::NoneMetric;
    // Clamp predictions into [min, max] before computing metrics, the way
    // standard outdoor evaluation harnesses do. Off by default.
    bool clamp_pred = false;

    void validate() const;
};

struct ImageMetrics {
    double delta1 = 0.0;
    double delta2 = 0.0;
    double delta3 = 0.0;
    double abs_rel = 0.0;
    double rmse = 0.0;     // meters
    double rmse_log = 0.0; // natural log
    double log10 = 0.0;
    int64_t n_pixels = 0;
};

struct ImageRecord {
    std::string name;
    ImageMetrics metrics;
    std::optional<AffineScale> scale; // fit diagnostics when available
};

struct EvalReport {
    double delta1 = 0.0;
    double delta2 = 0.0;
    double delta3 = 0.0;
    double abs_rel = 0.0;
    double rmse = 0.0;
    double rmse_log = 0.0;
    double log10 = 0.0;
    int64_t n_pixels = 0;
    std::vector<ImageRecord> per_image;
};

void to_json(nlohmann::json& j, const ImageMetrics& m);
void to_json(nlohmann::json& j, const EvalReport& r);

// Pixel row/column bounds [begin, end) of the evaluation crop.
struct CropWindow {
    int row_begin = 0, row_end = 0, col_begin = 0, col_end = 0;
};
CropWindow crop_window(const EvalConfig& cfg, int width, int height);

// Metrics over the mask of pixels that are valid in both maps, inside the
// crop, with ground truth inside [min, max]:
//   delta_i = mean[max(pred/gt, gt/pred) < 1.25^i]   (strict <)
//   abs_rel = mean |pred - gt| / gt
//   rmse = sqrt(mean (pred - gt)^2), rmse_log over ln, log10 mean abs log10.
ImageMetrics evaluate_image(const RasterMap& pred, const RasterMap& gt, const EvalConfig& cfg);

// Equal-weight average of per-image metrics, in insertion order.
class DatasetEvaluator {
public:
    void add(ImageRecord record);
    EvalReport finalize() const;
    size_t size() const { return records_.size(); }

private:
    std::vector<ImageRecord> records_;
};

EvalReport evaluate_dataset(std::span<const std::pair<RasterMap, RasterMap>> pairs,
                            const EvalConfig& cfg);

// Coefficient of determination of the fitted line over the reference pairs.
// nullopt when the pairs have zero g-variance (R^2 undefined).
std::optional<double> r_squared_report(const std::vector<SamplePair>& pairs,
                                       const AffineScale& scale);

// Aligned-column text table, one row per entry plus the aggregate.
std::string format_table(const EvalReport& report);

} // namespace rescale::metrics
