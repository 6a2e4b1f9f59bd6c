#pragma once

#include "rescale/core.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <vector>

// Recovering metric depth from an affine-invariant disparity map d: the
// metric inverse depth obeys 1/D = alpha * d + beta for an unknown per-image
// scale alpha > 0 and offset beta. The reference points pin the line down.

namespace rescale {

class EmptyPairsError : public Error {
public:
    using Error::Error;
};

class DegenerateFitError : public Error {
public:
    using Error::Error;
};

class AllOutliersError : public Error {
public:
    using Error::Error;
};

// One reference observation: disparity sample d and metric inverse depth g.
struct SamplePair {
    double d = 0.0;      // affine-invariant disparity, unitless
    double g = 0.0;      // 1/depth, 1/m
    double weight = 1.0;
};

struct AffineScale {
    double alpha = 0.0;        // 1/m per disparity unit
    double beta = 0.0;         // 1/m
    int inlier_count = 0;
    int total_count = 0;
    double r_squared = 0.0;    // NaN when the fit set has zero g-variance
    double residual_rms = 0.0; // 1/m, over the fit's inlier set

    // alpha <= 0 came out of the data; physically implausible but reported.
    bool non_physical = false;
    // beta was pinned to 0 by the scale-only fallback fit.
    bool scale_only_fallback = false;
};

void to_json(nlohmann::json& j, const AffineScale& s);
void from_json(const nlohmann::json& j, AffineScale& s);

struct RansacConfig {
    enum class ThresholdMode {
        Absolute,          // inlier_threshold is tau in 1/m
        RelativeToMedianG, // tau = inlier_threshold * median(g)
    };

    int max_iterations = 1000;
    ThresholdMode threshold_mode = ThresholdMode::RelativeToMedianG;
    double inlier_threshold = 0.05;
    int min_sample = 2;
    uint64_t seed = 0;
    bool refit_on_inliers = true;
    // When the fitted alpha is <= 0, replace the result with a scale-only fit
    // (beta = 0, alpha = weighted median of g/d over pairs with d > 0).
    bool scale_only_fallback = false;

    void validate() const;
};

struct DepthCap {
    double min_m = 0.1;
    double max_m = 80.0;
};

// Sample the disparity map at each reference point (bilinear) and pair it
// with g = 1/depth. Points with an invalid sample, or lying outside the grid,
// are dropped. Throws EmptyPairsError when nothing survives.
std::vector<SamplePair> build_pairs(const RasterMap& disparity,
                                    const std::vector<ReferencePoint>& refs);

// Closed-form weighted least squares of g on d. Deterministic.
// Throws DegenerateFitError with fewer than two pairs or no d spread.
AffineScale fit_affine_lsq(const std::vector<SamplePair>& pairs);

// Classic RANSAC with 2-point line hypotheses in (d, g) space. Ties on
// consensus size break toward lower inlier residual RMS, then the earlier
// iteration. Deterministic for a given seed.
AffineScale fit_affine_ransac(const std::vector<SamplePair>& pairs, const RansacConfig& cfg);

// The fallback fit used for non-physical results: beta = 0 and alpha the
// weighted median of g/d over pairs with d > 0.
AffineScale fit_scale_only(const std::vector<SamplePair>& pairs);

// Invert g = alpha * d + beta per pixel into metric depth, capping the result
// into [min_m, max_m]. Invalid input pixels stay invalid.
RasterMap apply_scale(const RasterMap& disparity, const AffineScale& scale, const DepthCap& cap);

enum class FitMethod { Ransac, LeastSquares };

struct RescaleConfig {
    RansacConfig ransac;
    DepthCap cap;
    FitMethod method = FitMethod::Ransac;
};

struct RescaleResult {
    RasterMap depth;
    AffineScale scale;
};

// build_pairs -> fit -> apply_scale.
RescaleResult rescale_image(const RasterMap& disparity, const std::vector<ReferencePoint>& refs,
                            const RescaleConfig& cfg);

// Arithmetic mean of alpha and beta over the physically valid fits. The
// diagnostics of the result are sums/placeholders, not a real fit.
AffineScale mean_scale(const std::vector<AffineScale>& scales);

// apply_scale with externally chosen constants (static-rescaling ablation).
RasterMap fixed_rescale(const RasterMap& disparity, const AffineScale& fixed, const DepthCap& cap);

} // namespace rescale
