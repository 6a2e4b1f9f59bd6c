#include "rescale/rescale.hpp"

#include "rescale/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace rescale {

void RansacConfig::validate() const {
    if (max_iterations < 1)
        throw InvalidConfigError("ransac: max_iterations must be >= 1");
    if (!(inlier_threshold > 0.0))
        throw InvalidConfigError("ransac: inlier threshold must be positive");
    if (min_sample != 2)
        throw InvalidConfigError("ransac: only 2-point line hypotheses are supported");
}

namespace {

double weighted_median(std::vector<std::pair<double, double>>& value_weight) {
    std::sort(value_weight.begin(), value_weight.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    double total = 0.0;
    for (const auto& [v, w] : value_weight)
        total += w;
    double cum = 0.0;
    for (const auto& [v, w] : value_weight) {
        cum += w;
        if (cum >= 0.5 * total)
            return v;
    }
    return value_weight.back().first;
}

double median_g(const std::vector<SamplePair>& pairs) {
    std::vector<double> g(pairs.size());
    for (size_t i = 0; i < pairs.size(); ++i)
        g[i] = pairs[i].g;
    std::sort(g.begin(), g.end());
    const size_t n = g.size();
    return (n % 2 == 1) ? g[n / 2] : 0.5 * (g[n / 2 - 1] + g[n / 2]);
}

double resolve_threshold(const std::vector<SamplePair>& pairs, const RansacConfig& cfg) {
    if (cfg.threshold_mode == RansacConfig::ThresholdMode::Absolute)
        return cfg.inlier_threshold;
    return cfg.inlier_threshold * median_g(pairs);
}

// Weighted least squares of g on d over the given index subset.
struct LsqLine {
    double alpha = 0.0;
    double beta = 0.0;
};

template <typename IndexRange>
LsqLine lsq_line(const std::vector<SamplePair>& pairs, const IndexRange& idx) {
    double sw = 0.0, sd = 0.0, sg = 0.0, sdd = 0.0, sdg = 0.0;
    for (const size_t i : idx) {
        const SamplePair& p = pairs[i];
        sw += p.weight;
        sd += p.weight * p.d;
        sg += p.weight * p.g;
        sdd += p.weight * p.d * p.d;
        sdg += p.weight * p.d * p.g;
    }
    const double denom = sw * sdd - sd * sd;
    if (!(std::abs(denom) > 0.0) || !(sw > 0.0))
        throw DegenerateFitError("fit: no disparity spread in the sample set");
    LsqLine line;
    line.alpha = (sw * sdg - sd * sg) / denom;
    line.beta = (sg - line.alpha * sd) / sw;
    return line;
}

// Diagnostics for a fixed line: inlier recount (all pairs when tau is NaN),
// weighted residual RMS and R^2 over the inlier set.
AffineScale line_diagnostics(const std::vector<SamplePair>& pairs, double alpha, double beta,
                             double tau) {
    AffineScale out;
    out.alpha = alpha;
    out.beta = beta;
    out.total_count = static_cast<int>(pairs.size());

    const bool all = !std::isfinite(tau);
    double sw = 0.0, swr2 = 0.0, swg = 0.0;
    int count = 0;
    for (const SamplePair& p : pairs) {
        const double r = p.g - (alpha * p.d + beta);
        if (!all && std::abs(r) > tau)
            continue;
        ++count;
        sw += p.weight;
        swr2 += p.weight * r * r;
        swg += p.weight * p.g;
    }
    out.inlier_count = count;
    out.non_physical = !(out.alpha > 0.0);
    if (count == 0 || !(sw > 0.0)) {
        out.residual_rms = std::numeric_limits<double>::quiet_NaN();
        out.r_squared = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    out.residual_rms = std::sqrt(swr2 / sw);

    const double gbar = swg / sw;
    double ss_tot = 0.0;
    for (const SamplePair& p : pairs) {
        const double r = p.g - (alpha * p.d + beta);
        if (!all && std::abs(r) > tau)
            continue;
        ss_tot += p.weight * (p.g - gbar) * (p.g - gbar);
    }
    out.r_squared = (ss_tot > 0.0) ? 1.0 - swr2 / ss_tot
                                   : std::numeric_limits<double>::quiet_NaN();
    return out;
}

bool has_distinct_d(const std::vector<SamplePair>& pairs) {
    for (size_t i = 1; i < pairs.size(); ++i)
        if (pairs[i].d != pairs[0].d)
            return true;
    return false;
}

} // namespace

std::vector<SamplePair> build_pairs(const RasterMap& disparity,
                                    const std::vector<ReferencePoint>& refs) {
    if (disparity.kind() != MapKind::AffineDisparity)
        throw InvalidConfigError("build_pairs: map kind must be affine disparity");

    std::vector<SamplePair> pairs;
    pairs.reserve(refs.size());
    for (const ReferencePoint& ref : refs) {
        if (!(ref.depth > 0.0))
            continue;
        if (ref.u < 0.0 || ref.u > disparity.width() - 1 ||
            ref.v < 0.0 || ref.v > disparity.height() - 1)
            continue;
        const std::optional<double> d = bilinear_sample(disparity, ref.u, ref.v);
        if (!d || !std::isfinite(*d))
            continue;
        pairs.push_back({*d, 1.0 / ref.depth, ref.weight});
    }
    if (pairs.empty())
        throw EmptyPairsError("build_pairs: no reference point yielded a valid sample");
    return pairs;
}

AffineScale fit_affine_lsq(const std::vector<SamplePair>& pairs) {
    if (pairs.size() < 2)
        throw DegenerateFitError("fit: at least two pairs are required");
    if (!has_distinct_d(pairs))
        throw DegenerateFitError("fit: all disparity values identical");

    std::vector<size_t> idx(pairs.size());
    std::iota(idx.begin(), idx.end(), size_t{0});
    const LsqLine line = lsq_line(pairs, idx);
    return line_diagnostics(pairs, line.alpha, line.beta,
                            std::numeric_limits<double>::quiet_NaN());
}

AffineScale fit_scale_only(const std::vector<SamplePair>& pairs) {
    std::vector<std::pair<double, double>> ratios;
    ratios.reserve(pairs.size());
    for (const SamplePair& p : pairs)
        if (p.d > 0.0)
            ratios.emplace_back(p.g / p.d, p.weight);
    if (ratios.empty())
        throw DegenerateFitError("fit: scale-only fallback needs pairs with d > 0");

    const double alpha = weighted_median(ratios);
    AffineScale out =
        line_diagnostics(pairs, alpha, 0.0, std::numeric_limits<double>::quiet_NaN());
    out.scale_only_fallback = true;
    return out;
}

AffineScale fit_affine_ransac(const std::vector<SamplePair>& pairs, const RansacConfig& cfg) {
    cfg.validate();
    if (pairs.size() < 2)
        throw DegenerateFitError("fit: at least two pairs are required");
    if (!has_distinct_d(pairs))
        throw DegenerateFitError("fit: all disparity values identical");

    const double tau = resolve_threshold(pairs, cfg);
    const size_t n = pairs.size();
    std::mt19937_64 rng(cfg.seed);

    int best_count = 0;
    double best_rms = std::numeric_limits<double>::infinity();
    double best_alpha = 0.0, best_beta = 0.0;

    for (int it = 0; it < cfg.max_iterations; ++it) {
        const size_t i = uniform_index(rng, n);
        size_t j = uniform_index(rng, n - 1);
        if (j >= i)
            ++j;
        const SamplePair& a = pairs[i];
        const SamplePair& b = pairs[j];
        if (a.d == b.d)
            continue;

        const double alpha = (b.g - a.g) / (b.d - a.d);
        const double beta = a.g - alpha * a.d;

        int count = 0;
        double sw = 0.0, swr2 = 0.0;
        for (const SamplePair& p : pairs) {
            const double r = p.g - (alpha * p.d + beta);
            if (std::abs(r) <= tau) {
                ++count;
                sw += p.weight;
                swr2 += p.weight * r * r;
            }
        }
        const double rms = (sw > 0.0) ? std::sqrt(swr2 / sw)
                                      : std::numeric_limits<double>::infinity();
        if (count > best_count || (count == best_count && rms < best_rms)) {
            best_count = count;
            best_rms = rms;
            best_alpha = alpha;
            best_beta = beta;
        }
    }

    if (best_count < 2)
        throw AllOutliersError("ransac: no hypothesis reached a 2-member consensus");

    double alpha = best_alpha, beta = best_beta;
    if (cfg.refit_on_inliers) {
        std::vector<size_t> inliers;
        inliers.reserve(n);
        for (size_t k = 0; k < n; ++k) {
            const double r = pairs[k].g - (best_alpha * pairs[k].d + best_beta);
            if (std::abs(r) <= tau)
                inliers.push_back(k);
        }
        const LsqLine line = lsq_line(pairs, inliers);
        alpha = line.alpha;
        beta = line.beta;
    }

    AffineScale out = line_diagnostics(pairs, alpha, beta, tau);
    if (out.non_physical && cfg.scale_only_fallback) {
        std::vector<std::pair<double, double>> ratios;
        for (const SamplePair& p : pairs)
            if (p.d > 0.0)
                ratios.emplace_back(p.g / p.d, p.weight);
        if (!ratios.empty()) {
            const double fallback_alpha = weighted_median(ratios);
            out = line_diagnostics(pairs, fallback_alpha, 0.0, tau);
            out.non_physical = true; // keep the anomaly visible
            out.scale_only_fallback = true;
        }
    }
    return out;
}

RasterMap apply_scale(const RasterMap& disparity, const AffineScale& scale, const DepthCap& cap) {
    if (disparity.kind() != MapKind::AffineDisparity)
        throw InvalidConfigError("apply_scale: map kind must be affine disparity");
    if (!(cap.min_m > 0.0) || !(cap.max_m > cap.min_m))
        throw InvalidConfigError("apply_scale: depth cap must satisfy 0 < min < max");

    RasterMap depth(disparity.width(), disparity.height(), MapKind::MetricDepth);
    const double g_far = 1.0 / cap.max_m;  // below this, clamp to the far cap
    const double g_near = 1.0 / cap.min_m; // above this, clamp to the near cap

    const int h = disparity.height();
    const int w = disparity.width();
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        const float* in = disparity.row_values(y);
        const uint8_t* in_valid = disparity.row_valid(y);
        float* out = depth.row_values(y);
        uint8_t* out_valid = depth.row_valid(y);
        for (int x = 0; x < w; ++x) {
            if (!in_valid[x])
                continue;
            const double g = scale.alpha * static_cast<double>(in[x]) + scale.beta;
            double d;
            if (g <= g_far)
                d = cap.max_m;
            else if (g >= g_near)
                d = cap.min_m;
            else
                d = 1.0 / g;
            out[x] = static_cast<float>(d);
            out_valid[x] = 1;
        }
    }
    return depth;
}

RescaleResult rescale_image(const RasterMap& disparity, const std::vector<ReferencePoint>& refs,
                            const RescaleConfig& cfg) {
    const std::vector<SamplePair> pairs = build_pairs(disparity, refs);

    AffineScale scale;
    if (cfg.method == FitMethod::Ransac) {
        scale = fit_affine_ransac(pairs, cfg.ransac);
    } else {
        scale = fit_affine_lsq(pairs);
        if (scale.non_physical && cfg.ransac.scale_only_fallback) {
            AffineScale fb = fit_scale_only(pairs);
            fb.non_physical = true;
            scale = fb;
        }
    }
    return {apply_scale(disparity, scale, cfg.cap), scale};
}

AffineScale mean_scale(const std::vector<AffineScale>& scales) {
    double sum_alpha = 0.0, sum_beta = 0.0;
    int n = 0, inliers = 0, total = 0;
    for (const AffineScale& s : scales) {
        if (!std::isfinite(s.alpha) || !std::isfinite(s.beta) || !(s.alpha > 0.0))
            continue;
        sum_alpha += s.alpha;
        sum_beta += s.beta;
        inliers += s.inlier_count;
        total += s.total_count;
        ++n;
    }
    if (n == 0)
        throw DegenerateFitError("mean_scale: no physically valid fits to average");

    AffineScale out;
    out.alpha = sum_alpha / n;
    out.beta = sum_beta / n;
    out.inlier_count = inliers;
    out.total_count = total;
    out.r_squared = std::numeric_limits<double>::quiet_NaN();
    out.residual_rms = 0.0;
    return out;
}

RasterMap fixed_rescale(const RasterMap& disparity, const AffineScale& fixed, const DepthCap& cap) {
    return apply_scale(disparity, fixed, cap);
}

void to_json(nlohmann::json& j, const AffineScale& s) {
    j = nlohmann::json{
        {"alpha", s.alpha},
        {"beta", s.beta},
        {"inlier_count", s.inlier_count},
        {"total_count", s.total_count},
        {"residual_rms", s.residual_rms},
    };
    if (std::isfinite(s.r_squared))
        j["r_squared"] = s.r_squared;
    else
        j["r_squared"] = nullptr;
    nlohmann::json flags = nlohmann::json::array();
    if (s.non_physical)
        flags.push_back("non_physical");
    if (s.scale_only_fallback)
        flags.push_back("scale_only_fallback");
    j["flags"] = flags;
}

void from_json(const nlohmann::json& j, AffineScale& s) {
    s = AffineScale{};
    j.at("alpha").get_to(s.alpha);
    j.at("beta").get_to(s.beta);
    j.at("inlier_count").get_to(s.inlier_count);
    j.at("total_count").get_to(s.total_count);
    j.at("residual_rms").get_to(s.residual_rms);
    if (j.contains("r_squared") && !j["r_squared"].is_null())
        j["r_squared"].get_to(s.r_squared);
    else
        s.r_squared = std::numeric_limits<double>::quiet_NaN();
    if (j.contains("flags")) {
        for (const auto& f : j["flags"]) {
            if (f == "non_physical")
                s.non_physical = true;
            if (f == "scale_only_fallback")
                s.scale_only_fallback = true;
        }
    }
}

} // namespace rescale
