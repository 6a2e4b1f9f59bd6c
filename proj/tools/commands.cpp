#include "commands.hpp"

#include "log.hpp"
#include "rescale/lidar_sim.hpp"
#include "rescale/rng.hpp"
#include "rescale/sfm.hpp"
#include "rescale/sgm.hpp"
#include "rescale/synth.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>

namespace rescale::cli {

namespace fs = std::filesystem;
using nlohmann::json;

ProviderSpec parse_provider(const std::string& text, int default_beams) {
    ProviderSpec spec;
    spec.beams = default_beams; // bare "lidar" keeps an explicit --beams value
    if (text == "stereo") {
        spec.kind = ProviderSpec::Kind::Stereo;
    } else if (text == "sfm") {
        spec.kind = ProviderSpec::Kind::Sfm;
    } else if (text == "external") {
        spec.kind = ProviderSpec::Kind::External;
    } else if (text.rfind("lidar:", 0) == 0) {
        spec.kind = ProviderSpec::Kind::Lidar;
        try {
            spec.beams = std::stoi(text.substr(6));
        } catch (const std::exception&) {
            throw InvalidConfigError("provider: cannot parse beam count in '" + text + "'");
        }
        if (spec.beams < 1)
            throw InvalidConfigError("provider: beam count must be >= 1");
    } else if (text == "lidar") {
        spec.kind = ProviderSpec::Kind::Lidar;
    } else {
        throw InvalidConfigError("provider: expected lidar:B, stereo, sfm or external, got '" +
                                 text + "'");
    }
    return spec;
}

void RunConfig::resolve_profile() {
    if (profile == "indoor") {
        min_depth_m = 0.1;
        max_depth_m = 10.0;
    } else if (profile == "outdoor" || profile.empty()) {
        min_depth_m = 0.1;
        max_depth_m = 80.0;
    } else if (profile != "custom") {
        throw InvalidConfigError("profile: expected indoor, outdoor or custom");
    }
    if (!(min_depth_m > 0.0) || !(max_depth_m > min_depth_m))
        throw InvalidConfigError("profile: depth range must satisfy 0 < min < max");
}

DepthCap RunConfig::depth_cap() const {
    return {min_depth_m, max_depth_m};
}

metrics::EvalConfig RunConfig::eval_config() const {
    metrics::EvalConfig cfg;
    cfg.min_depth_m = min_depth_m;
    cfg.max_depth_m = max_depth_m;
    cfg.crop = eigen_crop ? metrics::CropKind::Eigen : metrics::CropKind::None;
    cfg.clamp_pred = clamp_pred;
    return cfg;
}

namespace {

sfm::GateMode parse_gate_mode(const std::string& text) {
    if (text == "translation")
        return sfm::GateMode::TranslationOnly;
    if (text == "either")
        return sfm::GateMode::TranslationOrRotation;
    if (text == "both")
        return sfm::GateMode::TranslationAndRotation;
    throw InvalidConfigError("gate mode: expected translation, either or both");
}

// Profile precedence: explicit --profile wins, then the manifest's, then outdoor.
void adopt_manifest_profile(RunConfig& cfg, const io::DatasetManifest& m) {
    if (cfg.profile.empty() && !m.profile.empty())
        cfg.profile = m.profile;
    cfg.resolve_profile();
}

void require(bool ok, const std::string& what) {
    if (!ok)
        throw InvalidConfigError(what);
}

// Checks that every record carries what the provider needs, before any
// processing starts.
void validate_for_provider(const io::DatasetManifest& m, const RunConfig& cfg,
                           bool needs_disparity, bool needs_gt) {
    for (size_t i = 0; i < m.records.size(); ++i) {
        const io::ManifestRecord& r = m.records[i];
        const std::string where = "manifest: record " + std::to_string(i + 1) + " ('" + r.name +
                                  "')";
        if (needs_disparity)
            require(!r.disparity_path.empty(), where + " needs a disparity map");
        if (needs_gt)
            require(!r.gt_depth_path.empty(), where + " needs ground-truth depth");
        switch (cfg.provider.kind) {
        case ProviderSpec::Kind::Lidar:
            require(!r.gt_depth_path.empty(), where + " needs ground-truth depth for lidar");
            break;
        case ProviderSpec::Kind::Stereo:
            require(!r.left_image_path.empty() && !r.right_image_path.empty(),
                    where + " needs a stereo image pair");
            require(m.baseline_m.has_value(), "manifest: stereo provider needs a baseline");
            m.intrinsics_for(i); // throws when absent
            break;
        case ProviderSpec::Kind::Sfm:
            require(!r.matches_path.empty(), where + " needs a matches file");
            require(!r.pose_path.empty(), where + " needs a relative pose file");
            m.intrinsics_for(i);
            break;
        case ProviderSpec::Kind::External:
            require(!r.refpoints_path.empty(), where + " needs a refpoints file");
            break;
        }
    }
}

std::vector<ReferencePoint> provider_refpoints(const io::DatasetManifest& m, size_t index,
                                               const RunConfig& cfg) {
    const io::ManifestRecord& rec = m.records[index];
    switch (cfg.provider.kind) {
    case ProviderSpec::Kind::Lidar: {
        const RasterMap gt = io::load_map_auto(rec.gt_depth_path, MapKind::MetricDepth);
        lidar::BeamConfig bc;
        bc.n_beams = cfg.provider.beams;
        bc.min_depth_m = cfg.min_depth_m;
        bc.max_depth_m = cfg.max_depth_m;
        bc.seed = derive_seed(cfg.seed, index);
        return lidar::simulate_beams(gt, bc);
    }
    case ProviderSpec::Kind::Stereo: {
        const ImageU8 left = io::load_image_png(rec.left_image_path);
        const ImageU8 right = io::load_image_png(rec.right_image_path);
        sgm::StereoRig rig{m.intrinsics_for(index), *m.baseline_m};
        sgm::SgmConfig sc;
        const RasterMap disp = sgm::compute_disparity(left, right, sc);
        return sgm::stereo_refpoints(disp, rig, cfg.stereo_stride, sc.min_disparity_px);
    }
    case ProviderSpec::Kind::Sfm: {
        const RigidPose rel = io::load_poses(rec.pose_path).front();
        sfm::GateConfig gate{cfg.min_translation_m, cfg.rotation_threshold_deg,
                             parse_gate_mode(cfg.gate_mode)};
        if (!sfm::gate_pair(rel, gate))
            throw Error("sfm: pose gate rejected the frame pair");
        const std::vector<sfm::Correspondence> matches = io::load_matches(rec.matches_path);
        const CameraIntrinsics& K = m.intrinsics_for(index);
        return sfm::sfm_refpoints(sfm::triangulate(matches, K, rel), K);
    }
    case ProviderSpec::Kind::External:
        return io::load_refpoints(rec.refpoints_path);
    }
    throw Error("provider: unreachable");
}

void write_json(const json& j, const fs::path& path) {
    std::ofstream out(path);
    if (!out)
        throw io::IoError("cannot open " + path.string() + " for writing");
    out << j.dump(2) << "\n";
}

void write_text(const std::string& text, const fs::path& path) {
    std::ofstream out(path);
    if (!out)
        throw io::IoError("cannot open " + path.string() + " for writing");
    out << text;
}

// Runs `work(i)` over all records, catching per-record failures so one bad
// record never aborts the rest. Parallel across records when jobs > 1; each
// record's pipeline stays sequential.
template <typename Fn>
std::vector<std::string> for_each_record(size_t n, int jobs, Fn&& work) {
    std::vector<std::string> errors(n);
    if (jobs > 1) {
#pragma omp parallel for num_threads(jobs) schedule(dynamic)
        for (int64_t i = 0; i < static_cast<int64_t>(n); ++i) {
            try {
                work(static_cast<size_t>(i));
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    } else {
        for (size_t i = 0; i < n; ++i) {
            try {
                work(i);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    }
    return errors;
}

int summarize(const io::DatasetManifest& m, const std::vector<std::string>& errors,
              const char* verb) {
    size_t failed = 0;
    for (size_t i = 0; i < errors.size(); ++i) {
        if (errors[i].empty())
            continue;
        ++failed;
        log_error("record '%s': %s", m.records[i].name.c_str(), errors[i].c_str());
    }
    if (failed == errors.size() && !errors.empty()) {
        log_error("%s failed for every record", verb);
        return kExitTotalFailure;
    }
    if (failed > 0) {
        log_warn("%s finished with %zu/%zu failed records", verb, failed, errors.size());
        return kExitPartial;
    }
    log_info("%s finished for %zu records", verb, errors.size());
    return kExitOk;
}

} // namespace

int cmd_rescale(RunConfig cfg) try {
    const io::DatasetManifest m = io::load_manifest(cfg.manifest_path);
    adopt_manifest_profile(cfg, m);
    validate_for_provider(m, cfg, /*needs_disparity=*/true, /*needs_gt=*/false);
    fs::create_directories(cfg.out_dir);

    const std::vector<std::string> errors =
        for_each_record(m.records.size(), cfg.jobs, [&](size_t i) {
            const io::ManifestRecord& rec = m.records[i];
            const RasterMap disp = io::load_map_auto(rec.disparity_path, MapKind::AffineDisparity);
            const std::vector<ReferencePoint> refs = provider_refpoints(m, i, cfg);

            RasterMap depth;
            AffineScale scale;
            if (cfg.fixed_scale) {
                scale = *cfg.fixed_scale;
                depth = fixed_rescale(disp, scale, cfg.depth_cap());
            } else {
                RescaleConfig rc;
                rc.ransac.max_iterations = cfg.ransac_iters;
                rc.ransac.inlier_threshold = cfg.inlier_frac;
                rc.ransac.seed = derive_seed(cfg.seed, i);
                rc.cap = cfg.depth_cap();
                rc.method = cfg.no_ransac ? FitMethod::LeastSquares : FitMethod::Ransac;
                RescaleResult result = rescale_image(disp, refs, rc);
                depth = std::move(result.depth);
                scale = result.scale;
            }

            io::save_pfm(depth, cfg.out_dir / (rec.name + "_depth.pfm"));
            if (cfg.write_png16)
                io::save_depth_png16(depth, cfg.out_dir / (rec.name + "_depth.png"));
            write_json(json(scale), cfg.out_dir / (rec.name + "_scale.json"));
            log_debug("record '%s': %zu refs, alpha=%.6g beta=%.6g inliers=%d/%d",
                      rec.name.c_str(), refs.size(), scale.alpha, scale.beta, scale.inlier_count,
                      scale.total_count);
        });

    return summarize(m, errors, "rescale");
} catch (const std::exception& e) {
    log_error("rescale: %s", e.what());
    return kExitUsage;
}

int cmd_eval(RunConfig cfg) try {
    const io::DatasetManifest m = io::load_manifest(cfg.manifest_path);
    adopt_manifest_profile(cfg, m);
    for (size_t i = 0; i < m.records.size(); ++i)
        require(!m.records[i].gt_depth_path.empty(),
                "manifest: record " + std::to_string(i + 1) + " needs ground-truth depth");
    if (cfg.pred_dir.empty())
        cfg.pred_dir = cfg.out_dir;
    fs::create_directories(cfg.out_dir);

    const metrics::EvalConfig eval_cfg = cfg.eval_config();
    std::vector<std::optional<metrics::ImageRecord>> results(m.records.size());

    const std::vector<std::string> errors =
        for_each_record(m.records.size(), cfg.jobs, [&](size_t i) {
            const io::ManifestRecord& rec = m.records[i];
            // Our own outputs first, then externally produced maps.
            fs::path pred_path;
            for (const char* suffix : {"_depth.pfm", "_depth.png", ".pfm", ".png", ".npy"}) {
                const fs::path candidate = cfg.pred_dir / (rec.name + suffix);
                if (fs::exists(candidate)) {
                    pred_path = candidate;
                    break;
                }
            }
            if (pred_path.empty())
                throw io::IoError("no prediction found for record '" + rec.name + "' under " +
                                  cfg.pred_dir.string());
            const RasterMap pred = io::load_map_auto(pred_path, MapKind::MetricDepth);
            const RasterMap gt = io::load_map_auto(rec.gt_depth_path, MapKind::MetricDepth);

            metrics::ImageRecord out;
            out.name = rec.name;
            out.metrics = metrics::evaluate_image(pred, gt, eval_cfg);
            const fs::path scale_path = cfg.pred_dir / (rec.name + "_scale.json");
            if (fs::exists(scale_path)) {
                std::ifstream in(scale_path);
                json js = json::parse(in);
                out.scale = js.get<AffineScale>();
            }
            results[i] = std::move(out);
        });

    metrics::DatasetEvaluator agg;
    for (std::optional<metrics::ImageRecord>& r : results)
        if (r)
            agg.add(std::move(*r));
    if (agg.size() > 0) {
        const metrics::EvalReport report = agg.finalize();
        const std::string table = metrics::format_table(report);
        std::fputs(table.c_str(), stdout);
        write_json(json(report), cfg.out_dir / "report.json");
        write_text(table, cfg.out_dir / "report.txt");
    }
    return summarize(m, errors, "eval");
} catch (const std::exception& e) {
    log_error("eval: %s", e.what());
    return kExitUsage;
}

int cmd_ablate(RunConfig cfg) try {
    const io::DatasetManifest m = io::load_manifest(cfg.manifest_path);
    adopt_manifest_profile(cfg, m);
    validate_for_provider(m, cfg, /*needs_disparity=*/true, /*needs_gt=*/true);
    fs::create_directories(cfg.out_dir);

    const metrics::EvalConfig eval_cfg = cfg.eval_config();
    const size_t n = m.records.size();

    struct PerRecord {
        AffineScale ransac_scale;
        metrics::ImageMetrics ransac_metrics;
        metrics::ImageMetrics lsq_metrics;
        bool lsq_ok = false;
        std::string lsq_error;
    };
    std::vector<std::optional<PerRecord>> stage1(n);

    std::vector<std::string> errors = for_each_record(n, cfg.jobs, [&](size_t i) {
        const io::ManifestRecord& rec = m.records[i];
        const RasterMap disp = io::load_map_auto(rec.disparity_path, MapKind::AffineDisparity);
        const RasterMap gt = io::load_map_auto(rec.gt_depth_path, MapKind::MetricDepth);
        const std::vector<ReferencePoint> refs = provider_refpoints(m, i, cfg);
        const std::vector<SamplePair> pairs = build_pairs(disp, refs);

        RansacConfig rc;
        rc.max_iterations = cfg.ransac_iters;
        rc.inlier_threshold = cfg.inlier_frac;
        rc.seed = derive_seed(cfg.seed, i);

        PerRecord out;
        out.ransac_scale = fit_affine_ransac(pairs, rc);
        out.ransac_metrics = metrics::evaluate_image(
            apply_scale(disp, out.ransac_scale, cfg.depth_cap()), gt, eval_cfg);
        try {
            const AffineScale lsq = fit_affine_lsq(pairs);
            out.lsq_metrics =
                metrics::evaluate_image(apply_scale(disp, lsq, cfg.depth_cap()), gt, eval_cfg);
            out.lsq_ok = true;
        } catch (const std::exception& e) {
            out.lsq_error = e.what();
        }
        stage1[i] = std::move(out);
    });

    std::vector<AffineScale> good_scales;
    for (const auto& r : stage1)
        if (r)
            good_scales.push_back(r->ransac_scale);
    if (good_scales.empty()) {
        log_error("ablate: no record produced a usable fit");
        return kExitTotalFailure;
    }
    const AffineScale fixed = mean_scale(good_scales);

    metrics::DatasetEvaluator agg_ransac, agg_lsq, agg_fixed;
    for (size_t i = 0; i < n; ++i) {
        if (!stage1[i])
            continue;
        const io::ManifestRecord& rec = m.records[i];
        try {
            const RasterMap disp =
                io::load_map_auto(rec.disparity_path, MapKind::AffineDisparity);
            const RasterMap gt = io::load_map_auto(rec.gt_depth_path, MapKind::MetricDepth);
            const metrics::ImageMetrics fx =
                metrics::evaluate_image(fixed_rescale(disp, fixed, cfg.depth_cap()), gt, eval_cfg);
            agg_fixed.add({rec.name, fx, fixed});
        } catch (const std::exception& e) {
            if (errors[i].empty())
                errors[i] = e.what();
            continue;
        }
        agg_ransac.add({rec.name, stage1[i]->ransac_metrics, stage1[i]->ransac_scale});
        if (stage1[i]->lsq_ok)
            agg_lsq.add({rec.name, stage1[i]->lsq_metrics, std::nullopt});
        else
            log_warn("record '%s': least-squares variant failed: %s", rec.name.c_str(),
                     stage1[i]->lsq_error.c_str());
    }

    const metrics::EvalReport rep_ransac = agg_ransac.finalize();
    const metrics::EvalReport rep_lsq = agg_lsq.finalize();
    const metrics::EvalReport rep_fixed = agg_fixed.finalize();

    char line[256];
    std::string table;
    std::snprintf(line, sizeof(line), "%-16s %8s %8s %8s %8s %8s %9s %8s\n", "variant", "d1",
                  "d2", "d3", "AbsRel", "RMSE", "RMSE_log", "log10");
    table += line;
    const auto row = [&](const char* name, const metrics::EvalReport& r) {
        std::snprintf(line, sizeof(line), "%-16s %8.3f %8.3f %8.3f %8.3f %8.3f %9.3f %8.3f\n",
                      name, r.delta1, r.delta2, r.delta3, r.abs_rel, r.rmse, r.rmse_log, r.log10);
        table += line;
    };
    row("ransac", rep_ransac);
    row("no_ransac", rep_lsq);
    row("fixed_mean", rep_fixed);
    std::fputs(table.c_str(), stdout);

    json out;
    out["ransac"] = rep_ransac;
    out["no_ransac"] = rep_lsq;
    out["fixed_mean"] = rep_fixed;
    out["mean_scale"] = fixed;
    write_json(out, cfg.out_dir / "ablate.json");
    write_text(table, cfg.out_dir / "ablate.txt");

    return summarize(m, errors, "ablate");
} catch (const std::exception& e) {
    log_error("ablate: %s", e.what());
    return kExitUsage;
}

int cmd_simulate(RunConfig cfg) try {
    const io::DatasetManifest m = io::load_manifest(cfg.manifest_path);
    adopt_manifest_profile(cfg, m);
    cfg.provider.kind = ProviderSpec::Kind::Lidar;
    validate_for_provider(m, cfg, /*needs_disparity=*/false, /*needs_gt=*/true);
    fs::create_directories(cfg.out_dir);

    const std::vector<std::string> errors =
        for_each_record(m.records.size(), cfg.jobs, [&](size_t i) {
            const std::vector<ReferencePoint> refs = provider_refpoints(m, i, cfg);
            io::save_refpoints(refs, cfg.out_dir / (m.records[i].name + "_refs.txt"));
            log_debug("record '%s': %zu simulated points", m.records[i].name.c_str(),
                      refs.size());
        });
    return summarize(m, errors, "simulate");
} catch (const std::exception& e) {
    log_error("simulate: %s", e.what());
    return kExitUsage;
}

int cmd_sgm(RunConfig cfg) try {
    const io::DatasetManifest m = io::load_manifest(cfg.manifest_path);
    adopt_manifest_profile(cfg, m);
    cfg.provider.kind = ProviderSpec::Kind::Stereo;
    validate_for_provider(m, cfg, /*needs_disparity=*/false, /*needs_gt=*/false);
    fs::create_directories(cfg.out_dir);

    const std::vector<std::string> errors =
        for_each_record(m.records.size(), cfg.jobs, [&](size_t i) {
            const io::ManifestRecord& rec = m.records[i];
            const ImageU8 left = io::load_image_png(rec.left_image_path);
            const ImageU8 right = io::load_image_png(rec.right_image_path);
            sgm::SgmConfig sc;
            const RasterMap disp = sgm::compute_disparity(left, right, sc);
            io::save_pfm(disp, cfg.out_dir / (rec.name + "_sgm.pfm"));
            if (cfg.write_png16)
                io::save_disparity_png16(disp, cfg.out_dir / (rec.name + "_sgm.png"));
            sgm::StereoRig rig{m.intrinsics_for(i), *m.baseline_m};
            io::save_refpoints(
                sgm::stereo_refpoints(disp, rig, cfg.stereo_stride, sc.min_disparity_px),
                cfg.out_dir / (rec.name + "_refs.txt"));
        });
    return summarize(m, errors, "sgm");
} catch (const std::exception& e) {
    log_error("sgm: %s", e.what());
    return kExitUsage;
}

int cmd_triangulate(RunConfig cfg) try {
    const io::DatasetManifest m = io::load_manifest(cfg.manifest_path);
    adopt_manifest_profile(cfg, m);
    cfg.provider.kind = ProviderSpec::Kind::Sfm;
    validate_for_provider(m, cfg, /*needs_disparity=*/false, /*needs_gt=*/false);
    fs::create_directories(cfg.out_dir);

    const std::vector<std::string> errors =
        for_each_record(m.records.size(), cfg.jobs, [&](size_t i) {
            const io::ManifestRecord& rec = m.records[i];
            const RigidPose rel = io::load_poses(rec.pose_path).front();
            sfm::GateConfig gate{cfg.min_translation_m, cfg.rotation_threshold_deg,
                                 parse_gate_mode(cfg.gate_mode)};
            if (!sfm::gate_pair(rel, gate)) {
                // A rejected pair is the gate working, not a failure.
                log_info("record '%s': pose gate rejected the pair (t=%.2fm rot=%.2fdeg)",
                         rec.name.c_str(), translation_norm_m(rel), rotation_angle_deg(rel));
                return;
            }
            const CameraIntrinsics& K = m.intrinsics_for(i);
            const std::vector<sfm::Correspondence> matches = io::load_matches(rec.matches_path);
            const std::vector<ReferencePoint> refs =
                sfm::sfm_refpoints(sfm::triangulate(matches, K, rel), K);
            io::save_refpoints(refs, cfg.out_dir / (rec.name + "_refs.txt"));
            log_debug("record '%s': %zu/%zu matches triangulated", rec.name.c_str(), refs.size(),
                      matches.size());
        });
    return summarize(m, errors, "triangulate");
} catch (const std::exception& e) {
    log_error("triangulate: %s", e.what());
    return kExitUsage;
}

namespace {

// Piecewise fronto-parallel scene with integer stereo disparities: vertical
// bands in the left view, right view forward-warped band by band.
struct BandedScene {
    RasterMap gt;
    ImageU8 left;
    ImageU8 right;
};

BandedScene make_banded_stereo(int width, int height, const CameraIntrinsics& K,
                               double baseline_m, double min_depth, double max_depth,
                               uint64_t seed) {
    const double fxb = K.fx * baseline_m;
    const int d_lo = std::max(2, static_cast<int>(std::ceil(fxb / max_depth)));
    int d_hi = std::min(static_cast<int>(std::floor(fxb / min_depth)), width / 4);
    d_hi = std::max(d_hi, d_lo + 1);

    const int n_bands = 6;
    BandedScene scene;
    scene.gt = RasterMap(width, height, MapKind::MetricDepth);
    scene.left = synth::make_textured_image(width, height, seed);
    scene.right = synth::make_textured_image(width, height, seed ^ 0x77);

    const int band_w = (width + n_bands - 1) / n_bands;
    for (int x = 0; x < width; ++x) {
        const int band = x / band_w;
        const int d = d_hi - band * (d_hi - d_lo) / std::max(1, n_bands - 1);
        const float depth = static_cast<float>(fxb / d);
        for (int y = 0; y < height; ++y) {
            scene.gt.set(x, y, depth);
            const int xr = x - d;
            if (xr >= 0)
                scene.right.at(xr, y) = scene.left.at(x, y);
        }
    }
    return scene;
}

} // namespace

int cmd_synth(const SynthConfig& cfg) try {
    if (cfg.n_images < 1)
        throw InvalidConfigError("synth: need at least one image");
    fs::create_directories(cfg.out_dir);

    CameraIntrinsics K;
    K.width = cfg.width;
    K.height = cfg.height;
    K.fx = K.fy = 0.8 * cfg.width;
    K.cx = (cfg.width - 1) / 2.0;
    K.cy = (cfg.height - 1) / 2.0;
    const double baseline_m = 0.54;

    std::string manifest;
    manifest += "profile: " + std::string(cfg.max_depth_m <= 10.0 ? "indoor" : "outdoor") + "\n";
    if (cfg.stereo)
        manifest += "baseline: 0.54\n";
    {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "fx: %.17g\nfy: %.17g\ncx: %.17g\ncy: %.17g\nsize: %d %d\n",
                      K.fx, K.fy, K.cx, K.cy, K.width, K.height);
        manifest += buf;
    }

    for (int i = 0; i < cfg.n_images; ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "img_%04d", i);

        // Linear ramp over [-1, 1] spreads the drifted parameters around the base.
        const double ramp = cfg.n_images > 1 ? 2.0 * i / (cfg.n_images - 1) - 1.0 : 0.0;
        const double alpha_i = cfg.alpha * (1.0 + cfg.drift * ramp);
        const double beta_i = cfg.beta * (1.0 + cfg.drift * ramp);

        RasterMap gt;
        if (cfg.stereo) {
            const BandedScene scene =
                make_banded_stereo(cfg.width, cfg.height, K, baseline_m, cfg.min_depth_m,
                                   cfg.max_depth_m, derive_seed(cfg.seed, i));
            gt = scene.gt;
            io::save_image_png(scene.left, cfg.out_dir / (std::string(name) + "_left.png"));
            io::save_image_png(scene.right, cfg.out_dir / (std::string(name) + "_right.png"));
        } else {
            synth::SceneConfig sc;
            sc.width = cfg.width;
            sc.height = cfg.height;
            sc.min_depth_m = cfg.min_depth_m;
            sc.max_depth_m = cfg.max_depth_m;
            sc.seed = derive_seed(cfg.seed, i);
            gt = synth::make_depth_map(sc);
        }
        const RasterMap disp = synth::make_disparity(gt, alpha_i, beta_i);
        io::save_pfm(gt, cfg.out_dir / (std::string(name) + "_gt.pfm"));
        io::save_pfm(disp, cfg.out_dir / (std::string(name) + "_disp.pfm"));

        // Reference points from the simulated beams, optionally corrupted.
        lidar::BeamConfig bc;
        bc.n_beams = std::min(cfg.beams, cfg.height);
        bc.min_depth_m = 0.05;
        bc.max_depth_m = cfg.max_depth_m * 4.0;
        bc.seed = derive_seed(cfg.seed, 1000 + i);
        std::vector<ReferencePoint> refs = lidar::simulate_beams(gt, bc);
        if (cfg.outlier_frac > 0.0 || cfg.noise_sigma > 0.0) {
            synth::CorruptionConfig cc;
            cc.outlier_fraction = cfg.outlier_frac;
            cc.noise_sigma = cfg.noise_sigma;
            cc.junk_min_depth_m = 0.3;
            cc.junk_max_depth_m = 3.0;
            cc.seed = derive_seed(cfg.seed, 2000 + i);
            refs = synth::corrupt_refpoints(std::move(refs), cc);
        }
        io::save_refpoints(refs, cfg.out_dir / (std::string(name) + "_refs.txt"));

        if (cfg.sfm) {
            // Exact correspondences against the ground truth, one pose per record.
            RigidPose rel;
            rel.translation = Eigen::Vector3d(0.15, 0.0, 2.0);
            const double yaw = 1.0 * M_PI / 180.0;
            rel.rotation = Eigen::Matrix3d{{std::cos(yaw), 0.0, std::sin(yaw)},
                                           {0.0, 1.0, 0.0},
                                           {-std::sin(yaw), 0.0, std::cos(yaw)}};
            std::mt19937_64 rng(derive_seed(cfg.seed, 3000 + i));
            const RigidPose rel_inv = invert_pose(rel);
            std::vector<sfm::Correspondence> matches;
            int guard = 0;
            while (static_cast<int>(matches.size()) < 150 && ++guard < 20000) {
                const int x = static_cast<int>(uniform_index(rng, cfg.width));
                const int y = static_cast<int>(uniform_index(rng, cfg.height));
                if (!gt.is_valid(x, y))
                    continue;
                const Eigen::Vector3d x_b = backproject(x, y, gt.value(x, y), K);
                const Eigen::Vector3d x_a = transform_point(rel_inv, x_b);
                if (!(x_a.z() > kDefaultZMin))
                    continue;
                const double u1 = K.fx * x_a.x() / x_a.z() + K.cx;
                const double v1 = K.fy * x_a.y() / x_a.z() + K.cy;
                if (u1 < 0.0 || u1 > K.width - 1 || v1 < 0.0 || v1 > K.height - 1)
                    continue;
                matches.push_back({u1, v1, static_cast<double>(x), static_cast<double>(y), 1.0});
            }
            io::save_matches(matches, cfg.out_dir / (std::string(name) + "_matches.txt"));
            io::save_poses({rel}, cfg.out_dir / (std::string(name) + "_pose.txt"));
        }

        manifest += "\n[record]\n";
        manifest += "name: " + std::string(name) + "\n";
        manifest += "disparity: " + std::string(name) + "_disp.pfm\n";
        manifest += "gt_depth: " + std::string(name) + "_gt.pfm\n";
        manifest += "refpoints: " + std::string(name) + "_refs.txt\n";
        if (cfg.stereo) {
            manifest += "left_image: " + std::string(name) + "_left.png\n";
            manifest += "right_image: " + std::string(name) + "_right.png\n";
        }
        if (cfg.sfm) {
            manifest += "matches: " + std::string(name) + "_matches.txt\n";
            manifest += "pose: " + std::string(name) + "_pose.txt\n";
        }
    }

    write_text(manifest, cfg.out_dir / "manifest.txt");
    log_info("synth: wrote %d records to %s", cfg.n_images, cfg.out_dir.string().c_str());
    return kExitOk;
} catch (const std::exception& e) {
    log_error("synth: %s", e.what());
    return kExitUsage;
}

} // namespace rescale::cli
