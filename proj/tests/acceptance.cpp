#include "rescale/io.hpp"
#include "rescale/lidar_sim.hpp"
#include "rescale/metrics.hpp"
#include "rescale/rescale.hpp"
#include "rescale/rng.hpp"
#include "rescale/sfm.hpp"
#include "rescale/sgm.hpp"
#include "rescale/synth.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

// Acceptance suite: one pass/fail line per criterion, non-zero exit on any
// failure. Every tolerance is pinned here, in code.

using namespace rescale;
namespace fs = std::filesystem;

namespace {

struct Checker {
    int failed = 0;
    void report(int criterion, const std::string& name, bool ok, const std::string& detail) {
        std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", criterion,
                    name.c_str(), detail.c_str());
        if (!ok)
            ++failed;
    }
    void info(int criterion, const std::string& name, const std::string& detail) {
        std::printf("[INFO] criterion %d: %s (%s)\n", criterion, name.c_str(), detail.c_str());
    }
};

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// ---------------------------------------------------------------- 1 + 2

void affine_recovery_and_ransac_direction(Checker& c) {
    const auto t0 = std::chrono::steady_clock::now();

    constexpr int kImages = 200;
    std::mt19937_64 rng(2024);

    double max_alpha_err = 0.0, max_beta_err = 0.0;
    std::vector<double> noisy_alpha_err;
    int ransac_wins = 0, trials = 0;
    metrics::DatasetEvaluator noisy_eval;
    const metrics::EvalConfig eval_cfg; // 0.1..80, no crop
    const DepthCap cap{0.1, 80.0};

    for (int i = 0; i < kImages; ++i) {
        synth::SceneConfig scene;
        scene.width = 96;
        scene.height = 64;
        scene.min_depth_m = 2.0;
        scene.max_depth_m = 10.0;
        scene.alpha = uniform_range(rng, 0.5, 5.0);
        scene.beta = uniform_range(rng, 0.0, 0.2);
        scene.seed = derive_seed(1, i);
        const RasterMap gt = synth::make_depth_map(scene);
        const RasterMap disp = synth::make_disparity(gt, scene.alpha, scene.beta);

        lidar::BeamConfig beams;
        beams.n_beams = 16;
        const std::vector<ReferencePoint> refs = lidar::simulate_beams(gt, beams);

        RescaleConfig cfg;
        cfg.ransac.seed = derive_seed(2, i);
        cfg.cap = cap;

        // Noiseless recovery. Beta error is normalized by a quarter of its
        // admissible range when beta_0 sits near zero.
        const AffineScale clean = rescale_image(disp, refs, cfg).scale;
        max_alpha_err = std::max(max_alpha_err,
                                 std::abs(clean.alpha - scene.alpha) / scene.alpha);
        max_beta_err = std::max(max_beta_err, std::abs(clean.beta - scene.beta) /
                                                  std::max(scene.beta, 0.05));

        // 20% uniform outliers plus 1% Gaussian noise on inlier g.
        synth::CorruptionConfig cc;
        cc.outlier_fraction = 0.20;
        cc.noise_sigma = 0.01;
        cc.junk_min_depth_m = 0.3;
        cc.junk_max_depth_m = 3.0;
        cc.seed = derive_seed(3, i);
        const std::vector<ReferencePoint> noisy = synth::corrupt_refpoints(refs, cc);

        const std::vector<SamplePair> pairs = build_pairs(disp, noisy);
        const AffineScale robust = fit_affine_ransac(pairs, cfg.ransac);
        noisy_alpha_err.push_back(std::abs(robust.alpha - scene.alpha) / scene.alpha);

        metrics::ImageRecord rec;
        rec.name = "img_" + std::to_string(i);
        rec.metrics = metrics::evaluate_image(apply_scale(disp, robust, cap), gt, eval_cfg);
        const double absrel_robust = rec.metrics.abs_rel;
        noisy_eval.add(std::move(rec));

        const AffineScale plain = fit_affine_lsq(pairs);
        const double absrel_plain =
            metrics::evaluate_image(apply_scale(disp, plain, cap), gt, eval_cfg).abs_rel;
        ransac_wins += absrel_robust < absrel_plain;
        ++trials;
    }

    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double med_err = median(noisy_alpha_err);
    const double delta1 = noisy_eval.finalize().delta1;

    char detail[256];
    std::snprintf(detail, sizeof(detail),
                  "clean max rel err alpha %.2e beta %.2e; noisy median alpha err %.4f; "
                  "delta1 %.4f; %.1fs",
                  max_alpha_err, max_beta_err, med_err, delta1, seconds);
    c.report(1, "affine recovery on 200 synthetic images",
             max_alpha_err < 1e-6 && max_beta_err < 1e-6 && med_err < 0.02 && delta1 > 0.99 &&
                 seconds < 30.0,
             detail);

    // Direction of the RANSAC ablation: wins counted on the 20% suite above,
    // collapse demonstrated on sfm-style 30% junk.
    metrics::DatasetEvaluator heavy_on, heavy_off;
    for (int i = 0; i < 60; ++i) {
        synth::SceneConfig scene;
        scene.width = 96;
        scene.height = 64;
        scene.alpha = uniform_range(rng, 0.5, 5.0);
        scene.beta = uniform_range(rng, 0.0, 0.2);
        scene.seed = derive_seed(4, i);
        const RasterMap gt = synth::make_depth_map(scene);
        const RasterMap disp = synth::make_disparity(gt, scene.alpha, scene.beta);
        lidar::BeamConfig beams;
        beams.n_beams = 16;
        const std::vector<ReferencePoint> refs = lidar::simulate_beams(gt, beams);

        synth::CorruptionConfig cc;
        cc.outlier_fraction = 0.30;
        cc.junk_min_depth_m = 0.3;
        cc.junk_max_depth_m = 3.0;
        cc.seed = derive_seed(5, i);
        const std::vector<SamplePair> pairs =
            build_pairs(disp, synth::corrupt_refpoints(refs, cc));

        RansacConfig rc;
        rc.seed = derive_seed(6, i);
        const AffineScale on = fit_affine_ransac(pairs, rc);
        const AffineScale off = fit_affine_lsq(pairs);
        heavy_on.add({"", metrics::evaluate_image(apply_scale(disp, on, cap), gt, eval_cfg),
                      std::nullopt});
        heavy_off.add({"", metrics::evaluate_image(apply_scale(disp, off, cap), gt, eval_cfg),
                       std::nullopt});
    }
    const double d1_on = heavy_on.finalize().delta1;
    const double d1_off = heavy_off.finalize().delta1;

    std::snprintf(detail, sizeof(detail),
                  "AbsRel wins %d/%d; heavy 30%% junk delta1 on %.3f off %.3f", ransac_wins,
                  trials, d1_on, d1_off);
    c.report(2, "RANSAC ablation direction",
             ransac_wins >= static_cast<int>(0.95 * trials) && d1_off < 0.5 && d1_on > 0.95,
             detail);
}

// ---------------------------------------------------------------- 3

void fixed_vs_dynamic(Checker& c) {
    // Far-field scenes make a +-20% parameter drift visible in depth space.
    const DepthCap cap{0.1, 80.0};
    const metrics::EvalConfig eval_cfg;
    constexpr int kImages = 24;

    std::vector<AffineScale> per_image_scales;
    std::vector<RasterMap> gts, disps;
    for (int i = 0; i < kImages; ++i) {
        synth::SceneConfig scene;
        scene.width = 96;
        scene.height = 64;
        scene.min_depth_m = 2.0;
        scene.max_depth_m = 60.0;
        scene.seed = derive_seed(7, i);
        const double ramp = 2.0 * i / (kImages - 1) - 1.0;
        const double alpha_i = 1.5 * (1.0 + 0.2 * ramp);
        const double beta_i = 0.05 * (1.0 + 0.2 * ramp);
        gts.push_back(synth::make_depth_map(scene));
        disps.push_back(synth::make_disparity(gts.back(), alpha_i, beta_i));

        lidar::BeamConfig beams;
        beams.n_beams = 16;
        const auto refs = lidar::simulate_beams(gts.back(), beams);
        RescaleConfig cfg;
        cfg.ransac.seed = derive_seed(8, i);
        cfg.cap = cap;
        per_image_scales.push_back(rescale_image(disps.back(), refs, cfg).scale);
    }

    const AffineScale fixed = mean_scale(per_image_scales);
    metrics::DatasetEvaluator dyn_eval, fixed_eval;
    for (int i = 0; i < kImages; ++i) {
        dyn_eval.add({"", metrics::evaluate_image(
                              apply_scale(disps[i], per_image_scales[i], cap), gts[i], eval_cfg),
                      std::nullopt});
        fixed_eval.add({"", metrics::evaluate_image(fixed_rescale(disps[i], fixed, cap), gts[i],
                                                    eval_cfg),
                        std::nullopt});
    }
    const metrics::EvalReport dyn = dyn_eval.finalize();
    const metrics::EvalReport fix = fixed_eval.finalize();

    char detail[256];
    std::snprintf(detail, sizeof(detail),
                  "per-image d1 %.4f AbsRel %.4f RMSE %.3f | fixed d1 %.4f AbsRel %.4f RMSE %.3f",
                  dyn.delta1, dyn.abs_rel, dyn.rmse, fix.delta1, fix.abs_rel, fix.rmse);
    c.report(3, "per-image rescaling strictly beats mean-parameter rescaling",
             dyn.delta1 > fix.delta1 && dyn.abs_rel < fix.abs_rel && dyn.rmse < fix.rmse,
             detail);
}

// ---------------------------------------------------------------- 4

metrics::ImageMetrics brute_force_metrics(const RasterMap& pred, const RasterMap& gt,
                                          const metrics::EvalConfig& cfg) {
    metrics::ImageMetrics m;
    double n = 0;
    for (int y = 0; y < gt.height(); ++y)
        for (int x = 0; x < gt.width(); ++x) {
            if (!pred.is_valid(x, y) || !gt.is_valid(x, y))
                continue;
            const double g = gt.value(x, y);
            if (g < cfg.min_depth_m || g > cfg.max_depth_m)
                continue;
            const double p = pred.value(x, y);
            const double r = std::max(p / g, g / p);
            n += 1;
            m.delta1 += r < 1.25;
            m.delta2 += r < 1.25 * 1.25;
            m.delta3 += r < 1.25 * 1.25 * 1.25;
            m.abs_rel += std::abs(p - g) / g;
            m.rmse += (p - g) * (p - g);
            const double dl = std::log(p) - std::log(g);
            m.rmse_log += dl * dl;
            m.log10 += std::abs(std::log10(p) - std::log10(g));
        }
    m.n_pixels = static_cast<int64_t>(n);
    if (n == 0)
        return m;
    m.delta1 /= n;
    m.delta2 /= n;
    m.delta3 /= n;
    m.abs_rel /= n;
    m.rmse = std::sqrt(m.rmse / n);
    m.rmse_log = std::sqrt(m.rmse_log / n);
    m.log10 /= n;
    return m;
}

void metrics_oracle(Checker& c) {
    std::mt19937_64 rng(4100);
    const metrics::EvalConfig cfg;
    double worst = 0.0;
    bool nesting = true;
    int evaluated = 0;

    for (int i = 0; i < 1000; ++i) {
        RasterMap gt(8, 8, MapKind::MetricDepth);
        RasterMap pred(8, 8, MapKind::MetricDepth);
        for (int y = 0; y < 8; ++y)
            for (int x = 0; x < 8; ++x) {
                if (uniform_double(rng) > 0.15)
                    gt.set(x, y, static_cast<float>(uniform_range(rng, 0.2, 70.0)));
                if (uniform_double(rng) > 0.05)
                    pred.set(x, y, static_cast<float>(uniform_range(rng, 0.2, 70.0)));
            }
        metrics::ImageMetrics a;
        try {
            a = metrics::evaluate_image(pred, gt, cfg);
        } catch (const metrics::EmptyMaskError&) {
            continue;
        }
        const metrics::ImageMetrics b = brute_force_metrics(pred, gt, cfg);
        ++evaluated;
        worst = std::max({worst, std::abs(a.delta1 - b.delta1), std::abs(a.delta2 - b.delta2),
                          std::abs(a.delta3 - b.delta3), std::abs(a.abs_rel - b.abs_rel),
                          std::abs(a.rmse - b.rmse), std::abs(a.rmse_log - b.rmse_log),
                          std::abs(a.log10 - b.log10)});
        nesting = nesting && a.delta1 <= a.delta2 && a.delta2 <= a.delta3;
    }

    char detail[128];
    std::snprintf(detail, sizeof(detail), "%d map pairs, worst |diff| %.2e, nesting %s",
                  evaluated, worst, nesting ? "holds" : "violated");
    c.report(4, "metrics match the brute-force per-pixel oracle", worst < 1e-12 && nesting,
             detail);
}

// ---------------------------------------------------------------- 5

std::vector<uint32_t> dp_oracle_row(const std::vector<std::vector<uint16_t>>& costs, int p1,
                                    int p2, bool reverse) {
    const int w = static_cast<int>(costs.size());
    const int nd = static_cast<int>(costs[0].size());
    std::vector<std::vector<uint32_t>> L(w, std::vector<uint32_t>(nd, 0));
    for (int step = 0; step < w; ++step) {
        const int x = reverse ? w - 1 - step : step;
        const int px = reverse ? x + 1 : x - 1;
        for (int d = 0; d < nd; ++d) {
            uint32_t value = costs[x][d];
            if (step > 0) {
                uint32_t min_prev = std::numeric_limits<uint32_t>::max();
                for (int k = 0; k < nd; ++k)
                    min_prev = std::min(min_prev, L[px][k]);
                uint32_t best = L[px][d];
                if (d > 0)
                    best = std::min(best, L[px][d - 1] + static_cast<uint32_t>(p1));
                if (d + 1 < nd)
                    best = std::min(best, L[px][d + 1] + static_cast<uint32_t>(p1));
                best = std::min(best, min_prev + static_cast<uint32_t>(p2));
                value += best - min_prev;
            }
            L[x][d] = value;
        }
    }
    std::vector<uint32_t> flat;
    for (int x = 0; x < w; ++x)
        for (int d = 0; d < nd; ++d)
            flat.push_back(L[x][d]);
    return flat;
}

void sgm_correctness(Checker& c) {
    bool shift_ok = true;
    std::string shift_detail;
    for (const int d0 : {3, 9, 17}) {
        const ImageU8 left = synth::make_textured_image(64, 64, 500 + d0);
        const ImageU8 right = synth::shift_image(left, d0, 500 + d0);
        sgm::SgmConfig cfg;
        cfg.max_disparity = 32;
        cfg.subpixel = false;
        const sgm::CensusMap cl = sgm::census_transform(left, cfg.census_window);
        const sgm::CensusMap cr = sgm::census_transform(right, cfg.census_window);
        const RasterMap disp = sgm::wta_disparity(
            sgm::sgm_aggregate(sgm::matching_cost(cl, cr, cfg.max_disparity, cfg.census_window),
                               cfg),
            cfg);
        int exact = 0, total = 0;
        const int margin = cfg.census_window;
        for (int y = margin; y < 64 - margin; ++y)
            for (int x = d0 + margin; x < 64 - margin; ++x) {
                ++total;
                exact += disp.value(x, y) == static_cast<float>(d0);
            }
        const double frac = static_cast<double>(exact) / total;
        shift_ok = shift_ok && frac >= 0.95;
        char buf[32];
        std::snprintf(buf, sizeof(buf), "d0=%d:%.3f ", d0, frac);
        shift_detail += buf;
    }

    // Exhaustive 1-D check against the textbook DP on 50 random volumes.
    std::mt19937_64 rng(5100);
    bool dp_ok = true;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::vector<uint16_t>> costs(8, std::vector<uint16_t>(4));
        sgm::CostVolume cv(8, 1, 4);
        for (int x = 0; x < 8; ++x)
            for (int d = 0; d < 4; ++d) {
                costs[x][d] = static_cast<uint16_t>(uniform_index(rng, 30));
                cv.at(x, 0, d) = costs[x][d];
            }
        sgm::SgmConfig cfg;
        cfg.p1 = 2;
        cfg.p2 = 9;
        cfg.n_paths = 4;
        const sgm::CostVolume agg = sgm::sgm_aggregate(cv, cfg);
        const auto fwd = dp_oracle_row(costs, 2, 9, false);
        const auto bwd = dp_oracle_row(costs, 2, 9, true);
        for (int x = 0; x < 8 && dp_ok; ++x)
            for (int d = 0; d < 4 && dp_ok; ++d)
                dp_ok = agg.at(x, 0, d) == fwd[x * 4 + d] + bwd[x * 4 + d] + 2u * costs[x][d];
    }

    c.report(5, "SGM recovers integer shifts and matches the 1-D DP oracle", shift_ok && dp_ok,
             shift_detail + (dp_ok ? "; DP oracle exact on 50 volumes" : "; DP oracle MISMATCH"));
}

// ---------------------------------------------------------------- 6

void triangulation_correctness(Checker& c) {
    CameraIntrinsics K;
    K.width = 640;
    K.height = 480;
    K.fx = K.fy = 520.0;
    K.cx = 319.5;
    K.cy = 239.5;

    RigidPose rel;
    rel.rotation =
        Eigen::AngleAxisd(3.0 * M_PI / 180.0, Eigen::Vector3d::UnitY()).toRotationMatrix();
    rel.translation = Eigen::Vector3d(1.8, 0.1, 0.4);

    const synth::TwoViewScene scene = synth::make_two_view(K, 50, 2.0, 40.0, rel, 61);
    bool round_trip_ok = scene.points_b.size() == 50;
    double worst = 0.0;
    if (round_trip_ok) {
        sfm::TriangulationConfig cfg;
        cfg.min_parallax_deg = 0.0;
        const auto points = sfm::triangulate(scene.matches, K, rel, cfg);
        round_trip_ok = points.size() == 50;
        if (round_trip_ok)
            for (size_t i = 0; i < points.size(); ++i)
                worst = std::max(worst, (points[i] - scene.points_b[i]).norm());
        round_trip_ok = round_trip_ok && worst < 1e-6;
    }

    // Every correspondence pushed 20 px off the epipolar line must go.
    std::vector<sfm::Correspondence> violated = scene.matches;
    for (auto& m : violated)
        m.v2 += 20.0;
    size_t survivors = 0;
    try {
        survivors = sfm::triangulate(violated, K, rel).size();
    } catch (const sfm::EmptyResultError&) {
        survivors = 0;
    }

    char detail[128];
    std::snprintf(detail, sizeof(detail), "worst error %.2e m; %zu/50 violations survived",
                  worst, survivors);
    c.report(6, "noiseless triangulation round trip and filter rejection",
             round_trip_ok && survivors == 0, detail);
}

// ---------------------------------------------------------------- 7

void lidar_rows(Checker& c) {
    const bool ok =
        lidar::beam_rows(100, 1) == std::vector<int>{50} &&
        lidar::beam_rows(8, 4) == std::vector<int>{1, 3, 5, 7} &&
        lidar::beam_rows(375, 16) ==
            std::vector<int>{11, 35, 58, 82, 105, 128, 152, 175, 199, 222, 246, 269, 292, 316,
                             339, 363} &&
        lidar::beam_rows(375, 32) ==
            std::vector<int>{5,   17,  29,  41,  52,  64,  76,  87,  99,  111, 123,
                             134, 146, 158, 169, 181, 193, 205, 216, 228, 240, 251,
                             263, 275, 287, 298, 310, 322, 333, 345, 357, 369} &&
        lidar::beam_rows(375, 1) == std::vector<int>{187};
    c.report(7, "beam row selection matches hand-computed indices", ok,
             ok ? "all four (H, B) cases plus the single-beam center" : "row index mismatch");
}

// ---------------------------------------------------------------- 8

void full_benchmark_harness(Checker& c) {
    // Running the full-benchmark comparison needs external assets (exported
    // disparity predictions plus the datasets), so nothing numeric is
    // asserted here. The repo must ship the harness pieces and document the
    // expected ranges.
    const fs::path source_dir = RESCALE_SOURCE_DIR;
    const bool kitti = fs::exists(source_dir / "templates" / "kitti_manifest.txt");
    const bool nyu = fs::exists(source_dir / "templates" / "nyu_manifest.txt");
    bool documented = false;
    {
        std::ifstream readme(source_dir / "README.md");
        std::string text((std::istreambuf_iterator<char>(readme)),
                         std::istreambuf_iterator<char>());
        documented = text.find("0.967") != std::string::npos &&
                     text.find("0.060") != std::string::npos &&
                     text.find("2.695") != std::string::npos &&
                     text.find("0.976") != std::string::npos;
    }
    c.info(8, "full-benchmark reproduction needs external assets",
           "not runnable at desk scale; nothing asserted numerically");
    c.report(8, "benchmark harness and manifest templates ship with the repo",
             kitti && nyu && documented,
             "templates present and README states the expected ranges and tolerances");
}

// ---------------------------------------------------------------- 9

int run_cli(const std::string& args) {
    const std::string cmd = std::string(RESCALE_CLI_BIN) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::map<std::string, std::vector<char>> read_tree(const fs::path& root) {
    std::map<std::string, std::vector<char>> out;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file())
            continue;
        std::ifstream in(entry.path(), std::ios::binary);
        out[fs::relative(entry.path(), root).string()] = {std::istreambuf_iterator<char>(in),
                                                          std::istreambuf_iterator<char>()};
    }
    return out;
}

void determinism(Checker& c) {
    const fs::path root =
        fs::temp_directory_path() / ("rescale_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(root);
    fs::create_directories(root);

    bool all_ok = true;
    std::string detail;

    const auto twice = [&](const std::string& name, const std::string& args_template) {
        const fs::path a = root / (name + "_a");
        const fs::path b = root / (name + "_b");
        for (const auto& [out, extra] :
             {std::pair{a, std::string("")}, std::pair{b, std::string(" --jobs 2")}}) {
            std::string args = args_template + extra;
            const std::string marker = "{out}";
            for (size_t pos = args.find(marker); pos != std::string::npos;
                 pos = args.find(marker))
                args.replace(pos, marker.size(), out.string());
            if (run_cli(args) != 0) {
                all_ok = false;
                detail += name + ":run-failed ";
                return;
            }
        }
        if (read_tree(a) != read_tree(b)) {
            all_ok = false;
            detail += name + ":differs ";
        }
    };

    // synth has no --jobs; compare two identical runs.
    const fs::path data = root / "data";
    const std::string synth_args = "synth --n-images 3 --seed 17 --outliers 0.2 --stereo --sfm";
    if (run_cli(synth_args + " --out " + (root / "data_a").string()) != 0 ||
        run_cli(synth_args + " --out " + (root / "data_b").string()) != 0 ||
        read_tree(root / "data_a") != read_tree(root / "data_b")) {
        all_ok = false;
        detail += "synth:differs ";
    }
    fs::rename(root / "data_a", data);
    const std::string manifest = (data / "manifest.txt").string();

    twice("rescale",
          "rescale --manifest " + manifest + " --provider external --seed 5 --out {out}");
    twice("rescale_lidar",
          "rescale --manifest " + manifest + " --provider lidar:8 --seed 5 --out {out}");
    const fs::path pred = root / "rescale_a";
    twice("eval",
          "eval --manifest " + manifest + " --pred-dir " + pred.string() + " --out {out}");
    twice("ablate",
          "ablate --manifest " + manifest + " --provider external --seed 5 --out {out}");
    twice("simulate", "simulate --manifest " + manifest + " --beams 4 --seed 5 --out {out}");
    twice("sgm", "sgm --manifest " + manifest + " --seed 5 --out {out}");
    twice("triangulate", "triangulate --manifest " + manifest + " --seed 5 --out {out}");

    fs::remove_all(root);
    c.report(9, "every subcommand is byte-deterministic (also across --jobs)", all_ok,
             all_ok ? "synth, rescale x2 providers, eval, ablate, simulate, sgm, triangulate"
                    : detail);
}

} // namespace

int main() {
    Checker c;
    affine_recovery_and_ransac_direction(c);
    fixed_vs_dynamic(c);
    metrics_oracle(c);
    sgm_correctness(c);
    triangulation_correctness(c);
    lidar_rows(c);
    full_benchmark_harness(c);
    determinism(c);

    if (c.failed > 0) {
        std::printf("%d criterion(s) FAILED\n", c.failed);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
