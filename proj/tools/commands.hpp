#pragma once

#include "rescale/io.hpp"
#include "rescale/metrics.hpp"
#include "rescale/rescale.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace rescale::cli {

struct ProviderSpec {
    enum class Kind { Lidar, Stereo, Sfm, External };
    Kind kind = Kind::Lidar;
    int beams = 16;
};

// "lidar:16" | "stereo" | "sfm" | "external"; bare "lidar" keeps default_beams
ProviderSpec parse_provider(const std::string& text, int default_beams = 16);

struct RunConfig {
    std::filesystem::path manifest_path;
    ProviderSpec provider;
    std::filesystem::path out_dir = "out";
    std::filesystem::path pred_dir; // eval input; defaults to out_dir
    uint64_t seed = 0;
    int jobs = 1;

    // fitting
    int ransac_iters = 1000;
    double inlier_frac = 0.05;
    bool no_ransac = false;
    std::optional<AffineScale> fixed_scale;

    // depth range / evaluation profile
    std::string profile = "outdoor"; // indoor | outdoor | custom
    double min_depth_m = 0.1;
    double max_depth_m = 80.0;
    bool eigen_crop = false;
    bool clamp_pred = false;

    bool write_png16 = false;

    // provider knobs
    int stereo_stride = 8;
    double min_translation_m = 1.5;
    double rotation_threshold_deg = 5.0;
    std::string gate_mode = "translation"; // translation | either | both

    DepthCap depth_cap() const;
    metrics::EvalConfig eval_config() const;
    void resolve_profile(); // applies the named profile to the range fields
};

int cmd_rescale(RunConfig cfg);
int cmd_eval(RunConfig cfg);
int cmd_ablate(RunConfig cfg);
int cmd_simulate(RunConfig cfg);
int cmd_sgm(RunConfig cfg);
int cmd_triangulate(RunConfig cfg);

struct SynthConfig {
    std::filesystem::path out_dir = "synth";
    int n_images = 3;
    int width = 96;
    int height = 64;
    double alpha = 1.5;
    double beta = 0.05;
    double drift = 0.0; // relative spread of (alpha, beta) across images
    double outlier_frac = 0.0;
    double noise_sigma = 0.0;
    int beams = 16;
    uint64_t seed = 0;
    bool stereo = false;
    bool sfm = false;
    double min_depth_m = 2.0;
    double max_depth_m = 10.0;
};

int cmd_synth(const SynthConfig& cfg);

// exit codes
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitPartial = 2;
inline constexpr int kExitTotalFailure = 3;

} // namespace rescale::cli
