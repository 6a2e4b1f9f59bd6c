#include "commands.hpp"
#include "log.hpp"

#include <CLI11.hpp>

#include <string>
#include <vector>

// Subcommands:
//   rescale      fit (alpha, beta) per image and write metric depth maps
//   eval         compare predicted depth against ground truth
//   ablate       ransac / plain least-squares / fixed mean-parameter variants
//   simulate     run the lidar provider standalone (reference point files)
//   sgm          run the stereo provider standalone (disparity + points)
//   triangulate  run the sfm provider standalone (reference point files)
//   synth        generate a self-consistent synthetic dataset

namespace {

using rescale::cli::RunConfig;

void add_common_options(CLI::App* cmd, RunConfig& cfg, std::string& provider,
                        std::string& fixed_scale) {
    cmd->add_option("--manifest", cfg.manifest_path, "dataset manifest file")->required();
    cmd->add_option("--out", cfg.out_dir, "output directory");
    cmd->add_option("--seed", cfg.seed, "seed for all stochastic components");
    cmd->add_option("--jobs", cfg.jobs, "parallel manifest records")
        ->check(CLI::Range(1, 256));
    cmd->add_option("--provider", provider, "lidar:B | stereo | sfm | external");
    cmd->add_option("--beams", cfg.provider.beams, "beam count for the lidar provider")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--ransac-iters", cfg.ransac_iters, "RANSAC iterations")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--inlier-frac", cfg.inlier_frac,
                    "inlier threshold as a fraction of median inverse depth");
    cmd->add_flag("--no-ransac", cfg.no_ransac, "plain least squares instead of RANSAC");
    cmd->add_option("--fixed-scale", fixed_scale, "alpha,beta: skip fitting entirely");
    cmd->add_option("--profile", cfg.profile, "indoor | outdoor | custom");
    cmd->add_option("--min-depth", cfg.min_depth_m, "custom profile: near cap/range (m)");
    cmd->add_option("--max-depth", cfg.max_depth_m, "custom profile: far cap/range (m)");
    cmd->add_flag("--eigen-crop", cfg.eigen_crop, "apply the standard evaluation crop");
    cmd->add_flag("--clamp-pred", cfg.clamp_pred, "clamp predictions into the range before eval");
    cmd->add_flag("--png16", cfg.write_png16, "also write 16-bit PNG outputs");
    cmd->add_option("--stride", cfg.stereo_stride, "stereo provider: every n-th valid pixel")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--min-translation", cfg.min_translation_m, "sfm gate threshold (m)");
    cmd->add_option("--rotation-threshold", cfg.rotation_threshold_deg,
                    "sfm gate threshold (deg)");
    cmd->add_option("--gate-mode", cfg.gate_mode, "translation | either | both");
}

bool apply_provider_and_scale(RunConfig& cfg, const std::string& provider,
                              const std::string& fixed_scale) {
    try {
        if (!provider.empty())
            cfg.provider = rescale::cli::parse_provider(provider, cfg.provider.beams);
        if (!fixed_scale.empty()) {
            const size_t comma = fixed_scale.find(',');
            if (comma == std::string::npos)
                throw rescale::InvalidConfigError("--fixed-scale expects 'alpha,beta'");
            rescale::AffineScale s;
            s.alpha = std::stod(fixed_scale.substr(0, comma));
            s.beta = std::stod(fixed_scale.substr(comma + 1));
            cfg.fixed_scale = s;
        }
    } catch (const std::exception& e) {
        rescale::cli::log_error("%s", e.what());
        return false;
    }
    return true;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Metric depth from affine-invariant disparity via sparse reference points"};
    app.require_subcommand(1);

    RunConfig cfg;
    cfg.profile.clear(); // empty = take the manifest's profile, else outdoor
    std::string provider, fixed_scale;

    CLI::App* rescale_cmd = app.add_subcommand("rescale", "rescale disparity maps to metric depth");
    CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate predicted depth against ground truth");
    CLI::App* ablate_cmd = app.add_subcommand("ablate", "compare ransac / no-ransac / fixed-mean");
    CLI::App* simulate_cmd = app.add_subcommand("simulate", "lidar provider standalone");
    CLI::App* sgm_cmd = app.add_subcommand("sgm", "stereo provider standalone");
    CLI::App* tri_cmd = app.add_subcommand("triangulate", "sfm provider standalone");
    for (CLI::App* cmd : {rescale_cmd, eval_cmd, ablate_cmd, simulate_cmd, sgm_cmd, tri_cmd})
        add_common_options(cmd, cfg, provider, fixed_scale);
    eval_cmd->add_option("--pred-dir", cfg.pred_dir,
                         "directory holding <name>_depth.pfm predictions (default --out)");

    rescale::cli::SynthConfig synth_cfg;
    CLI::App* synth_cmd = app.add_subcommand("synth", "generate a synthetic dataset");
    synth_cmd->add_option("--out", synth_cfg.out_dir, "output directory")->required();
    synth_cmd->add_option("--n-images", synth_cfg.n_images, "number of records")
        ->check(CLI::PositiveNumber);
    synth_cmd->add_option("--width", synth_cfg.width, "image width")->check(CLI::PositiveNumber);
    synth_cmd->add_option("--height", synth_cfg.height, "image height")
        ->check(CLI::PositiveNumber);
    synth_cmd->add_option("--alpha", synth_cfg.alpha, "true scale");
    synth_cmd->add_option("--beta", synth_cfg.beta, "true offset");
    synth_cmd->add_option("--drift", synth_cfg.drift, "relative (alpha, beta) drift across images");
    synth_cmd->add_option("--outliers", synth_cfg.outlier_frac, "fraction of junk refpoints");
    synth_cmd->add_option("--noise", synth_cfg.noise_sigma, "relative noise on inlier 1/depth");
    synth_cmd->add_option("--beams", synth_cfg.beams, "beams for the refpoints files")
        ->check(CLI::PositiveNumber);
    synth_cmd->add_option("--seed", synth_cfg.seed, "generator seed");
    synth_cmd->add_flag("--stereo", synth_cfg.stereo, "also write a rectified stereo pair");
    synth_cmd->add_flag("--sfm", synth_cfg.sfm, "also write pose + correspondence files");
    synth_cmd->add_option("--min-depth", synth_cfg.min_depth_m, "scene near bound (m)");
    synth_cmd->add_option("--max-depth", synth_cfg.max_depth_m, "scene far bound (m)");

    CLI11_PARSE(app, argc, argv);

    if (synth_cmd->parsed())
        return rescale::cli::cmd_synth(synth_cfg);

    if (!apply_provider_and_scale(cfg, provider, fixed_scale))
        return rescale::cli::kExitUsage;

    if (rescale_cmd->parsed())
        return rescale::cli::cmd_rescale(cfg);
    if (eval_cmd->parsed())
        return rescale::cli::cmd_eval(cfg);
    if (ablate_cmd->parsed())
        return rescale::cli::cmd_ablate(cfg);
    if (simulate_cmd->parsed())
        return rescale::cli::cmd_simulate(cfg);
    if (sgm_cmd->parsed())
        return rescale::cli::cmd_sgm(cfg);
    if (tri_cmd->parsed())
        return rescale::cli::cmd_triangulate(cfg);
    return rescale::cli::kExitUsage;
}
