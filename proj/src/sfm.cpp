#include "rescale/sfm.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace rescale::sfm {

void GateConfig::validate() const {
    if (!(min_translation_m > 0.0) || !(rotation_threshold_deg > 0.0))
        throw InvalidConfigError("gate: thresholds must be positive");
}

bool gate_pair(const RigidPose& rel, const GateConfig& cfg) {
    cfg.validate();
    const bool trans_ok = translation_norm_m(rel) >= cfg.min_translation_m;
    const bool rot_ok = rotation_angle_deg(rel) >= cfg.rotation_threshold_deg;
    switch (cfg.mode) {
    case GateMode::TranslationOnly: return trans_ok;
    case GateMode::TranslationOrRotation: return trans_ok || rot_ok;
    case GateMode::TranslationAndRotation: return trans_ok && rot_ok;
    }
    return false;
}

namespace {

struct PixelError {
    bool behind = false;
    double err_px = 0.0;
};

PixelError reprojection_error(const Eigen::Vector3d& x_cam, const CameraIntrinsics& K, double u,
                              double v, double z_min) {
    PixelError e;
    if (!(x_cam.z() > z_min)) {
        e.behind = true;
        return e;
    }
    const double pu = K.fx * x_cam.x() / x_cam.z() + K.cx;
    const double pv = K.fy * x_cam.y() / x_cam.z() + K.cy;
    e.err_px = std::hypot(pu - u, pv - v);
    return e;
}

} // namespace

std::vector<Eigen::Vector3d> triangulate(const std::vector<Correspondence>& matches,
                                         const CameraIntrinsics& K, const RigidPose& rel,
                                         const TriangulationConfig& cfg) {
    K.validate();

    std::vector<Eigen::Vector3d> out;
    out.reserve(matches.size());

    const Eigen::Matrix3d& R = rel.rotation;
    const Eigen::Vector3d& t = rel.translation;
    // Camera B center expressed in frame A, for the parallax test.
    const Eigen::Vector3d center_b_in_a = -(R.transpose() * t);
    const double cos_min_parallax = std::cos(cfg.min_parallax_deg * M_PI / 180.0);

    for (const Correspondence& m : matches) {
        // Normalized image coordinates.
        const double x1 = (m.u1 - K.cx) / K.fx;
        const double y1 = (m.v1 - K.cy) / K.fy;
        const double x2 = (m.u2 - K.cx) / K.fx;
        const double y2 = (m.v2 - K.cy) / K.fy;

        // DLT on the two normalized projections: P_A = [I | 0], P_B = [R | t].
        Eigen::Matrix<double, 3, 4> pb;
        pb << R, t;
        Eigen::Matrix4d A;
        A.row(0) << -1.0, 0.0, x1, 0.0;
        A.row(1) << 0.0, -1.0, y1, 0.0;
        A.row(2) = x2 * pb.row(2) - pb.row(0);
        A.row(3) = y2 * pb.row(2) - pb.row(1);

        const Eigen::JacobiSVD<Eigen::Matrix4d> svd(A, Eigen::ComputeFullV);
        const Eigen::Vector4d xh = svd.matrixV().col(3);
        if (std::abs(xh(3)) < 1e-12)
            continue; // point at infinity
        const Eigen::Vector3d x_a = xh.head<3>() / xh(3);
        const Eigen::Vector3d x_b = R * x_a + t;

        // Cheirality in both frames.
        const PixelError e1 = reprojection_error(x_a, K, m.u1, m.v1, cfg.z_min);
        const PixelError e2 = reprojection_error(x_b, K, m.u2, m.v2, cfg.z_min);
        if (e1.behind || e2.behind)
            continue;
        if (e1.err_px > cfg.max_reprojection_px || e2.err_px > cfg.max_reprojection_px)
            continue;

        // Parallax between the two viewing rays, measured in frame A.
        const Eigen::Vector3d ray_a = x_a.normalized();
        const Eigen::Vector3d ray_b = (x_a - center_b_in_a).normalized();
        if (ray_a.dot(ray_b) > cos_min_parallax)
            continue;

        out.push_back(x_b);
    }

    if (out.empty())
        throw EmptyResultError("triangulate: no correspondence survived the filters");
    return out;
}

std::vector<ReferencePoint> sfm_refpoints(const std::vector<Eigen::Vector3d>& points_b,
                                          const CameraIntrinsics& K) {
    std::vector<ReferencePoint> refs;
    for (const ProjectedPoint& p : project_points(points_b, K))
        refs.push_back({p.u, p.v, p.depth, PointSource::Sfm, 1.0});
    return refs;
}

namespace {

struct Corner {
    int x = 0;
    int y = 0;
    double response = 0.0;
};

std::vector<Corner> harris_corners(const ImageU8& img, const MatchConfig& cfg) {
    const int w = img.width;
    const int h = img.height;
    std::vector<double> ixx(static_cast<size_t>(w) * h, 0.0);
    std::vector<double> iyy(ixx.size(), 0.0);
    std::vector<double> ixy(ixx.size(), 0.0);

    // Sobel gradients with clamped borders.
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const auto px = [&](int dx, int dy) {
                return static_cast<double>(img.at_clamped(x + dx, y + dy));
            };
            const double gx = (px(1, -1) + 2.0 * px(1, 0) + px(1, 1)) -
                              (px(-1, -1) + 2.0 * px(-1, 0) + px(-1, 1));
            const double gy = (px(-1, 1) + 2.0 * px(0, 1) + px(1, 1)) -
                              (px(-1, -1) + 2.0 * px(0, -1) + px(1, -1));
            const size_t i = static_cast<size_t>(y) * w + x;
            ixx[i] = gx * gx;
            iyy[i] = gy * gy;
            ixy[i] = gx * gy;
        }
    }

    // 3x3 box sum of the structure tensor, then the Harris response.
    std::vector<Corner> candidates;
    const int margin = std::max(cfg.patch_size / 2, cfg.nms_radius_px);
    double max_response = 0.0;
    std::vector<double> response(ixx.size(), 0.0);
    for (int y = 1; y + 1 < h; ++y) {
        for (int x = 1; x + 1 < w; ++x) {
            double sxx = 0.0, syy = 0.0, sxy = 0.0;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    const size_t i = static_cast<size_t>(y + dy) * w + (x + dx);
                    sxx += ixx[i];
                    syy += iyy[i];
                    sxy += ixy[i];
                }
            const double det = sxx * syy - sxy * sxy;
            const double tr = sxx + syy;
            const double r = det - cfg.harris_k * tr * tr;
            response[static_cast<size_t>(y) * w + x] = r;
            max_response = std::max(max_response, r);
        }
    }
    if (max_response <= 0.0)
        return {};

    const double min_response = cfg.min_response_frac * max_response;
    for (int y = margin; y < h - margin; ++y)
        for (int x = margin; x < w - margin; ++x) {
            const double r = response[static_cast<size_t>(y) * w + x];
            if (r > min_response)
                candidates.push_back({x, y, r});
        }

    // Strongest first; deterministic tie-break on position.
    std::sort(candidates.begin(), candidates.end(), [](const Corner& a, const Corner& b) {
        if (a.response != b.response)
            return a.response > b.response;
        return std::pair(a.y, a.x) < std::pair(b.y, b.x);
    });

    std::vector<Corner> kept;
    for (const Corner& c : candidates) {
        if (static_cast<int>(kept.size()) >= cfg.max_corners)
            break;
        bool suppressed = false;
        for (const Corner& k : kept) {
            if (std::abs(k.x - c.x) <= cfg.nms_radius_px &&
                std::abs(k.y - c.y) <= cfg.nms_radius_px) {
                suppressed = true;
                break;
            }
        }
        if (!suppressed)
            kept.push_back(c);
    }
    return kept;
}

// Zero-mean NCC between two equal-size patches. Returns -2 for flat patches.
double patch_ncc(const ImageU8& a, int ax, int ay, const ImageU8& b, int bx, int by, int patch) {
    const int r = patch / 2;
    const int n = patch * patch;
    double sum_a = 0.0, sum_b = 0.0;
    for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx) {
            sum_a += a.at(ax + dx, ay + dy);
            sum_b += b.at(bx + dx, by + dy);
        }
    const double mean_a = sum_a / n;
    const double mean_b = sum_b / n;
    double num = 0.0, den_a = 0.0, den_b = 0.0;
    for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx) {
            const double va = a.at(ax + dx, ay + dy) - mean_a;
            const double vb = b.at(bx + dx, by + dy) - mean_b;
            num += va * vb;
            den_a += va * va;
            den_b += vb * vb;
        }
    if (den_a <= 0.0 || den_b <= 0.0)
        return -2.0;
    return num / std::sqrt(den_a * den_b);
}

} // namespace

std::vector<Correspondence> detect_and_match(const ImageU8& img_a, const ImageU8& img_b,
                                             const MatchConfig& cfg) {
    if (cfg.patch_size % 2 == 0 || cfg.patch_size < 3)
        throw InvalidConfigError("matcher: patch size must be odd and >= 3");

    const std::vector<Corner> corners_a = harris_corners(img_a, cfg);
    const std::vector<Corner> corners_b = harris_corners(img_b, cfg);
    if (corners_a.empty() || corners_b.empty())
        return {};

    const auto best_two = [&](const Corner& c, const std::vector<Corner>& others,
                              const ImageU8& ia, const ImageU8& ib) {
        int best = -1;
        double best_ncc = -2.0, second_ncc = -2.0;
        for (size_t k = 0; k < others.size(); ++k) {
            const double ncc = patch_ncc(ia, c.x, c.y, ib, others[k].x, others[k].y,
                                         cfg.patch_size);
            if (ncc > best_ncc) {
                second_ncc = best_ncc;
                best_ncc = ncc;
                best = static_cast<int>(k);
            } else if (ncc > second_ncc) {
                second_ncc = ncc;
            }
        }
        return std::tuple(best, best_ncc, second_ncc);
    };

    std::vector<Correspondence> matches;
    for (size_t i = 0; i < corners_a.size(); ++i) {
        const auto [j, ncc, second] = best_two(corners_a[i], corners_b, img_a, img_b);
        if (j < 0 || ncc <= 0.0)
            continue;
        // Ratio filter: the runner-up must be clearly worse.
        if (second > cfg.ncc_ratio * ncc)
            continue;
        // Mutual best match.
        const auto [back, back_ncc, back_second] =
            best_two(corners_b[j], corners_a, img_b, img_a);
        if (back != static_cast<int>(i))
            continue;
        matches.push_back({static_cast<double>(corners_a[i].x),
                           static_cast<double>(corners_a[i].y),
                           static_cast<double>(corners_b[j].x),
                           static_cast<double>(corners_b[j].y), ncc});
    }
    return matches;
}

} // namespace rescale::sfm
