#include "rescale/io.hpp"

#include <png.h>

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace rescale::io {

namespace {

std::string pstr(const std::filesystem::path& p) {
    return p.string();
}

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f)
            std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
    FilePtr f(std::fopen(pstr(path).c_str(), mode));
    if (!f)
        throw IoError("cannot open " + pstr(path));
    return f;
}

void mark_by_kind(RasterMap& map, int x, int y, float v) {
    const bool finite = std::isfinite(v);
    bool ok = finite;
    if (finite && map.kind() == MapKind::MetricDepth && !(v > 0.0f))
        ok = false;
    if (finite && map.kind() == MapKind::MetricInverseDepth && !(v >= 0.0f))
        ok = false;
    if (ok)
        map.set(x, y, v);
    else
        map.set_invalid(x, y);
}

} // namespace

// ---------------------------------------------------------------- PNG

namespace {

struct PngReader {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngReader() {
        if (png)
            png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    }
};

struct PngWriter {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngWriter() {
        if (png)
            png_destroy_write_struct(&png, info ? &info : nullptr);
    }
};

struct PngImage {
    int width = 0;
    int height = 0;
    int bit_depth = 0;
    int channels = 0;
    std::vector<uint8_t> data; // native-endian rows, tightly packed
};

PngImage read_png(const std::filesystem::path& path) {
    FilePtr fp = open_file(path, "rb");
    PngReader r;
    r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!r.png)
        throw IoError("png: allocation failed");
    r.info = png_create_info_struct(r.png);
    if (!r.info)
        throw IoError("png: allocation failed");
    if (setjmp(png_jmpbuf(r.png)))
        throw IoError("png: failed to read " + pstr(path));

    png_init_io(r.png, fp.get());
    png_read_info(r.png, r.info);

    PngImage img;
    img.width = static_cast<int>(png_get_image_width(r.png, r.info));
    img.height = static_cast<int>(png_get_image_height(r.png, r.info));
    img.bit_depth = png_get_bit_depth(r.png, r.info);

    const int color = png_get_color_type(r.png, r.info);
    if (color == PNG_COLOR_TYPE_PALETTE)
        png_set_palette_to_rgb(r.png);
    if (color == PNG_COLOR_TYPE_GRAY && img.bit_depth < 8)
        png_set_expand_gray_1_2_4_to_8(r.png);
    png_set_strip_alpha(r.png);
    if (img.bit_depth == 16 && std::endian::native == std::endian::little)
        png_set_swap(r.png);
    png_read_update_info(r.png, r.info);

    img.bit_depth = png_get_bit_depth(r.png, r.info);
    img.channels = png_get_channels(r.png, r.info);
    const size_t row_bytes = png_get_rowbytes(r.png, r.info);
    img.data.resize(row_bytes * img.height);

    std::vector<png_bytep> rows(img.height);
    for (int y = 0; y < img.height; ++y)
        rows[y] = img.data.data() + row_bytes * y;
    png_read_image(r.png, rows.data());
    png_read_end(r.png, nullptr);
    return img;
}

void write_png_gray(const std::filesystem::path& path, int width, int height, int bit_depth,
                    const uint8_t* data) {
    FilePtr fp = open_file(path, "wb");
    PngWriter w;
    w.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!w.png)
        throw IoError("png: allocation failed");
    w.info = png_create_info_struct(w.png);
    if (!w.info)
        throw IoError("png: allocation failed");
    if (setjmp(png_jmpbuf(w.png)))
        throw IoError("png: failed to write " + pstr(path));

    png_init_io(w.png, fp.get());
    png_set_IHDR(w.png, w.info, width, height, bit_depth, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(w.png, w.info);
    if (bit_depth == 16 && std::endian::native == std::endian::little)
        png_set_swap(w.png);

    const size_t row_bytes = static_cast<size_t>(width) * (bit_depth / 8);
    std::vector<png_bytep> rows(height);
    for (int y = 0; y < height; ++y)
        rows[y] = const_cast<png_bytep>(data + row_bytes * y);
    png_write_image(w.png, rows.data());
    png_write_end(w.png, nullptr);
}

} // namespace

RasterMap load_depth_png16(const std::filesystem::path& path, double scale_divisor) {
    const PngImage img = read_png(path);
    if (img.bit_depth != 16 || img.channels != 1)
        throw UnsupportedFormatError("png16: " + pstr(path) + " is not 16-bit grayscale");

    RasterMap map(img.width, img.height, MapKind::MetricDepth);
    const uint16_t* raw = reinterpret_cast<const uint16_t*>(img.data.data());
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            const uint16_t v = raw[static_cast<size_t>(y) * img.width + x];
            if (v != 0) // raw 0 is the invalid sentinel
                map.set(x, y, static_cast<float>(v / scale_divisor));
        }
    return map;
}

void save_depth_png16(const RasterMap& map, const std::filesystem::path& path,
                      double scale_divisor) {
    std::vector<uint16_t> raw(static_cast<size_t>(map.width()) * map.height(), 0);
    for (int y = 0; y < map.height(); ++y)
        for (int x = 0; x < map.width(); ++x) {
            if (!map.is_valid(x, y))
                continue;
            const double v = std::lround(map.value(x, y) * scale_divisor);
            raw[static_cast<size_t>(y) * map.width() + x] =
                static_cast<uint16_t>(std::clamp(v, 0.0, 65535.0));
        }
    write_png_gray(path, map.width(), map.height(), 16,
                   reinterpret_cast<const uint8_t*>(raw.data()));
}

void save_disparity_png16(const RasterMap& map, const std::filesystem::path& path) {
    save_depth_png16(map, path, 256.0);
}

ImageU8 load_image_png(const std::filesystem::path& path) {
    PngImage img = read_png(path);
    if (img.bit_depth != 8)
        throw UnsupportedFormatError("image: " + pstr(path) + " must be 8-bit");
    if (img.channels == 1) {
        ImageU8 out(img.width, img.height);
        out.pixels.assign(img.data.begin(), img.data.end());
        return out;
    }
    if (img.channels == 3)
        return rgb_to_gray(img.width, img.height, img.data);
    throw UnsupportedFormatError("image: " + pstr(path) + " has unsupported channel count");
}

void save_image_png(const ImageU8& img, const std::filesystem::path& path) {
    write_png_gray(path, img.width, img.height, 8, img.pixels.data());
}

// ---------------------------------------------------------------- PFM

RasterMap load_pfm(const std::filesystem::path& path, MapKind kind) {
    FilePtr fp = open_file(path, "rb");

    char magic[3] = {0, 0, 0};
    int width = 0, height = 0;
    double scale = 0.0;
    if (std::fscanf(fp.get(), "%2s %d %d %lf", magic, &width, &height, &scale) != 4)
        throw IoError("pfm: malformed header in " + pstr(path));
    if (std::strcmp(magic, "Pf") != 0) {
        if (std::strcmp(magic, "PF") == 0)
            throw UnsupportedFormatError("pfm: color PFM not supported: " + pstr(path));
        throw UnsupportedFormatError("pfm: bad magic in " + pstr(path));
    }
    if (width <= 0 || height <= 0 || scale == 0.0)
        throw IoError("pfm: bad dimensions or scale in " + pstr(path));
    // Exactly one whitespace byte terminates the header.
    if (std::fgetc(fp.get()) == EOF)
        throw IoError("pfm: truncated header in " + pstr(path));

    const long data_start = std::ftell(fp.get());
    const bool file_little_endian = scale < 0.0;
    const bool swap = file_little_endian != (std::endian::native == std::endian::little);

    RasterMap map(width, height, kind);
    std::vector<float> row(width);
    // PFM stores rows bottom-up.
    for (int yi = 0; yi < height; ++yi) {
        const int y = height - 1 - yi;
        const size_t got = std::fread(row.data(), sizeof(float), width, fp.get());
        if (got != static_cast<size_t>(width)) {
            const long at = data_start + (static_cast<long>(yi) * width + static_cast<long>(got)) *
                                             static_cast<long>(sizeof(float));
            throw IoError("pfm: " + pstr(path) + " truncated at byte offset " +
                          std::to_string(at));
        }
        for (int x = 0; x < width; ++x) {
            float v = row[x];
            if (swap) {
                uint32_t bits;
                std::memcpy(&bits, &v, 4);
                bits = __builtin_bswap32(bits);
                std::memcpy(&v, &bits, 4);
            }
            mark_by_kind(map, x, y, v);
        }
    }
    return map;
}

void save_pfm(const RasterMap& map, const std::filesystem::path& path) {
    FilePtr fp = open_file(path, "wb");
    const double scale = std::endian::native == std::endian::little ? -1.0 : 1.0;
    std::fprintf(fp.get(), "Pf\n%d %d\n%.1f\n", map.width(), map.height(), scale);

    const float invalid = std::numeric_limits<float>::quiet_NaN();
    std::vector<float> row(map.width());
    for (int y = map.height() - 1; y >= 0; --y) {
        for (int x = 0; x < map.width(); ++x)
            row[x] = map.is_valid(x, y) ? map.value(x, y) : invalid;
        if (std::fwrite(row.data(), sizeof(float), row.size(), fp.get()) != row.size())
            throw IoError("pfm: short write to " + pstr(path));
    }
}

// ---------------------------------------------------------------- npy

RasterMap load_npy_f32(const std::filesystem::path& path, MapKind kind) {
    FilePtr fp = open_file(path, "rb");

    uint8_t preamble[10];
    if (std::fread(preamble, 1, 10, fp.get()) != 10)
        throw IoError("npy: " + pstr(path) + " truncated at byte offset 0");
    static const uint8_t magic[6] = {0x93, 'N', 'U', 'M', 'P', 'Y'};
    if (std::memcmp(preamble, magic, 6) != 0)
        throw UnsupportedFormatError("npy: bad magic in " + pstr(path));
    if (preamble[6] != 1 || preamble[7] != 0)
        throw UnsupportedFormatError("npy: only format version 1.0 is supported: " + pstr(path));
    const size_t header_len = preamble[8] | (static_cast<size_t>(preamble[9]) << 8);

    std::string header(header_len, '\0');
    if (std::fread(header.data(), 1, header_len, fp.get()) != header_len)
        throw IoError("npy: " + pstr(path) + " truncated at byte offset 10");

    if (header.find("'descr': '<f4'") == std::string::npos &&
        header.find("\"descr\": \"<f4\"") == std::string::npos)
        throw UnsupportedFormatError("npy: dtype must be little-endian float32: " + pstr(path));
    if (header.find("'fortran_order': False") == std::string::npos &&
        header.find("\"fortran_order\": false") == std::string::npos)
        throw UnsupportedFormatError("npy: only C-order arrays are supported: " + pstr(path));

    const size_t shape_pos = header.find("'shape'");
    const size_t open = header.find('(', shape_pos);
    const size_t close = header.find(')', open);
    if (shape_pos == std::string::npos || open == std::string::npos ||
        close == std::string::npos)
        throw UnsupportedFormatError("npy: missing shape in " + pstr(path));
    int height = 0, width = 0;
    if (std::sscanf(header.c_str() + open, "(%d, %d", &height, &width) != 2 || height <= 0 ||
        width <= 0)
        throw UnsupportedFormatError("npy: expected a 2-D shape in " + pstr(path));

    const long data_start = static_cast<long>(10 + header_len);
    RasterMap map(width, height, kind);
    std::vector<float> row(width);
    for (int y = 0; y < height; ++y) {
        const size_t got = std::fread(row.data(), sizeof(float), width, fp.get());
        if (got != static_cast<size_t>(width)) {
            const long at = data_start + (static_cast<long>(y) * width + static_cast<long>(got)) *
                                             static_cast<long>(sizeof(float));
            throw IoError("npy: " + pstr(path) + " truncated at byte offset " +
                          std::to_string(at));
        }
        for (int x = 0; x < width; ++x) {
            float v = row[x];
            if constexpr (std::endian::native == std::endian::big) {
                uint32_t bits;
                std::memcpy(&bits, &v, 4);
                bits = __builtin_bswap32(bits);
                std::memcpy(&v, &bits, 4);
            }
            mark_by_kind(map, x, y, v);
        }
    }
    return map;
}

// ---------------------------------------------------------------- text

namespace {

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + pstr(path));
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

bool skippable(const std::string& line) {
    for (const char c : line)
        if (!std::isspace(static_cast<unsigned char>(c)))
            return c == '#';
    return true;
}

std::ofstream open_text_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot open " + pstr(path) + " for writing");
    return out;
}

} // namespace

CameraIntrinsics load_intrinsics(const std::filesystem::path& path) {
    CameraIntrinsics K;
    bool have_fx = false, have_fy = false, have_cx = false, have_cy = false, have_size = false;
    for (const std::string& line : read_lines(path)) {
        if (skippable(line))
            continue;
        std::istringstream ss(line);
        std::string key;
        ss >> key;
        if (key == "fx:")
            have_fx = static_cast<bool>(ss >> K.fx);
        else if (key == "fy:")
            have_fy = static_cast<bool>(ss >> K.fy);
        else if (key == "cx:")
            have_cx = static_cast<bool>(ss >> K.cx);
        else if (key == "cy:")
            have_cy = static_cast<bool>(ss >> K.cy);
        else if (key == "size:")
            have_size = static_cast<bool>(ss >> K.width >> K.height);
    }
    if (!(have_fx && have_fy && have_cx && have_cy && have_size))
        throw IoError("intrinsics: " + pstr(path) + " must define fx, fy, cx, cy and size");
    K.validate();
    return K;
}

void save_intrinsics(const CameraIntrinsics& K, const std::filesystem::path& path) {
    std::ofstream out = open_text_out(path);
    char buf[256];
    std::snprintf(buf, sizeof(buf), "fx: %.17g\nfy: %.17g\ncx: %.17g\ncy: %.17g\nsize: %d %d\n",
                  K.fx, K.fy, K.cx, K.cy, K.width, K.height);
    out << buf;
}

namespace {

Eigen::Matrix3d orthonormalize(const Eigen::Matrix3d& R, const std::string& where) {
    const Eigen::JacobiSVD<Eigen::Matrix3d> svd(R, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d U = svd.matrixU();
    if ((U * svd.matrixV().transpose()).determinant() < 0.0)
        U.col(2) *= -1.0;
    const Eigen::Matrix3d fixed = U * svd.matrixV().transpose();
    if ((fixed - R).cwiseAbs().maxCoeff() > 1e-4)
        throw IoError(where + ": rotation is too far from orthonormal");
    return fixed;
}

} // namespace

std::vector<RigidPose> load_poses(const std::filesystem::path& path) {
    std::vector<RigidPose> poses;
    int line_no = 0;
    for (const std::string& line : read_lines(path)) {
        ++line_no;
        if (skippable(line))
            continue;
        std::istringstream ss(line);
        std::vector<double> vals;
        double v;
        while (ss >> v)
            vals.push_back(v);
        if (vals.size() != 12 && vals.size() != 16)
            throw IoError("poses: " + pstr(path) + " line " + std::to_string(line_no) +
                          ": expected 12 or 16 values");
        if (vals.size() == 16 &&
            (vals[12] != 0.0 || vals[13] != 0.0 || vals[14] != 0.0 || vals[15] != 1.0))
            throw IoError("poses: " + pstr(path) + " line " + std::to_string(line_no) +
                          ": homogeneous row must be 0 0 0 1");

        RigidPose pose;
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c)
                pose.rotation(r, c) = vals[4 * r + c];
            pose.translation(r) = vals[4 * r + 3];
        }
        pose.rotation = orthonormalize(pose.rotation,
                                       "poses: " + pstr(path) + " line " +
                                           std::to_string(line_no));
        pose.validate();
        poses.push_back(pose);
    }
    if (poses.empty())
        throw IoError("poses: " + pstr(path) + " holds no pose");
    return poses;
}

void save_poses(const std::vector<RigidPose>& poses, const std::filesystem::path& path) {
    std::ofstream out = open_text_out(path);
    char buf[64];
    for (const RigidPose& p : poses) {
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 4; ++c) {
                const double v = c < 3 ? p.rotation(r, c) : p.translation(r);
                std::snprintf(buf, sizeof(buf), "%.17g", v);
                out << buf << (r == 2 && c == 3 ? "\n" : " ");
            }
    }
}

std::vector<sfm::Correspondence> load_matches(const std::filesystem::path& path) {
    std::vector<sfm::Correspondence> matches;
    int line_no = 0;
    for (const std::string& line : read_lines(path)) {
        ++line_no;
        if (skippable(line))
            continue;
        std::istringstream ss(line);
        sfm::Correspondence c;
        if (!(ss >> c.u1 >> c.v1 >> c.u2 >> c.v2))
            throw IoError("matches: " + pstr(path) + " line " + std::to_string(line_no) +
                          ": expected u1 v1 u2 v2 [score]");
        ss >> c.score; // optional
        matches.push_back(c);
    }
    return matches;
}

void save_matches(const std::vector<sfm::Correspondence>& matches,
                  const std::filesystem::path& path) {
    std::ofstream out = open_text_out(path);
    char buf[192];
    for (const sfm::Correspondence& c : matches) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g %.17g %.17g\n", c.u1, c.v1, c.u2,
                      c.v2, c.score);
        out << buf;
    }
}

std::vector<ReferencePoint> load_refpoints(const std::filesystem::path& path) {
    std::vector<ReferencePoint> points;
    int line_no = 0;
    for (const std::string& line : read_lines(path)) {
        ++line_no;
        if (skippable(line))
            continue;
        std::istringstream ss(line);
        ReferencePoint p;
        std::string tag;
        if (!(ss >> p.u >> p.v >> p.depth >> tag >> p.weight))
            throw IoError("refpoints: " + pstr(path) + " line " + std::to_string(line_no) +
                          ": expected u v depth source weight");
        const std::optional<PointSource> source = point_source_from_string(tag);
        if (!source)
            throw IoError("refpoints: " + pstr(path) + " line " + std::to_string(line_no) +
                          ": unknown source tag '" + tag + "'");
        p.source = *source;
        points.push_back(p);
    }
    return points;
}

void save_refpoints(const std::vector<ReferencePoint>& points,
                    const std::filesystem::path& path) {
    std::ofstream out = open_text_out(path);
    char buf[192];
    for (const ReferencePoint& p : points) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g %s %.17g\n", p.u, p.v, p.depth,
                      to_string(p.source), p.weight);
        out << buf;
    }
}

RasterMap load_map_auto(const std::filesystem::path& path, MapKind kind) {
    const std::string ext = path.extension().string();
    if (ext == ".pfm")
        return load_pfm(path, kind);
    if (ext == ".npy")
        return load_npy_f32(path, kind);
    if (ext == ".png") {
        if (kind != MapKind::MetricDepth)
            throw UnsupportedFormatError("png16 maps are metric depth only: " + pstr(path));
        return load_depth_png16(path);
    }
    throw UnsupportedFormatError("unrecognized map extension: " + pstr(path));
}

// ---------------------------------------------------------------- manifest

const CameraIntrinsics& DatasetManifest::intrinsics_for(size_t record_index) const {
    if (record_index < records.size() && records[record_index].intrinsics)
        return *records[record_index].intrinsics;
    if (intrinsics)
        return *intrinsics;
    throw Error("manifest: record " + std::to_string(record_index) +
                " has no intrinsics (neither inline nor global)");
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
    const std::filesystem::path base = path.parent_path();
    DatasetManifest m;

    struct InlineK {
        double fx = 0, fy = 0, cx = 0, cy = 0;
        int w = 0, h = 0;
        bool any = false, fx_set = false, fy_set = false, cx_set = false, cy_set = false,
             size_set = false;
        std::optional<CameraIntrinsics> finish(const std::string& where) const {
            if (!any)
                return std::nullopt;
            if (!(fx_set && fy_set && cx_set && cy_set && size_set))
                throw IoError(where + ": incomplete inline intrinsics");
            CameraIntrinsics K{fx, fy, cx, cy, w, h};
            K.validate();
            return K;
        }
    };

    ManifestRecord record;
    InlineK header_k, record_k;
    std::filesystem::path header_k_path;
    bool in_record = false;
    int record_no = 0;

    const auto resolve = [&](const std::string& rel) { return base / rel; };
    const auto flush_record = [&]() {
        if (!in_record)
            return;
        const std::string where = "manifest: record " + std::to_string(record_no);
        if (record.disparity_path.empty())
            throw IoError(where + ": 'disparity' is required");
        if (const auto k = record_k.finish(where))
            record.intrinsics = k;
        if (record.name.empty())
            record.name = record.disparity_path.stem().string();
        m.records.push_back(record);
        record = ManifestRecord{};
        record_k = InlineK{};
    };

    int line_no = 0;
    for (const std::string& line : read_lines(path)) {
        ++line_no;
        if (skippable(line))
            continue;
        std::string trimmed = line;
        trimmed.erase(0, trimmed.find_first_not_of(" \t"));
        trimmed.erase(trimmed.find_last_not_of(" \t") + 1);

        if (trimmed == "[record]") {
            flush_record();
            in_record = true;
            ++record_no;
            continue;
        }

        const size_t colon = trimmed.find(':');
        if (colon == std::string::npos)
            throw IoError("manifest: " + pstr(path) + " line " + std::to_string(line_no) +
                          ": expected 'key: value'");
        const std::string key = trimmed.substr(0, colon);
        std::string value = trimmed.substr(colon + 1);
        value.erase(0, value.find_first_not_of(" \t"));
        if (value.empty())
            throw IoError("manifest: " + pstr(path) + " line " + std::to_string(line_no) +
                          ": empty value for '" + key + "'");

        InlineK& K = in_record ? record_k : header_k;
        const auto set_k = [&](double& field, bool& flag) {
            field = std::stod(value);
            flag = true;
            K.any = true;
        };

        if (key == "fx")
            set_k(K.fx, K.fx_set);
        else if (key == "fy")
            set_k(K.fy, K.fy_set);
        else if (key == "cx")
            set_k(K.cx, K.cx_set);
        else if (key == "cy")
            set_k(K.cy, K.cy_set);
        else if (key == "size") {
            std::istringstream ss(value);
            if (!(ss >> K.w >> K.h))
                throw IoError("manifest: line " + std::to_string(line_no) + ": bad size");
            K.size_set = true;
            K.any = true;
        } else if (!in_record) {
            if (key == "profile")
                m.profile = value;
            else if (key == "baseline")
                m.baseline_m = std::stod(value);
            else if (key == "intrinsics")
                header_k_path = resolve(value);
            else
                throw IoError("manifest: line " + std::to_string(line_no) +
                              ": unknown header key '" + key + "'");
        } else {
            if (key == "name")
                record.name = value;
            else if (key == "disparity")
                record.disparity_path = resolve(value);
            else if (key == "gt_depth")
                record.gt_depth_path = resolve(value);
            else if (key == "left_image")
                record.left_image_path = resolve(value);
            else if (key == "right_image")
                record.right_image_path = resolve(value);
            else if (key == "pose")
                record.pose_path = resolve(value);
            else if (key == "matches")
                record.matches_path = resolve(value);
            else if (key == "refpoints")
                record.refpoints_path = resolve(value);
            else if (key == "intrinsics")
                record.intrinsics = load_intrinsics(resolve(value));
            else
                throw IoError("manifest: line " + std::to_string(line_no) +
                              ": unknown record key '" + key + "'");
        }
    }
    flush_record();

    if (!header_k_path.empty())
        m.intrinsics = load_intrinsics(header_k_path);
    else if (const auto k = header_k.finish("manifest header"))
        m.intrinsics = k;

    if (m.records.empty())
        throw IoError("manifest: " + pstr(path) + " defines no record");

    // Every referenced path must resolve now, not at first use.
    for (size_t i = 0; i < m.records.size(); ++i) {
        const ManifestRecord& r = m.records[i];
        for (const std::filesystem::path* p :
             {&r.disparity_path, &r.gt_depth_path, &r.left_image_path, &r.right_image_path,
              &r.pose_path, &r.matches_path, &r.refpoints_path}) {
            if (!p->empty() && !std::filesystem::exists(*p))
                throw IoError("manifest: record " + std::to_string(i + 1) +
                              " references a missing file: " + pstr(*p));
        }
    }
    return m;
}

} // namespace rescale::io
