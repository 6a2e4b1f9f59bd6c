#include "rescale/io.hpp"

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

// End-to-end runs of the CLI binary (path injected by the build).

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("rescale_cli_test_" + std::to_string(::getpid()) +
                                            "_" + std::to_string(counter()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int counter() {
        static int n = 0;
        return n++;
    }
};

int run(const std::string& args) {
    const std::string cmd = std::string(RESCALE_CLI_BIN) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<char> slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

TEST_CASE("synth + rescale + eval round trip through the binary") {
    TempDir tmp;
    const std::string data = (tmp.path / "data").string();
    const std::string out = (tmp.path / "out").string();

    REQUIRE(run("synth --out " + data + " --n-images 3 --seed 5") == 0);
    REQUIRE(fs::exists(tmp.path / "data" / "manifest.txt"));
    REQUIRE(fs::exists(tmp.path / "data" / "img_0002_disp.pfm"));

    CHECK(run("rescale --manifest " + data + "/manifest.txt --provider lidar:16 --out " + out +
              " --seed 1") == 0);
    CHECK(fs::exists(tmp.path / "out" / "img_0000_depth.pfm"));
    CHECK(fs::exists(tmp.path / "out" / "img_0000_scale.json"));

    CHECK(run("eval --manifest " + data + "/manifest.txt --pred-dir " + out + " --out " + out) ==
          0);
    CHECK(fs::exists(tmp.path / "out" / "report.json"));
    CHECK(fs::exists(tmp.path / "out" / "report.txt"));
}

TEST_CASE("record count contract: one depth map and one scale record per input") {
    TempDir tmp;
    const std::string data = (tmp.path / "data").string();
    const std::string out = (tmp.path / "out").string();
    REQUIRE(run("synth --out " + data + " --n-images 3 --seed 9") == 0);
    REQUIRE(run("rescale --manifest " + data + "/manifest.txt --provider lidar:16 --out " + out +
                " --seed 2") == 0);
    int depth_maps = 0, scale_records = 0;
    for (const auto& entry : fs::directory_iterator(out)) {
        const std::string name = entry.path().filename().string();
        depth_maps += name.ends_with("_depth.pfm");
        scale_records += name.ends_with("_scale.json");
    }
    CHECK(depth_maps == 3);
    CHECK(scale_records == 3);
}

TEST_CASE("provider validation fails before any processing") {
    TempDir tmp;
    const std::string data = (tmp.path / "data").string();
    const std::string out = (tmp.path / "out").string();
    REQUIRE(run("synth --out " + data + " --n-images 2 --seed 5") == 0);

    // no pose/matches files in a plain synth dataset
    CHECK(run("rescale --manifest " + data + "/manifest.txt --provider sfm --out " + out) == 1);
    CHECK_FALSE(fs::exists(tmp.path / "out" / "img_0000_depth.pfm"));
}

TEST_CASE("unknown provider and bad flags exit with a usage error") {
    TempDir tmp;
    const std::string data = (tmp.path / "data").string();
    REQUIRE(run("synth --out " + data + " --n-images 1") == 0);
    CHECK(run("rescale --manifest " + data + "/manifest.txt --provider sonar") == 1);
    CHECK(run("rescale") != 0); // missing required --manifest
    CHECK(run("rescale --manifest " + data + "/manifest.txt --fixed-scale nonsense") == 1);
}

TEST_CASE("partial failure isolates bad records and exits 2") {
    TempDir tmp;
    const std::string data = (tmp.path / "data").string();
    const std::string out = (tmp.path / "out").string();
    REQUIRE(run("synth --out " + data + " --n-images 3 --seed 6") == 0);
    // break one record's refpoints file so the external provider fails on it
    std::ofstream bad(tmp.path / "data" / "img_0001_refs.txt");
    bad << "not a refpoint\n";
    bad.close();

    CHECK(run("rescale --manifest " + data + "/manifest.txt --provider external --out " + out +
              " --seed 1") == 2);
    CHECK(fs::exists(tmp.path / "out" / "img_0000_depth.pfm"));
    CHECK(fs::exists(tmp.path / "out" / "img_0002_depth.pfm"));
    CHECK_FALSE(fs::exists(tmp.path / "out" / "img_0001_depth.pfm"));
}

TEST_CASE("identical seeded runs produce byte-identical depth outputs") {
    TempDir tmp;
    const std::string data = (tmp.path / "data").string();
    REQUIRE(run("synth --out " + data + " --n-images 2 --seed 11 --outliers 0.2") == 0);

    const std::string out_a = (tmp.path / "a").string();
    const std::string out_b = (tmp.path / "b").string();
    REQUIRE(run("rescale --manifest " + data + "/manifest.txt --provider external --out " +
                out_a + " --seed 7") == 0);
    REQUIRE(run("rescale --manifest " + data + "/manifest.txt --provider external --out " +
                out_b + " --seed 7 --jobs 2") == 0);

    for (const char* name : {"img_0000_depth.pfm", "img_0001_depth.pfm", "img_0000_scale.json",
                             "img_0001_scale.json"}) {
        CHECK(slurp(tmp.path / "a" / name) == slurp(tmp.path / "b" / name));
    }
}

TEST_CASE("standalone providers write reference point files") {
    TempDir tmp;
    const std::string data = (tmp.path / "data").string();
    REQUIRE(run("synth --out " + data + " --n-images 2 --seed 13 --stereo --sfm") == 0);

    const std::string sim_out = (tmp.path / "sim").string();
    CHECK(run("simulate --manifest " + data + "/manifest.txt --beams 4 --out " + sim_out) == 0);
    CHECK(fs::exists(tmp.path / "sim" / "img_0000_refs.txt"));

    const std::string sgm_out = (tmp.path / "sgm").string();
    CHECK(run("sgm --manifest " + data + "/manifest.txt --out " + sgm_out) == 0);
    CHECK(fs::exists(tmp.path / "sgm" / "img_0000_sgm.pfm"));
    CHECK(fs::exists(tmp.path / "sgm" / "img_0000_refs.txt"));

    const std::string tri_out = (tmp.path / "tri").string();
    CHECK(run("triangulate --manifest " + data + "/manifest.txt --out " + tri_out) == 0);
    CHECK(fs::exists(tmp.path / "tri" / "img_0000_refs.txt"));
}

TEST_CASE("ablate emits the three-variant comparison") {
    TempDir tmp;
    const std::string data = (tmp.path / "data").string();
    const std::string out = (tmp.path / "out").string();
    REQUIRE(run("synth --out " + data + " --n-images 3 --seed 21 --outliers 0.2") == 0);
    REQUIRE(run("ablate --manifest " + data + "/manifest.txt --provider external --out " + out +
                " --seed 3") == 0);
    REQUIRE(fs::exists(tmp.path / "out" / "ablate.json"));
    const std::string table(slurp(tmp.path / "out" / "ablate.txt").data(),
                            slurp(tmp.path / "out" / "ablate.txt").size());
    CHECK(table.find("ransac") != std::string::npos);
    CHECK(table.find("no_ransac") != std::string::npos);
    CHECK(table.find("fixed_mean") != std::string::npos);
}

TEST_CASE("eval accepts externally produced png16 depth maps") {
    TempDir tmp;
    const std::string data = (tmp.path / "data").string();
    const std::string out = (tmp.path / "out").string();
    REQUIRE(run("synth --out " + data + " --n-images 2 --seed 31") == 0);
    // pretend an external tool wrote png16 predictions: reuse the ground truth
    fs::create_directories(out);
    for (const char* name : {"img_0000", "img_0001"}) {
        const auto gt = rescale::io::load_pfm(tmp.path / "data" / (std::string(name) + "_gt.pfm"),
                                              rescale::MapKind::MetricDepth);
        rescale::io::save_depth_png16(gt, tmp.path / "out" / (std::string(name) + ".png"));
    }
    REQUIRE(run("eval --manifest " + data + "/manifest.txt --pred-dir " + out + " --out " + out) ==
            0);
    const auto report = slurp(tmp.path / "out" / "report.json");
    const std::string text(report.data(), report.size());
    CHECK(text.find("\"delta1\": 1.0") != std::string::npos);
}

TEST_CASE("no-ransac runs the plain least-squares path") {
    TempDir tmp;
    const std::string data = (tmp.path / "data").string();
    const std::string out = (tmp.path / "out").string();
    REQUIRE(run("synth --out " + data + " --n-images 2 --seed 29") == 0);
    REQUIRE(run("rescale --manifest " + data + "/manifest.txt --provider external --out " + out +
                " --no-ransac") == 0);
    // noiseless data: the LSQ fit recovers the exact parameters too
    const auto scale = slurp(tmp.path / "out" / "img_0000_scale.json");
    const std::string text(scale.data(), scale.size());
    CHECK(text.find("\"alpha\"") != std::string::npos);
    REQUIRE(run("eval --manifest " + data + "/manifest.txt --pred-dir " + out + " --out " + out) ==
            0);
}

TEST_CASE("fixed-scale rescaling skips fitting") {
    TempDir tmp;
    const std::string data = (tmp.path / "data").string();
    const std::string out = (tmp.path / "out").string();
    REQUIRE(run("synth --out " + data + " --n-images 1 --seed 23 --alpha 2.0 --beta 0.1") == 0);
    REQUIRE(run("rescale --manifest " + data + "/manifest.txt --provider external --out " + out +
                " --fixed-scale 2.0,0.1") == 0);
    REQUIRE(run("eval --manifest " + data + "/manifest.txt --pred-dir " + out + " --out " + out) ==
            0);
    const auto report = slurp(tmp.path / "out" / "report.json");
    const std::string text(report.data(), report.size());
    CHECK(text.find("\"delta1\": 1.0") != std::string::npos);
}
