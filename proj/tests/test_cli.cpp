#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "rsplit/hypersolve.hpp"
#include "rsplit/io.hpp"

using namespace rsplit;
namespace fs = std::filesystem;

namespace {

struct CliDir {
    fs::path path;
    CliDir() {
        path = fs::temp_directory_path() / ("rsplit_cli_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~CliDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run_cli(const std::string& args) {
    const std::string cmd = std::string(RSPLIT_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("transform round-trips through files with the documented sizes") {
    CliDir dir;
    const Grid2D g = standard_hump(16);
    save_grid(g, dir.file("in.rsg"));
    REQUIRE(run_cli("transform fwd " + dir.file("in.rsg") + " " + dir.file("out.rss")) == 0);
    CHECK(fs::file_size(dir.file("out.rss")) == 8 + 4ull * (2 * 16 - 1) * 16 * 8);

    REQUIRE(run_cli("transform adj " + dir.file("out.rss") + " " + dir.file("back.rsg")) == 0);
    const Grid2D back = load_grid(dir.file("back.rsg"));
    CHECK(back.n == 16);
    // the normalized adjoint smooths: mass stays comparable, not equal
    CHECK(std::isfinite(total_mass(back)));
}

TEST_CASE("missing inputs and bad usage exit with code 2") {
    CliDir dir;
    CHECK(run_cli("transform fwd " + dir.file("nope.rsg") + " " + dir.file("x.rss")) == 2);
    CHECK(run_cli("transform sideways a b") == 2);
    CHECK(run_cli("study convergence --Ns 7") == 2);
    CHECK(run_cli("nonsense") == 2);
}

TEST_CASE("invert reports iterations and writes sidecar metadata") {
    CliDir dir;
    const Grid2D g = standard_hump(8);
    save_grid(prolong(g, 4), dir.file("big.rsg"));
    REQUIRE(run_cli("transform fwd " + dir.file("big.rsg") + " " + dir.file("big.rss")) == 0);
    REQUIRE(run_cli("invert " + dir.file("big.rss") + " " + dir.file("rec.rsg") +
                    " --n 8 --tol 1e-9") == 0);
    const Grid2D rec = load_grid(dir.file("rec.rsg"));
    CHECK(max_abs_diff(rec, g) < 1e-5);
    std::ifstream meta(dir.file("rec.rsg") + ".meta");
    std::string line;
    std::getline(meta, line);
    CHECK(line == "converged,1");
}

TEST_CASE("solve validates configs and writes the manifest") {
    CliDir dir;
    {
        std::ofstream cfg(dir.file("bad.json"));
        cfg << R"({"problem": "weather", "n": 12, "ic": {"humps": []}})";
    }
    CHECK(run_cli("solve " + dir.file("bad.json") + " --out " + dir.file("out")) == 2);

    {
        std::ofstream cfg(dir.file("run.json"));
        cfg << R"({
            "problem": "acoustics", "n": 16, "L": 4.0, "T": 1.0,
            "ic": {"humps": [{"center": [0, 0], "scale": 1.0, "amplitude": 1.0}]},
            "oversample_p": 2, "boundary": "absorbing-extrapolation",
            "cg_tol": 1e-6,
            "output_times": [0.0, 1.0],
            "outputs": {"grids": true, "pgm": true, "sinograms": true}
        })";
    }
    REQUIRE(run_cli("solve " + dir.file("run.json") + " --out " + dir.file("out")) == 0);
    CHECK(fs::exists(dir.file("out/p_t0.0000.rsg")));
    CHECK(fs::exists(dir.file("out/p_t1.0000.rsg")));
    CHECK(fs::exists(dir.file("out/p_t1.0000.pgm")));
    CHECK(fs::exists(dir.file("out/p_hat_t1.0000.rss")));
    CHECK(fs::exists(dir.file("out/run_manifest.csv")));

    // identical runs produce identical grids
    REQUIRE(run_cli("solve " + dir.file("run.json") + " --out " + dir.file("out2")) == 0);
    const Grid2D a = load_grid(dir.file("out/p_t1.0000.rsg"));
    const Grid2D b = load_grid(dir.file("out2/p_t1.0000.rsg"));
    CHECK(a.data == b.data);
}

TEST_CASE("interp writes grids and slice records") {
    CliDir dir;
    const Grid2D q1 = standard_hump(16);
    const Grid2D q2 = make_cosine_hump({0.5, 0.0}, 1.0, 1.0, q1);
    save_grid(q1, dir.file("a.rsg"));
    save_grid(q2, dir.file("b.rsg"));
    REQUIRE(run_cli("interp " + dir.file("a.rsg") + " " + dir.file("b.rsg") +
                    " --tau 0.5 --slice-csv --out " + dir.file("out")) == 0);
    CHECK(fs::exists(dir.file("out/interp_tau0.5000.rsg")));
    CHECK(fs::exists(dir.file("out/interp_tau0.5000_slices.csv")));
}
