#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "rsplit/io.hpp"

using namespace rsplit;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("rsplit_io_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("csv and rsg grids round-trip bit-exactly") {
    TempDir dir;
    std::mt19937 rng(71);
    Grid2D g = testing::random_grid(8, rng, false, 3.5);
    g.at(0, 0) = 1e-300;
    g.at(1, 1) = -12345.678901234567;

    save_grid(g, dir.file("g.csv"), GridFormat::csv);
    const Grid2D via_csv = load_grid(dir.file("g.csv"), GridFormat::csv);
    CHECK(via_csv.n == g.n);
    CHECK(via_csv.half_width == g.half_width);
    CHECK(via_csv.data == g.data);

    save_grid(g, dir.file("g.rsg"), GridFormat::rsg_binary);
    const Grid2D via_bin = load_grid(dir.file("g.rsg"), GridFormat::rsg_binary);
    CHECK(via_bin.half_width == g.half_width);
    CHECK(via_bin.data == g.data);
}

TEST_CASE("rsg files carry the documented byte layout") {
    TempDir dir;
    const Grid2D g(2, 4.0, {1.0, 2.0, 3.0, 4.0});
    save_grid(g, dir.file("g.rsg"), GridFormat::rsg_binary);

    std::ifstream in(dir.file("g.rsg"), std::ios::binary);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    REQUIRE(bytes.size() == 4 + 4 + 8 + 4 * 8);
    CHECK(bytes[0] == 'R');
    CHECK(bytes[1] == 'S');
    CHECK(bytes[2] == 'G');
    CHECK(bytes[3] == '1');
    CHECK(bytes[4] == 2);  // n = 2, little-endian
    CHECK(bytes[5] == 0);
    // 1.0 encodes as 0x3FF0000000000000 little-endian
    CHECK(bytes[16 + 6] == 0xf0);
    CHECK(bytes[16 + 7] == 0x3f);
}

TEST_CASE("csv parser names the offending row") {
    TempDir dir;
    {
        std::ofstream out(dir.file("bad.csv"));
        out << "1,2,3,4\n1,2,3,4\n1,2,3\n1,2,3,4\n";
    }
    try {
        load_grid(dir.file("bad.csv"), GridFormat::csv);
        FAIL("expected ParseError");
    } catch (const ParseError& err) {
        CHECK(std::string(err.what()).find("row 3") != std::string::npos);
    }
}

TEST_CASE("grid loading validates sizes and headers") {
    TempDir dir;
    {
        std::ofstream out(dir.file("odd.csv"));
        out << "1,2,3\n4,5,6\n7,8,9\n";
    }
    CHECK_THROWS_AS(load_grid(dir.file("odd.csv"), GridFormat::csv), ParseError);
    {
        std::ofstream out(dir.file("badmagic.rsg"), std::ios::binary);
        out << "JUNKxxxxxxxxxxxx";
    }
    CHECK_THROWS_AS(load_grid(dir.file("badmagic.rsg"), GridFormat::rsg_binary), ParseError);
    CHECK_THROWS_AS(load_grid(dir.file("missing.rsg"), GridFormat::rsg_binary), IoError);
    CHECK_THROWS_AS(load_grid(dir.file("whatever.pgm"), GridFormat::pgm), std::invalid_argument);
}

TEST_CASE("pgm output is 16-bit with linear min-max mapping") {
    TempDir dir;
    Grid2D g(2, 4.0, {0.0, 0.25, 0.5, 1.0});
    save_grid(g, dir.file("g.pgm"), GridFormat::pgm);
    std::ifstream in(dir.file("g.pgm"), std::ios::binary);
    std::string line;
    std::getline(in, line);
    CHECK(line == "P5");
    std::getline(in, line);
    CHECK(line == "2 2");
    std::getline(in, line);
    CHECK(line == "65535");
    std::vector<unsigned char> px((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
    REQUIRE(px.size() == 8);
    const auto sample = [&](int k) { return (px[2 * k] << 8) | px[2 * k + 1]; };
    CHECK(sample(0) == 0);
    CHECK(sample(1) == 16384);
    CHECK(sample(2) == 32768);
    CHECK(sample(3) == 65535);
}

TEST_CASE("sinogram containers round-trip in both formats") {
    TempDir dir;
    std::mt19937 rng(73);
    const Sinogram2D sino = testing::random_sinogram(4, rng);

    save_sinogram(sino, dir.file("s.rss"));
    const Sinogram2D back = load_sinogram(dir.file("s.rss"));
    for (Quad q : kQuads) CHECK(back[q].data == sino[q].data);

    save_sinogram_csv(sino, dir.file("s.csv"));
    const Sinogram2D back_csv = load_sinogram_csv(dir.file("s.csv"));
    for (Quad q : kQuads) CHECK(back_csv[q].data == sino[q].data);

    // RSS1 payload size: magic + n + 4 quadrants of (2n-1) x n doubles
    CHECK(fs::file_size(dir.file("s.rss")) == 4 + 4 + 4ull * (2 * 4 - 1) * 4 * 8);
}

TEST_CASE("3D grid and sinogram files round-trip") {
    TempDir dir;
    std::mt19937 rng(79);
    const Grid3D g = testing::random_grid3(4, rng);
    save_grid3(g, dir.file("g.rsg3"));
    const Grid3D back = load_grid3(dir.file("g.rsg3"));
    CHECK(back.data == g.data);
    CHECK(back.half_width == g.half_width);

    const Sinogram3D sino = testing::random_sinogram3(2, rng);
    save_sinogram3(sino, dir.file("s.rs31"));
    const Sinogram3D sback = load_sinogram3(dir.file("s.rs31"));
    for (int idx = 0; idx < 16; ++idx)
        CHECK(sback.hexadecants[idx].data == sino.hexadecants[idx].data);
}
