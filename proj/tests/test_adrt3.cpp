#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "rsplit/adrt3.hpp"

using namespace rsplit;

TEST_CASE("dplane_cells unrolls the n=2 base cases") {
    auto axis = dplane_cells(2, 0, 0, 0);
    std::sort(axis.begin(), axis.end());
    CHECK(axis == std::vector<std::array<int, 3>>{{0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {0, 1, 1}});

    auto diag = dplane_cells(2, 0, 1, 1);
    std::sort(diag.begin(), diag.end());
    CHECK(diag == std::vector<std::array<int, 3>>{{0, 0, 0}, {1, 0, 1}, {1, 1, 0}, {2, 1, 1}});

    CHECK_THROWS_AS(dplane_cells(2, 0, 2, 0), std::invalid_argument);
}

TEST_CASE("fixed-slope dplanes partition the cube") {
    const int n = 4;
    for (int s1 = 0; s1 < n; ++s1) {
        for (int s2 = 0; s2 < n; ++s2) {
            std::set<std::array<int, 3>> seen;
            for (int h = -2 * (n - 1); h <= n - 1; ++h)
                for (const auto& cell : dplane_cells(n, h, s1, s2))
                    if (cell[0] >= 0 && cell[0] < n) CHECK(seen.insert(cell).second);
            CHECK(seen.size() == static_cast<size_t>(n) * n * n);
        }
    }
}

TEST_CASE("fast 3D sweep equals the digital-plane oracle bitwise") {
    std::mt19937 rng(37);
    for (int n : {2, 4}) {
        const Grid3D g = testing::random_grid3(n, rng, /*integer_values=*/true);
        const Sinogram3D fast = drt3_forward(g);
        const Sinogram3D slow = testing::brute_forward3(g);
        for (int idx = 0; idx < 16; ++idx)
            CHECK(fast.hexadecants[idx].data == slow.hexadecants[idx].data);
    }
}

TEST_CASE("hexadecant columns sum to the grid total") {
    std::mt19937 rng(41);
    const Grid3D g = testing::random_grid3(8, rng, /*integer_values=*/true);
    double mass = 0.0;
    for (double v : g.data) mass += v;
    const Sinogram3D sino = drt3_forward(g);
    for (const auto& hex : sino.hexadecants)
        for (int s1 = 0; s1 < g.n; ++s1)
            for (int s2 = 0; s2 < g.n; ++s2) CHECK(hex.column_sum(s1, s2) == mass);
}

TEST_CASE("3D backprojection is the exact adjoint") {
    std::mt19937 rng(43);
    for (int rep = 0; rep < 5; ++rep) {
        const int n = 4;
        const Grid3D g = testing::random_grid3(n, rng);
        const Sinogram3D y = testing::random_sinogram3(n, rng);
        const Sinogram3D rg = drt3_forward(g);
        double lhs = 0.0;
        for (int idx = 0; idx < 16; ++idx)
            for (size_t k = 0; k < y.hexadecants[idx].data.size(); ++k)
                lhs += rg.hexadecants[idx].data[k] * y.hexadecants[idx].data[k];
        const Grid3D by = backproject3(y, g.half_width);
        double dot = 0.0;
        for (size_t k = 0; k < g.data.size(); ++k) dot += g.data[k] * by.data[k];
        const double rhs = 16.0 * n * n * static_cast<double>(n) * dot;
        CHECK(std::abs(lhs - rhs) / std::abs(rhs) < 1e-12);
    }
}

TEST_CASE("zero 3D sinogram backprojects to zero and serial matches parallel") {
    const Sinogram3D zero(4);
    const Grid3D back = backproject3(zero, 4.0);
    for (double v : back.data) CHECK(v == 0.0);

    std::mt19937 rng(47);
    const Grid3D g = testing::random_grid3(8, rng);
    const Sinogram3D par = drt3_forward(g, Exec::parallel);
    const Sinogram3D ser = drt3_forward(g, Exec::serial);
    for (int idx = 0; idx < 16; ++idx)
        CHECK(par.hexadecants[idx].data == ser.hexadecants[idx].data);
}

TEST_CASE("blurred 3D delta peaks at its own cell") {
    const int n = 8;
    Grid3D g(n, 4.0);
    g.at(n / 2, n / 2, n / 2) = 1.0;
    const Grid3D blur = backproject3(drt3_forward(g), 4.0);
    size_t best = 0;
    for (size_t k = 1; k < blur.data.size(); ++k)
        if (blur.data[k] > blur.data[best]) best = k;
    const size_t center = (static_cast<size_t>(n / 2) * n + n / 2) * n + n / 2;
    CHECK(best == center);
}
