#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "rsplit/grid.hpp"

using namespace rsplit;

TEST_CASE("grid construction validates invariants") {
    CHECK_THROWS_AS(Grid2D(3, 4.0), std::invalid_argument);
    CHECK_THROWS_AS(Grid2D(0, 4.0), std::invalid_argument);
    CHECK_THROWS_AS(Grid2D(4, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(Grid2D(4, 4.0, std::vector<double>(7, 0.0)), std::invalid_argument);
    const Grid2D g(4, 2.0);
    CHECK(g.cell_size() == doctest::Approx(1.0));
    CHECK(g.x1(0) == doctest::Approx(-1.5));
    CHECK(g.x1(3) == doctest::Approx(1.5));
    CHECK(g.x2(0) == doctest::Approx(1.5));
    CHECK(g.x2(3) == doctest::Approx(-1.5));
}

TEST_CASE("prolong replicates cells") {
    Grid2D one(1, 4.0, {5.0});
    const Grid2D two = prolong(one, 2);
    CHECK(two.n == 2);
    for (double v : two.data) CHECK(v == 5.0);

    Grid2D g(2, 4.0, {1, 2, 3, 4});
    const Grid2D big = prolong(g, 2);
    CHECK(big.n == 4);
    CHECK(big.at(0, 0) == 1.0);
    CHECK(big.at(1, 1) == 1.0);
    CHECK(big.at(0, 2) == 2.0);
    CHECK(big.at(3, 1) == 3.0);
    CHECK(big.at(2, 2) == 4.0);
    CHECK(total_mass(big) == 4.0 * total_mass(g));
    CHECK(big.half_width == g.half_width);

    CHECK_THROWS_AS(prolong(g, 3), std::invalid_argument);
    CHECK_THROWS_AS(prolong(g, 0), std::invalid_argument);
}

TEST_CASE("restrict_grid averages blocks and inverts prolong") {
    Grid2D g(2, 4.0, {1, 2, 3, 4});
    const Grid2D mean = restrict_grid(g, 2);
    CHECK(mean.n == 1);
    CHECK(mean.at(0, 0) == doctest::Approx(2.5));

    const Grid2D back = restrict_grid(prolong(g, 2), 2);
    for (size_t k = 0; k < g.data.size(); ++k) CHECK(back.data[k] == g.data[k]);

    const Grid2D ones(4, 4.0, 1.0);
    const Grid2D coarse = restrict_grid(ones, 2);
    for (double v : coarse.data) CHECK(v == 1.0);

    CHECK_THROWS_AS(restrict_grid(mean, 2), std::invalid_argument);
}

TEST_CASE("prolongation and restriction are adjoint up to factor^2") {
    std::mt19937 rng(7);
    for (int n : {4, 8}) {
        for (int factor : {2, 4}) {
            const Grid2D g = testing::random_grid(n, rng);
            const Grid2D y = testing::random_grid(n * factor, rng);
            const double lhs = inner(prolong(g, factor), y);
            const double rhs = factor * factor * inner(g, restrict_grid(y, factor));
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        }
    }
}

TEST_CASE("pad_to_pow2 embeds data and keeps the cell size") {
    std::vector<double> values(9, 1.0);
    const Grid2D padded = pad_to_pow2(3, 3.0, values);
    CHECK(padded.n == 4);
    CHECK(padded.half_width == doctest::Approx(4.0));
    CHECK(padded.at(0, 0) == 1.0);
    CHECK(padded.at(3, 3) == 0.0);
    CHECK(total_mass(padded) == doctest::Approx(9.0));
}
