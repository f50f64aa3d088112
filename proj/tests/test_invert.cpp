#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "rsplit/hypersolve.hpp"
#include "rsplit/invert.hpp"

using namespace rsplit;

TEST_CASE("cg solves trivial systems") {
    const auto identity = [](const std::vector<double>& in, std::vector<double>& out) { out = in; };
    std::vector<double> x;
    const CgResult r1 = cg_solve(identity, {3.0, -2.0, 0.5}, x, 1e-12, 10);
    CHECK(r1.iterations == 1);
    CHECK(x[0] == doctest::Approx(3.0));
    CHECK(x[2] == doctest::Approx(0.5));

    const auto diag = [](const std::vector<double>& in, std::vector<double>& out) {
        out = {in[0], 2.0 * in[1]};
    };
    const CgResult r2 = cg_solve(diag, {1.0, 2.0}, x, 1e-12, 10);
    CHECK(r2.iterations <= 2);
    CHECK(x[0] == doctest::Approx(1.0));
    CHECK(x[1] == doctest::Approx(1.0));
}

TEST_CASE("cg on zero rhs returns zero without iterating") {
    const auto identity = [](const std::vector<double>& in, std::vector<double>& out) { out = in; };
    std::vector<double> x;
    const CgResult r = cg_solve(identity, {0.0, 0.0}, x, 1e-10, 5);
    CHECK(r.iterations == 0);
    CHECK(r.converged);
    CHECK(x == std::vector<double>{0.0, 0.0});
}

TEST_CASE("cg recovers a grid from its normal-equation image") {
    std::mt19937 rng(53);
    const int n = 8;
    const Grid2D g = testing::random_grid(n, rng);
    Grid2D work(n, 4.0);
    const auto apply = [&](const std::vector<double>& in, std::vector<double>& out) {
        work.data = in;
        out = normal_operator(work, 2).data;
    };
    std::vector<double> b;
    apply(g.data, b);
    std::vector<double> x;
    const CgResult r = cg_solve(apply, b, x, 1e-10, 400);
    CHECK(r.converged);
    Grid2D xg(n, 4.0, x);
    CHECK(max_abs_diff(xg, g) < 1e-6);
}

TEST_CASE("the normal operator is symmetric") {
    std::mt19937 rng(59);
    const int n = 16;
    const Grid2D x = testing::random_grid(n, rng);
    const Grid2D y = testing::random_grid(n, rng);
    const double lhs = inner(normal_operator(x, 4), y);
    const double rhs = inner(x, normal_operator(y, 4));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("cg residuals decrease monotonically on the normal equations") {
    std::mt19937 rng(61);
    const int n = 16;
    const Grid2D g = testing::random_grid(n, rng);
    const Sinogram2D sino = drt_forward(prolong(g, 4));
    InvertOptions opts;
    opts.record_residuals = true;
    opts.tol = 1e-9;
    const InvertResult res = invert_drt(sino, n, 4.0, opts);
    REQUIRE(res.cg.residual_history.size() > 2);
    // the iteration minimizes the energy norm; the residual 2-norm follows
    // it downward but may wiggle by a few percent locally
    for (size_t k = 1; k < res.cg.residual_history.size(); ++k)
        CHECK(res.cg.residual_history[k] <=
              1.1 * res.cg.residual_history[k - 1] + 1e-10);
    CHECK(res.cg.residual_history.back() <= 1e-9);
}

TEST_CASE("invert_drt round-trips smooth grids through the oversampled transform") {
    for (int n : {16, 32}) {
        const Grid2D g = standard_hump(n);
        const Sinogram2D sino = drt_forward(prolong(g, 4));
        InvertOptions opts;
        opts.tol = 1e-10;
        const InvertResult res = invert_drt(sino, n, 4.0, opts);
        CHECK(res.cg.converged);
        CHECK(max_abs_diff(res.grid, g) < 1e-6);
    }
}

TEST_CASE("invert_drt validates shapes and reports non-convergence") {
    const Grid2D g = standard_hump(16);
    const Sinogram2D sino = drt_forward(prolong(g, 4));
    InvertOptions opts;
    CHECK_THROWS_AS(invert_drt(sino, 32, 4.0, opts), std::invalid_argument);

    opts.max_iter = 1;
    opts.tol = 1e-14;
    const InvertResult res = invert_drt(sino, 16, 4.0, opts);
    CHECK_FALSE(res.cg.converged);
    CHECK(res.cg.iterations == 1);

    const Sinogram2D zero(64);
    const InvertResult rz = invert_drt(zero, 16, 4.0, InvertOptions{});
    CHECK(rz.cg.iterations == 0);
    for (double v : rz.grid.data) CHECK(v == 0.0);
}

TEST_CASE("off-range perturbations stay bounded and flag the residual") {
    std::mt19937 rng(67);
    const int n = 16;
    const Grid2D g = standard_hump(n);
    Sinogram2D sino = drt_forward(prolong(g, 4));
    std::uniform_real_distribution<double> noise(-1e-3, 1e-3);
    for (Quad q : kQuads)
        for (int s = 0; s < sino.n; ++s)
            for (int h = sino[q].valid_begin(s); h < sino[q].heights(); ++h)
                sino[q].at(h, s) += noise(rng);
    InvertOptions opts;
    opts.tol = 1e-10;
    const InvertResult res = invert_drt(sino, n, 4.0, opts);
    for (double v : res.grid.data) CHECK(std::isfinite(v));
    CHECK(max_abs_diff(res.grid, g) < 0.1);
}
