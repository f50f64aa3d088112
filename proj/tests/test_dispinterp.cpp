#include <cmath>
#include <random>

#include "doctest.h"
#include "rsplit/dispinterp.hpp"
#include "rsplit/hypersolve.hpp"
#include "rsplit/shift.hpp"

using namespace rsplit;

namespace {

// hat of half-width `width` cells centered on a grid point; integer cell
// arithmetic keeps the samples free of coordinate rounding drift
std::vector<double> hat_cells(size_t len, long center, long width, double amplitude = 1.0) {
    std::vector<double> out(len, 0.0);
    for (size_t k = 0; k < len; ++k) {
        const long off = std::labs(static_cast<long>(k) - center);
        if (off < width)
            out[k] = amplitude * (1.0 - static_cast<double>(off) / static_cast<double>(width));
    }
    return out;
}

std::vector<double> smooth_bump(size_t len, double center, double width) {
    std::vector<double> out(len, 0.0);
    for (size_t k = 0; k < len; ++k) {
        const double z = (k - center) / width;
        out[k] = std::exp(-z * z);
    }
    return out;
}

double rel_l2(const std::vector<double>& a, const std::vector<double>& b) {
    double num = 0.0, den = 0.0;
    for (size_t k = 0; k < a.size(); ++k) {
        num += (a[k] - b[k]) * (a[k] - b[k]);
        den += b[k] * b[k];
    }
    return std::sqrt(num / std::max(den, 1e-300));
}

}  // namespace

TEST_CASE("template_fit recovers exact and fractional shifts") {
    // the hat of half-width 0.1 on a dx = 0.05 grid: two cells wide
    const double dx = 0.05;
    const auto phi1 = hat_cells(91, 20, 2);
    CHECK(template_fit(phi1, phi1) == 0.0);

    // quarter-amplitude copy two units to the right: 40 cells
    const auto phi2 = hat_cells(91, 60, 2, 0.25);
    const double tau_cells = template_fit(phi1, phi2);
    CHECK(tau_cells == 40.0);
    CHECK(tau_cells * dx == 2.0);

    const auto bump = smooth_bump(128, 40.0, 6.0);
    const auto shifted = shift_slice(bump, 3.5, {BoundaryKind::zero});
    CHECK(template_fit(bump, shifted) == doctest::Approx(3.5).epsilon(0.03));

    CHECK_THROWS_AS(template_fit(std::vector<double>(8, 0.0), phi1), std::invalid_argument);
}

TEST_CASE("template_fit is invariant under joint scaling") {
    const auto bump = smooth_bump(96, 30.0, 5.0);
    const auto target = shift_slice(bump, 11.0, {BoundaryKind::zero});
    std::vector<double> bump3(bump), target3(target);
    for (double& v : bump3) v *= 3.0;
    for (double& v : target3) v *= 3.0;
    CHECK(template_fit(bump, target) == doctest::Approx(template_fit(bump3, target3)).epsilon(1e-12));
}

TEST_CASE("transport_reversal explains a single mover") {
    const auto bump = smooth_bump(128, 40.0, 5.0);
    const auto moved = shift_slice(bump, 17.0, {BoundaryKind::zero});
    const SliceDecomposition dec = transport_reversal(bump, moved, 4, 1e-10);
    REQUIRE(dec.components.size() == 1);
    CHECK(dec.components[0].shift_per_tau == doctest::Approx(17.0).epsilon(1e-6));
    CHECK(dec.components[0].end_scale == doctest::Approx(1.0).epsilon(1e-9));
    double rnorm = 0.0;
    for (double v : dec.residual) rnorm += v * v;
    CHECK(std::sqrt(rnorm) < 1e-8);
}

TEST_CASE("transport_reversal splits symmetric two-pulse data") {
    const size_t len = 256;
    const auto pulse = hat_cells(len, 128, 12);
    std::vector<double> two(len, 0.0);
    const auto right = shift_slice(pulse, 40.0, {BoundaryKind::zero});
    const auto left = shift_slice(pulse, -40.0, {BoundaryKind::zero});
    for (size_t k = 0; k < len; ++k) two[k] = 0.5 * right[k] + 0.5 * left[k];

    const SliceDecomposition dec = transport_reversal(pulse, two, 4, 1e-9);
    REQUIRE(dec.components.size() == 2);
    const double nu0 = dec.components[0].shift_per_tau;
    const double nu1 = dec.components[1].shift_per_tau;
    CHECK(std::abs(nu0) == doctest::Approx(40.0).epsilon(1e-9));
    CHECK(nu0 == doctest::Approx(-nu1).epsilon(1e-9));
    CHECK(dec.components[0].end_scale == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(dec.components[1].end_scale == doctest::Approx(1.0).epsilon(1e-9));
    // each mask carries half of the template
    for (const auto& comp : dec.components)
        for (double m : comp.mask) CHECK((m == 0.0 || m == doctest::Approx(0.5)));

    // the midpoint is the half-separated pair at full eta
    const auto mid = displacement_interpolate_1d(dec, 0.5);
    std::vector<double> expect(len, 0.0);
    const auto r2 = shift_slice(pulse, 20.0, {BoundaryKind::zero});
    const auto l2 = shift_slice(pulse, -20.0, {BoundaryKind::zero});
    for (size_t k = 0; k < len; ++k) expect[k] = 0.5 * r2[k] + 0.5 * l2[k];
    CHECK(rel_l2(mid, expect) < 1e-6);
}

TEST_CASE("transport_reversal with infinite tolerance keeps one component") {
    const auto bump = smooth_bump(64, 20.0, 4.0);
    const auto target = shift_slice(bump, 9.0, {BoundaryKind::zero});
    const SliceDecomposition dec =
        transport_reversal(bump, target, 5, std::numeric_limits<double>::infinity());
    CHECK(dec.components.size() == 1);
    CHECK_THROWS_AS(transport_reversal(std::vector<double>(8, 0.0), bump, 2, 1e-6),
                    std::invalid_argument);
    CHECK_THROWS_AS(transport_reversal(bump, target, 0, 1e-6), std::invalid_argument);
}

TEST_CASE("decompositions are equivariant under joint translation") {
    const auto bump = smooth_bump(160, 60.0, 5.0);
    const auto target = shift_slice(bump, 21.0, {BoundaryKind::zero});
    const auto bump_moved = shift_slice(bump, 8.0, {BoundaryKind::zero});
    const auto target_moved = shift_slice(target, 8.0, {BoundaryKind::zero});
    const SliceDecomposition d1 = transport_reversal(bump, target, 3, 1e-8);
    const SliceDecomposition d2 = transport_reversal(bump_moved, target_moved, 3, 1e-8);
    REQUIRE(d1.components.size() == d2.components.size());
    CHECK(d1.components[0].shift_per_tau ==
          doctest::Approx(d2.components[0].shift_per_tau).epsilon(1e-9));
    CHECK(d1.components[0].end_scale == doctest::Approx(d2.components[0].end_scale).epsilon(1e-9));
}

TEST_CASE("1D displacement interpolation hits both endpoints") {
    const auto bump = smooth_bump(96, 30.0, 4.0);
    auto target = shift_slice(bump, 22.0, {BoundaryKind::zero});
    for (double& v : target) v *= 0.6;
    const SliceDecomposition dec = transport_reversal(bump, target, 4, 1e-10);

    const auto at0 = displacement_interpolate_1d(dec, 0.0);
    CHECK(at0 == dec.base);

    const auto at1 = displacement_interpolate_1d(dec, 1.0);
    CHECK(rel_l2(at1, target) < 1e-12);

    CHECK_THROWS_AS(displacement_interpolate_1d(dec, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(displacement_interpolate_1d(dec, 1.1), std::invalid_argument);
}

TEST_CASE("the hat pair interpolates along the transport map exactly") {
    // phi2(x) = phi0(x-2)/4 on a grid where 2 is 40 cells and 0.5 is 10
    const size_t len = 91;
    const auto phi1 = hat_cells(len, 20, 2);
    const auto phi2 = hat_cells(len, 60, 2, 0.25);
    const SliceDecomposition dec = transport_reversal(phi1, phi2, 3, 1e-12);
    REQUIRE(dec.components.size() == 1);
    CHECK(dec.components[0].shift_per_tau == 40.0);
    CHECK(dec.components[0].end_scale == 0.25);

    const auto mid = displacement_interpolate_1d(dec, 0.25);
    const auto expect = hat_cells(len, 30, 2, 0.8125);
    for (size_t k = 0; k < len; ++k) CHECK(mid[k] == expect[k]);
}

TEST_CASE("2D interpolation endpoints reduce to the inversion round-trip") {
    const int n = 16;
    const Grid2D q1 = standard_hump(n);
    const Grid2D q2 = make_cosine_hump({1.0, 0.0}, 1.0, 1.0, q1);
    InterpOptions opts;
    opts.invert.tol = 1e-9;
    const Interp2DResult at0 = displacement_interpolate_2d(q1, q2, 0.0, opts);
    CHECK(max_abs_diff(at0.grid, q1) < 1e-5);

    const Interp2DResult same = displacement_interpolate_2d(q1, q1, 0.5, opts);
    CHECK(max_abs_diff(same.grid, q1) < 1e-5);

    CHECK_THROWS_AS(displacement_interpolate_2d(q1, q2, 1.5, opts), std::invalid_argument);
}

TEST_CASE("2D interpolation tracks a translating hump") {
    const int n = 32;
    const Grid2D q1 = standard_hump(n);
    const Grid2D q2 = make_cosine_hump({1.0, 0.0}, 1.0, 1.0, q1);
    const Grid2D mid_true = make_cosine_hump({0.5, 0.0}, 1.0, 1.0, q1);
    InterpOptions opts;
    opts.invert.tol = 1e-8;
    std::vector<SliceRecord> records;
    const Interp2DResult mid = displacement_interpolate_2d(q1, q2, 0.5, opts, &records);
    CHECK(!records.empty());
    double num = 0.0, den = 0.0;
    for (size_t k = 0; k < mid.grid.data.size(); ++k) {
        num += (mid.grid.data[k] - mid_true.data[k]) * (mid.grid.data[k] - mid_true.data[k]);
        den += mid_true.data[k] * mid_true.data[k];
    }
    CHECK(std::sqrt(num / den) < 0.1);
}
