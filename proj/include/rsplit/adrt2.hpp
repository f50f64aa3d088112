#pragma once

#include <array>
#include <utility>
#include <vector>

#include "rsplit/grid.hpp"
#include "rsplit/sinogram.hpp"

namespace rsplit {

// Kernel selection: the parallel path uses OpenMP worksharing; the serial
// path is the reference implementation used to cross-check it.  Both compute
// identical sums in identical order per entry, so results agree bitwise.
enum class Exec { serial, parallel };

// A digital line: one cell per column, rising h..h+s across the width,
// clipped to the rows of the grid.
struct DLine {
    int n = 0;
    int h = 0;
    int s = 0;
    std::vector<std::pair<int, int>> cells;  // (row, column), column-sorted
};

// Unrolls the halving recursion for the digital line of intercept h, slope s.
// Oracle-grade code: O(n) but not used by the fast sweeps.
DLine dline_cells(int n, int h, int s);

// Fast single-quadrant transform of g (quadrant a is the identity view).
Quadrant2D drt_quadrant(const Grid2D& g, Exec ex = Exec::parallel);

// All four quadrants; b, c, d are computed from transposed/flipped views.
Sinogram2D drt_forward(const Grid2D& g, Exec ex = Exec::parallel);

// Exact adjoint of drt_forward scaled by 1/(4 n^2):
// <R g, y> = 4 n^2 <g, backproject(y)> for all g, y.
Grid2D backproject(const Sinogram2D& sino, double half_width = 4.0, Exec ex = Exec::parallel);

// Unit normal of the line family (quadrant, slope).  Quadrant a covers
// angles [0, pi/4] with theta = atan(s/(n-1)); b, c, d tile the rest of
// [0, pi).  The sign is fixed so the stored height h increases along +omega.
std::array<double, 2> quadrant_normal(Quad q, int s, int n);

struct ContinuousLine {
    double offset = 0.0;  // s_c, scaled so [-1, 1] spans the grid
    double angle = 0.0;   // theta = atan(s/(n-1)), in [0, pi/4]
};

// Continuous (offset, angle) pair of the digital line (h, s) within its quadrant.
ContinuousLine to_continuous(int h, int s, int n);

// Estimate of the continuous Radon transform at the line (h_index, s):
// the quadrant entry divided by cos(theta) and by the line density n/(2L).
double continuous_radon_estimate(const Quadrant2D& q, int h_index, int s, double half_width);

// View of g whose quadrant-a transform equals quadrant `q` of g itself.
Grid2D quadrant_view(const Grid2D& g, Quad q);

// Adjoint of quadrant_view: scatters a view-space grid back, accumulating.
void quadrant_view_adjoint(const std::vector<double>& view_data, Quad q, Grid2D& accum);

// Per-quadrant reverse sweep without the 1/(4 n^2) scale, in view space.
// Exposed for the inversion operator and for adjoint tests.
std::vector<double> sweep_adjoint(const Quadrant2D& quad, Exec ex = Exec::parallel);

}  // namespace rsplit
