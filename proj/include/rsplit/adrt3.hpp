#pragma once

#include <array>
#include <vector>

#include "rsplit/adrt2.hpp"
#include "rsplit/grid.hpp"
#include "rsplit/sinogram.hpp"

namespace rsplit {

// Digital plane through (h, s1, s2): one cell per (j, k) pair, produced by
// the four-way halving recursion.  Returns the raw recursion cells; rows may
// fall outside [0, n) for steep planes (callers summing over a grid clip).
std::vector<std::array<int, 3>> dplane_cells(int n, int h, int s1, int s2);

// Fast 3D transform: all 16 hexadecants, O(n^3 log n).
Sinogram3D drt3_forward(const Grid3D& g, Exec ex = Exec::parallel);

// Exact adjoint of drt3_forward scaled by 1/(16 n^3):
// <R g, y> = 16 n^3 <g, backproject3(y)>.
Grid3D backproject3(const Sinogram3D& sino, double half_width = 4.0, Exec ex = Exec::parallel);

// View of g whose (a,a)-hexadecant transform equals hexadecant `label` of g.
// The second label acts on the (i, k) plane first, then the first label on
// the (i, j) plane, each as in the 2D quadrant views.
Grid3D hexadecant_view(const Grid3D& g, HexLabel label);

void hexadecant_view_adjoint(const std::vector<double>& view_data, HexLabel label, Grid3D& accum);

// Per-hexadecant reverse sweep without the 1/(16 n^3) scale, in view space.
std::vector<double> sweep_adjoint3(const Hexadecant3D& hex, Exec ex = Exec::parallel);

}  // namespace rsplit
