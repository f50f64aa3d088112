#pragma once

#include <span>
#include <vector>

#include "rsplit/grid.hpp"
#include "rsplit/hypersolve.hpp"
#include "rsplit/invert.hpp"
#include "rsplit/sinogram.hpp"

namespace rsplit {

// One traveling piece of a slice decomposition: a masked part of the base
// profile moving nu cells per unit tau, scaled from 1 at tau=0 to end_scale
// at tau=1.
struct SliceComponent {
    double shift_per_tau = 0.0;          // nu_k, in cells
    double end_scale = 1.0;              // a_k
    std::vector<double> mask;            // nonnegative weights over the base
};

// Greedy decomposition of phi2 into shifted, scaled, masked copies of phi1.
// Wave-like data is handled by a counter-propagating pair whose masks split
// the profile between its two movers pointwise; other features are peeled
// off one correlation peak at a time with hard support windows.  The masks
// sum to at most one pointwise; the residual closes the gap at tau = 1.
struct SliceDecomposition {
    std::vector<double> base;            // phi1
    std::vector<SliceComponent> components;
    std::vector<double> residual;        // phi2 - sum_k a_k shift(mask_k phi1, nu_k)

    // base minus the masked parts; carried linearly across tau
    std::vector<double> unexplained() const;
};

// Best single alignment of phi1 onto phi2 in the least-squares sense:
// exhaustive integer search plus three-point parabolic refinement, ties
// broken toward smaller |tau|.  Returned in cells.
double template_fit(std::span<const double> phi1, std::span<const double> phi2);

SliceDecomposition transport_reversal(std::span<const double> phi1,
                                      std::span<const double> phi2, int K_max, double tol);

// Evaluates the decomposition at tau in [0, 1]:
//   sum_k eta_k(tau) shift(mask_k phi1, nu_k tau)
//   + (1 - tau) unexplained + tau residual,
// with eta_k(tau) = (1 - tau) + tau a_k.  tau = 0 reproduces phi1 bitwise;
// tau = 1 reproduces phi2 up to the fit tolerance.
std::vector<double> displacement_interpolate_1d(const SliceDecomposition& dec, double tau);

struct InterpOptions {
    int oversample_p = 2;
    int K_max = 6;
    double tol = 1e-3;  // per-slice relative residual target
    InvertOptions invert;
    Exec exec = Exec::parallel;

    InvertOptions invert_options() const {
        InvertOptions io = invert;
        io.oversample_p = oversample_p;
        io.exec = exec;
        return io;
    }
};

struct SliceRecord {
    Quad quadrant = Quad::a;
    int slope = 0;
    int component = 0;
    double shift_per_tau = 0.0;
    double end_scale = 0.0;
    double residual_norm = 0.0;
};

struct Interp2DResult {
    Grid2D grid;
    CgResult cg;
};

// Transform both grids, run the per-slice transport reversal on every
// (quadrant, slope) pair, evaluate at tau, and invert the assembled
// transform.  All-zero base slices fall back to linear blending.
Interp2DResult displacement_interpolate_2d(const Grid2D& q_t1, const Grid2D& q_t2, double tau,
                                           const InterpOptions& opts = {},
                                           std::vector<SliceRecord>* records = nullptr);

}  // namespace rsplit
