#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "rsplit/adrt2.hpp"
#include "rsplit/grid.hpp"
#include "rsplit/sinogram.hpp"

namespace rsplit {

// Raised when an iteration produces non-finite values.
struct NumericalError : std::runtime_error {
    int iteration;
    NumericalError(const std::string& what, int iteration_)
        : std::runtime_error(what), iteration(iteration_) {}
};

struct InvertOptions {
    int oversample_p = 2;    // prolongation factor is 2p
    double tol = 1e-8;       // relative residual threshold
    int max_iter = 0;        // 0 means 10 * n of the target grid
    bool record_residuals = false;
    Exec exec = Exec::parallel;
};

struct CgResult {
    int iterations = 0;
    double rel_residual = 0.0;
    bool converged = true;
    std::vector<double> residual_history;  // filled when requested
};

// Conjugate gradients for a symmetric positive semidefinite operator.
// apply_A(x, y) writes y = A x; the initial guess is zero.
CgResult cg_solve(const std::function<void(const std::vector<double>&, std::vector<double>&)>& apply_A,
                  const std::vector<double>& b, std::vector<double>& x, double tol, int max_iter,
                  bool record_residuals = false);

struct InvertResult {
    Grid2D grid;
    CgResult cg;
};

// Least-squares inverse of the oversampled transform: solves
// (S R^T R P) X = S R^T B by CG, where P prolongs by 2p and S restricts.
// The sinogram must have size 2p * target_n.
InvertResult invert_drt(const Sinogram2D& sino, int target_n, double half_width,
                        const InvertOptions& opts = {});

// The normal operator S R^T R P on target-size grids, exposed for tests.
Grid2D normal_operator(const Grid2D& x, int factor, Exec ex = Exec::parallel);

}  // namespace rsplit
