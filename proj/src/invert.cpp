#include "rsplit/invert.hpp"

#include <cmath>

namespace rsplit {

namespace {

// Serial dot products keep results independent of the thread count.
double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double sum = 0.0;
    for (size_t k = 0; k < a.size(); ++k) sum += a[k] * b[k];
    return sum;
}

}  // namespace

CgResult cg_solve(const std::function<void(const std::vector<double>&, std::vector<double>&)>& apply_A,
                  const std::vector<double>& b, std::vector<double>& x, double tol, int max_iter,
                  bool record_residuals) {
    if (tol <= 0.0 || tol >= 1.0) throw std::invalid_argument("cg_solve: tol must be in (0, 1)");
    if (max_iter < 1) throw std::invalid_argument("cg_solve: max_iter must be >= 1");
    const size_t len = b.size();
    x.assign(len, 0.0);
    CgResult res;

    const double bnorm = std::sqrt(dot(b, b));
    if (bnorm == 0.0) {
        res.rel_residual = 0.0;
        return res;
    }

    std::vector<double> r = b;
    std::vector<double> p = b;
    std::vector<double> ap(len, 0.0);
    double rr = dot(r, r);
    if (record_residuals) res.residual_history.push_back(std::sqrt(rr) / bnorm);

    for (int it = 0; it < max_iter; ++it) {
        apply_A(p, ap);
        const double pap = dot(p, ap);
        if (!std::isfinite(pap))
            throw NumericalError("cg_solve: non-finite curvature", it);
        if (pap <= 0.0) break;  // semidefinite direction exhausted
        const double alpha = rr / pap;
        for (size_t k = 0; k < len; ++k) x[k] += alpha * p[k];
        for (size_t k = 0; k < len; ++k) r[k] -= alpha * ap[k];
        const double rr_next = dot(r, r);
        if (!std::isfinite(rr_next))
            throw NumericalError("cg_solve: non-finite residual", it);
        res.iterations = it + 1;
        const double rel = std::sqrt(rr_next) / bnorm;
        if (record_residuals) res.residual_history.push_back(rel);
        if (rel <= tol) {
            res.rel_residual = rel;
            return res;
        }
        const double beta = rr_next / rr;
        for (size_t k = 0; k < len; ++k) p[k] = r[k] + beta * p[k];
        rr = rr_next;
    }
    res.rel_residual = std::sqrt(dot(r, r)) / bnorm;
    res.converged = res.rel_residual <= tol;
    return res;
}

Grid2D normal_operator(const Grid2D& x, int factor, Exec ex) {
    Grid2D big = prolong(x, factor);
    Sinogram2D sino = drt_forward(big, ex);
    Grid2D back = backproject(sino, big.half_width, ex);
    return restrict_grid(back, factor);
}

InvertResult invert_drt(const Sinogram2D& sino, int target_n, double half_width,
                        const InvertOptions& opts) {
    if (opts.oversample_p < 1) throw std::invalid_argument("invert_drt: oversample_p must be >= 1");
    const int factor = 2 * opts.oversample_p;
    if (sino.n != factor * target_n)
        throw std::invalid_argument("invert_drt: sinogram size must equal 2p * target_n");

    const int max_iter = opts.max_iter > 0 ? opts.max_iter : 10 * target_n;
    Grid2D rhs = restrict_grid(backproject(sino, half_width, opts.exec), factor);

    Grid2D work(target_n, half_width);
    auto apply_A = [&](const std::vector<double>& in, std::vector<double>& out) {
        work.data = in;
        Grid2D result = normal_operator(work, factor, opts.exec);
        out = std::move(result.data);
    };

    InvertResult res;
    res.grid = Grid2D(target_n, half_width);
    res.cg = cg_solve(apply_A, rhs.data, res.grid.data, opts.tol, max_iter, opts.record_residuals);
    return res;
}

}  // namespace rsplit
