#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rsplit {

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Square grid of cell-centered samples of a scalar field on [-L, L]^2.
//
// data is row-major: entry (i, j) sits at data[i*n + j].  The first index
// follows the first physical coordinate, x1(i) = -L + (i + 1/2) dx, and the
// second index runs against the second coordinate, x2(j) = L - (j + 1/2) dx.
// This orientation places the slope-s line family of quadrant a at normal
// angle atan(s/(n-1)), so the four quadrants tile [0, pi) in order a,b,c,d.
struct Grid2D {
    int n = 0;
    double half_width = 4.0;
    std::vector<double> data;

    Grid2D() = default;
    Grid2D(int n_, double half_width_, double fill = 0.0)
        : n(n_), half_width(half_width_), data(static_cast<size_t>(n_) * n_, fill) {
        validate();
    }
    Grid2D(int n_, double half_width_, std::vector<double> values)
        : n(n_), half_width(half_width_), data(std::move(values)) {
        validate();
        if (data.size() != static_cast<size_t>(n) * n)
            throw std::invalid_argument("Grid2D: data length must be n^2");
    }

    void validate() const {
        if (!is_power_of_two(n))
            throw std::invalid_argument("Grid2D: n must be a power of two, got " + std::to_string(n));
        if (!(half_width > 0.0))
            throw std::invalid_argument("Grid2D: half_width must be positive");
    }

    double cell_size() const { return 2.0 * half_width / n; }
    double x1(int i) const { return -half_width + (i + 0.5) * cell_size(); }
    double x2(int j) const { return half_width - (j + 0.5) * cell_size(); }

    double& at(int i, int j) { return data[static_cast<size_t>(i) * n + j]; }
    double at(int i, int j) const { return data[static_cast<size_t>(i) * n + j]; }

    size_t size() const { return data.size(); }
};

// Cubic grid of samples on [-L, L]^3; entry (i, j, k) at data[(i*n + j)*n + k].
struct Grid3D {
    int n = 0;
    double half_width = 4.0;
    std::vector<double> data;

    Grid3D() = default;
    Grid3D(int n_, double half_width_, double fill = 0.0)
        : n(n_), half_width(half_width_),
          data(static_cast<size_t>(n_) * n_ * n_, fill) {
        validate();
    }
    Grid3D(int n_, double half_width_, std::vector<double> values)
        : n(n_), half_width(half_width_), data(std::move(values)) {
        validate();
        if (data.size() != static_cast<size_t>(n) * n * n)
            throw std::invalid_argument("Grid3D: data length must be n^3");
    }

    void validate() const {
        if (!is_power_of_two(n))
            throw std::invalid_argument("Grid3D: n must be a power of two, got " + std::to_string(n));
        if (!(half_width > 0.0))
            throw std::invalid_argument("Grid3D: half_width must be positive");
    }

    double& at(int i, int j, int k) {
        return data[(static_cast<size_t>(i) * n + j) * n + k];
    }
    double at(int i, int j, int k) const {
        return data[(static_cast<size_t>(i) * n + j) * n + k];
    }
};

// Zero-order prolongation: each cell becomes a factor x factor block.
Grid2D prolong(const Grid2D& g, int factor);

// Block-mean restriction, the left inverse of prolong.
Grid2D restrict_grid(const Grid2D& g, int factor);

// Embeds g into the next power-of-two size (zeros after the original cells,
// half_width scaled to keep the cell size).  No-op for power-of-two n.
Grid2D pad_to_pow2(int n, double half_width, const std::vector<double>& values);

double total_mass(const Grid2D& g);
double inner(const Grid2D& a, const Grid2D& b);
double max_abs_diff(const Grid2D& a, const Grid2D& b);

}  // namespace rsplit
