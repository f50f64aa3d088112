#pragma once

#include <stdexcept>
#include <string>

#include "rsplit/grid.hpp"
#include "rsplit/sinogram.hpp"

namespace rsplit {

// Malformed file contents; the message carries the offending line or offset.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Filesystem-level failure (missing file, short write, ...).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class GridFormat { csv, rsg_binary, pgm };

GridFormat grid_format_from_name(const std::string& name);
GridFormat guess_grid_format(const std::string& path);

// Grid files.
//   rsg-binary: "RSG1", u32 LE n, f64 LE half_width, n^2 doubles LE row-major.
//   csv: n rows of n comma-separated fields, optional "# n=<n> L=<L>" header.
//   pgm: P5 16-bit output, [min, max] mapped linearly onto [0, 65535]; write-only.
// csv and rsg-binary round-trip bit-exactly.
Grid2D load_grid(const std::string& path, GridFormat format);
Grid2D load_grid(const std::string& path);
void save_grid(const Grid2D& g, const std::string& path, GridFormat format);
void save_grid(const Grid2D& g, const std::string& path);

// Sinogram files: "RSS1", u32 LE n, then quadrants a,b,c,d each as
// (2n-1) x n doubles LE row-major.  The csv variant separates quadrants
// with "# quadrant=<label>" lines.
Sinogram2D load_sinogram(const std::string& path);
void save_sinogram(const Sinogram2D& sino, const std::string& path);
Sinogram2D load_sinogram_csv(const std::string& path);
void save_sinogram_csv(const Sinogram2D& sino, const std::string& path);

// 3D grid ("RSG3" header, analogous to RSG1) and 3D sinogram ("RS31",
// 16 hexadecant blocks of (3n-2) x n x n doubles LE row-major).
Grid3D load_grid3(const std::string& path);
void save_grid3(const Grid3D& g, const std::string& path);
Sinogram3D load_sinogram3(const std::string& path);
void save_sinogram3(const Sinogram3D& sino, const std::string& path);

}  // namespace rsplit
