#pragma once

#include <span>
#include <vector>

namespace rsplit {

enum class BoundaryKind { absorbing_extrapolation, zero };

struct BoundarySpec {
    BoundaryKind kind = BoundaryKind::absorbing_extrapolation;
};

// Translates a 1D profile by `delta` cells: out(h) ~ in(h - delta).
// The integer part moves exactly; the fractional part interpolates linearly
// between neighbors.  Values carried past either end are discarded; inflow
// cells take the pre-shift edge value (absorbing-extrapolation) or zero.
std::vector<double> shift_slice(std::span<const double> slice, double delta,
                                BoundarySpec boundary = {});

void shift_slice_into(std::span<const double> slice, double delta, BoundarySpec boundary,
                      std::span<double> out);

}  // namespace rsplit
