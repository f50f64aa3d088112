#include "rsplit/shift.hpp"

#include <cmath>
#include <stdexcept>

namespace rsplit {

void shift_slice_into(std::span<const double> slice, double delta, BoundarySpec boundary,
                      std::span<double> out) {
    const long len = static_cast<long>(slice.size());
    if (static_cast<long>(out.size()) != len)
        throw std::invalid_argument("shift_slice_into: output length mismatch");
    if (!std::isfinite(delta)) throw std::invalid_argument("shift_slice_into: non-finite shift");
    if (len == 0) return;

    const double base = std::floor(delta);
    const double frac = delta - base;
    const long whole = static_cast<long>(base);
    const bool extrapolate = boundary.kind == BoundaryKind::absorbing_extrapolation;
    const double lo_fill = extrapolate ? slice.front() : 0.0;
    const double hi_fill = extrapolate ? slice.back() : 0.0;

    const auto sample = [&](long idx) {
        if (idx < 0) return lo_fill;
        if (idx >= len) return hi_fill;
        return slice[static_cast<size_t>(idx)];
    };

    if (frac == 0.0) {
        for (long h = 0; h < len; ++h) out[static_cast<size_t>(h)] = sample(h - whole);
        return;
    }
    for (long h = 0; h < len; ++h) {
        const double left = sample(h - whole - 1);
        const double right = sample(h - whole);
        out[static_cast<size_t>(h)] = frac * left + (1.0 - frac) * right;
    }
}

std::vector<double> shift_slice(std::span<const double> slice, double delta,
                                BoundarySpec boundary) {
    std::vector<double> out(slice.size());
    shift_slice_into(slice, delta, boundary, out);
    return out;
}

}  // namespace rsplit
