#include "rsplit/grid.hpp"

namespace rsplit {

Grid2D prolong(const Grid2D& g, int factor) {
    if (factor <= 0 || factor % 2 != 0)
        throw std::invalid_argument("prolong: factor must be a positive even integer");
    const int n = g.n;
    const int np = n * factor;
    Grid2D out(np, g.half_width);
    for (int i = 0; i < np; ++i) {
        const int si = i / factor;
        for (int j = 0; j < np; ++j) out.at(i, j) = g.at(si, j / factor);
    }
    return out;
}

Grid2D restrict_grid(const Grid2D& g, int factor) {
    if (factor <= 0 || factor % 2 != 0)
        throw std::invalid_argument("restrict_grid: factor must be a positive even integer");
    if (g.n % factor != 0)
        throw std::invalid_argument("restrict_grid: n not divisible by factor");
    const int nc = g.n / factor;
    const double scale = 1.0 / (static_cast<double>(factor) * factor);
    Grid2D out(nc, g.half_width);
    for (int i = 0; i < nc; ++i) {
        for (int j = 0; j < nc; ++j) {
            double sum = 0.0;
            for (int a = 0; a < factor; ++a)
                for (int b = 0; b < factor; ++b)
                    sum += g.at(i * factor + a, j * factor + b);
            out.at(i, j) = sum * scale;
        }
    }
    return out;
}

Grid2D pad_to_pow2(int n, double half_width, const std::vector<double>& values) {
    if (n <= 0) throw std::invalid_argument("pad_to_pow2: n must be positive");
    if (values.size() != static_cast<size_t>(n) * n)
        throw std::invalid_argument("pad_to_pow2: data length must be n^2");
    int np = 1;
    while (np < n) np *= 2;
    Grid2D out(np, half_width * np / n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.at(i, j) = values[static_cast<size_t>(i) * n + j];
    return out;
}

double total_mass(const Grid2D& g) {
    double sum = 0.0;
    for (double v : g.data) sum += v;
    return sum;
}

double inner(const Grid2D& a, const Grid2D& b) {
    if (a.n != b.n) throw std::invalid_argument("inner: size mismatch");
    double sum = 0.0;
    for (size_t k = 0; k < a.data.size(); ++k) sum += a.data[k] * b.data[k];
    return sum;
}

double max_abs_diff(const Grid2D& a, const Grid2D& b) {
    if (a.n != b.n) throw std::invalid_argument("max_abs_diff: size mismatch");
    double m = 0.0;
    for (size_t k = 0; k < a.data.size(); ++k)
        m = std::max(m, std::abs(a.data[k] - b.data[k]));
    return m;
}

}  // namespace rsplit
