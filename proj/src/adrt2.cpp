#include "rsplit/adrt2.hpp"

#include <algorithm>
#include <cmath>

namespace rsplit {

namespace {

void collect_dline(int len, int h, int s, int col0, std::vector<std::pair<int, int>>& out) {
    if (len == 1) {
        out.emplace_back(h, col0);
        return;
    }
    const int m = len / 2;
    const int sh = s / 2;
    const int eps = s & 1;
    collect_dline(m, h, sh, col0, out);
    collect_dline(m, h + sh + eps, sh, col0 + m, out);
}

// One halving step of the forward sweep over column-major buffers of
// 2n-1 rows: block width m -> 2m.  Each output column is owned by one
// iteration, so the parallel and serial paths agree bitwise.
void forward_level(const std::vector<double>& in, std::vector<double>& out, int n, int m,
                   bool parallel) {
    const int rows = 2 * n - 1;
    const int blocks = n / (2 * m);
    const int pairs = blocks * m;
#pragma omp parallel for schedule(static) if (parallel)
    for (int t = 0; t < pairs; ++t) {
        const int b = t / m;
        const int s = t % m;
        const double* in_l = in.data() + static_cast<size_t>(2 * b * m + s) * rows;
        const double* in_r = in_l + static_cast<size_t>(m) * rows;
        for (int eps = 0; eps < 2; ++eps) {
            double* out_c = out.data() + static_cast<size_t>(b * 2 * m + 2 * s + eps) * rows;
            const int off = s + eps;
            const int vb = std::max(0, n - 1 - (2 * s + eps));
            std::fill(out_c, out_c + vb, 0.0);
            const int guard = rows - off;  // first h whose right read falls outside
            for (int h = vb; h < guard; ++h) out_c[h] = in_l[h] + in_r[h + off];
            for (int h = std::max(vb, guard); h < rows; ++h) out_c[h] = in_l[h];
        }
    }
}

// Transpose of forward_level: coarse buffer (block width 2m) -> fine (width m).
void adjoint_level(const std::vector<double>& in, std::vector<double>& out, int n, int m,
                   bool parallel) {
    const int rows = 2 * n - 1;
    const int blocks = n / (2 * m);
    const int pairs = blocks * m;
#pragma omp parallel for schedule(static) if (parallel)
    for (int t = 0; t < pairs; ++t) {
        const int b = t / m;
        const int s = t % m;
        const double* in_0 = in.data() + static_cast<size_t>(b * 2 * m + 2 * s) * rows;
        const double* in_1 = in_0 + rows;
        double* out_l = out.data() + static_cast<size_t>(2 * b * m + s) * rows;
        double* out_r = out_l + static_cast<size_t>(m) * rows;
        const int vb = std::max(0, n - 1 - s);
        std::fill(out_l, out_l + vb, 0.0);
        std::fill(out_r, out_r + vb, 0.0);
        for (int h = vb; h < rows; ++h) out_l[h] = in_0[h] + in_1[h];
        for (int h = vb; h < rows; ++h) {
            const double v0 = (h - s >= 0) ? in_0[h - s] : 0.0;
            const double v1 = (h - s - 1 >= 0) ? in_1[h - s - 1] : 0.0;
            out_r[h] = v0 + v1;
        }
    }
}

}  // namespace

DLine dline_cells(int n, int h, int s) {
    if (!is_power_of_two(n)) throw std::invalid_argument("dline_cells: n must be a power of two");
    if (s < 0 || s >= n) throw std::invalid_argument("dline_cells: slope out of [0, n-1]");
    DLine line{n, h, s, {}};
    std::vector<std::pair<int, int>> raw;
    collect_dline(n, h, s, 0, raw);
    for (const auto& cell : raw)
        if (cell.first >= 0 && cell.first < n) line.cells.push_back(cell);
    return line;
}

Quadrant2D drt_quadrant(const Grid2D& g, Exec ex) {
    const int n = g.n;
    const int rows = 2 * n - 1;
    const bool parallel = (ex == Exec::parallel);
    std::vector<double> buf_a(static_cast<size_t>(n) * rows, 0.0);
    std::vector<double> buf_b(static_cast<size_t>(n) * rows, 0.0);
    // level 0: column j holds the grid column embedded at h_index = i + (n-1)
#pragma omp parallel for schedule(static) if (parallel)
    for (int j = 0; j < n; ++j) {
        double* col = buf_a.data() + static_cast<size_t>(j) * rows;
        for (int i = 0; i < n; ++i) col[i + n - 1] = g.at(i, j);
    }
    std::vector<double>* in = &buf_a;
    std::vector<double>* out = &buf_b;
    for (int m = 1; m < n; m *= 2) {
        forward_level(*in, *out, n, m, parallel);
        std::swap(in, out);
    }
    Quadrant2D quad(n, Quad::a);
    quad.data = std::move(*in);
    return quad;
}

std::vector<double> sweep_adjoint(const Quadrant2D& quad, Exec ex) {
    const int n = quad.n;
    const int rows = 2 * n - 1;
    const bool parallel = (ex == Exec::parallel);
    std::vector<double> buf_a = quad.data;
    std::vector<double> buf_b(buf_a.size(), 0.0);
    std::vector<double>* in = &buf_a;
    std::vector<double>* out = &buf_b;
    for (int m = n / 2; m >= 1; m /= 2) {
        adjoint_level(*in, *out, n, m, parallel);
        std::swap(in, out);
    }
    std::vector<double> grid(static_cast<size_t>(n) * n, 0.0);
    const std::vector<double>& fin = *in;
#pragma omp parallel for schedule(static) if (parallel)
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            grid[static_cast<size_t>(i) * n + j] = fin[static_cast<size_t>(j) * rows + i + n - 1];
    return grid;
}

Grid2D quadrant_view(const Grid2D& g, Quad q) {
    const int n = g.n;
    if (q == Quad::a) return g;
    Grid2D out(n, g.half_width);
    switch (q) {
        case Quad::b:
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) out.at(i, j) = g.at(j, i);
            break;
        case Quad::c:
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) out.at(i, j) = g.at(j, n - 1 - i);
            break;
        case Quad::d:
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) out.at(i, j) = g.at(n - 1 - i, j);
            break;
        default:
            break;
    }
    return out;
}

void quadrant_view_adjoint(const std::vector<double>& view_data, Quad q, Grid2D& accum) {
    const int n = accum.n;
    if (view_data.size() != static_cast<size_t>(n) * n)
        throw std::invalid_argument("quadrant_view_adjoint: size mismatch");
    auto v = [&](int i, int j) { return view_data[static_cast<size_t>(i) * n + j]; };
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            switch (q) {
                case Quad::a: accum.at(i, j) += v(i, j); break;
                case Quad::b: accum.at(j, i) += v(i, j); break;
                case Quad::c: accum.at(j, n - 1 - i) += v(i, j); break;
                case Quad::d: accum.at(n - 1 - i, j) += v(i, j); break;
            }
        }
    }
}

Sinogram2D drt_forward(const Grid2D& g, Exec ex) {
    Sinogram2D sino(g.n);
    for (Quad q : kQuads) {
        Grid2D view = quadrant_view(g, q);
        Quadrant2D quad = drt_quadrant(view, ex);
        quad.label = q;
        sino[q] = std::move(quad);
    }
    return sino;
}

Grid2D backproject(const Sinogram2D& sino, double half_width, Exec ex) {
    const int n = sino.n;
    for (Quad q : kQuads)
        if (sino[q].n != n) throw std::invalid_argument("backproject: quadrant size mismatch");
    Grid2D accum(n, half_width);
    for (Quad q : kQuads) {
        std::vector<double> view = sweep_adjoint(sino[q], ex);
        quadrant_view_adjoint(view, q, accum);
    }
    const double scale = 1.0 / (4.0 * n * static_cast<double>(n));
    for (double& v : accum.data) v *= scale;
    return accum;
}

std::array<double, 2> quadrant_normal(Quad q, int s, int n) {
    const double theta = (n > 1) ? std::atan2(static_cast<double>(s), static_cast<double>(n - 1)) : 0.0;
    const double co = std::cos(theta);
    const double si = std::sin(theta);
    switch (q) {
        case Quad::a: return {co, si};
        case Quad::b: return {-si, -co};
        case Quad::c: return {-si, co};
        case Quad::d: return {-co, si};
    }
    return {1.0, 0.0};
}

ContinuousLine to_continuous(int h, int s, int n) {
    ContinuousLine out;
    out.angle = (n > 1) ? std::atan2(static_cast<double>(s), static_cast<double>(n - 1)) : 0.0;
    out.offset = std::cos(out.angle) *
                 (2.0 * h / n - 1.0 + (n > 1 ? static_cast<double>(s) / (n - 1) : 0.0));
    return out;
}

double continuous_radon_estimate(const Quadrant2D& q, int h_index, int s, double half_width) {
    const ContinuousLine line = to_continuous(h_index - q.height_offset(), s, q.n);
    const double density = q.n / (2.0 * half_width);
    return q.at(h_index, s) / (std::cos(line.angle) * density);
}

}  // namespace rsplit
