#include "rsplit/adrt3.hpp"

#include <algorithm>
#include <stdexcept>

namespace rsplit {

namespace {

void collect_dplane(int len, int h, int s1, int s2, int j0, int k0,
                    std::vector<std::array<int, 3>>& out) {
    if (len == 1) {
        out.push_back({h, j0, k0});
        return;
    }
    const int m = len / 2;
    const int t1 = s1 / 2, e1 = s1 & 1;
    const int t2 = s2 / 2, e2 = s2 & 1;
    collect_dplane(m, h, t1, t2, j0, k0, out);                          // LL
    collect_dplane(m, h + t1 + e1, t1, t2, j0 + m, k0, out);            // RL
    collect_dplane(m, h + t2 + e2, t1, t2, j0, k0 + m, out);            // LR
    collect_dplane(m, h + t1 + e1 + t2 + e2, t1, t2, j0 + m, k0 + m, out);  // RR
}

// One halving step of the 3D forward sweep.  Buffers keep each height
// column contiguous: buf[(cj * n + ck) * rows + h].
void forward_level3(const std::vector<double>& in, std::vector<double>& out, int n, int m,
                    bool parallel) {
    const int rows = 3 * n - 2;
    const int blocks = n / (2 * m);
    const long pairs = static_cast<long>(blocks) * m * blocks * m;
    const auto col = [&](int cj, int ck) {
        return in.data() + (static_cast<size_t>(cj) * n + ck) * rows;
    };
#pragma omp parallel for schedule(static) if (parallel)
    for (long t = 0; t < pairs; ++t) {
        const int s2 = static_cast<int>(t % m);
        const int bk = static_cast<int>((t / m) % blocks);
        const int s1 = static_cast<int>((t / (static_cast<long>(m) * blocks)) % m);
        const int bj = static_cast<int>(t / (static_cast<long>(m) * blocks * m));
        const double* in_ll = col(2 * bj * m + s1, 2 * bk * m + s2);
        const double* in_rl = col((2 * bj + 1) * m + s1, 2 * bk * m + s2);
        const double* in_lr = col(2 * bj * m + s1, (2 * bk + 1) * m + s2);
        const double* in_rr = col((2 * bj + 1) * m + s1, (2 * bk + 1) * m + s2);
        for (int e1 = 0; e1 < 2; ++e1) {
            for (int e2 = 0; e2 < 2; ++e2) {
                const int oj = bj * 2 * m + 2 * s1 + e1;
                const int ok = bk * 2 * m + 2 * s2 + e2;
                double* out_c = out.data() + (static_cast<size_t>(oj) * n + ok) * rows;
                const int o1 = s1 + e1;
                const int o2 = s2 + e2;
                const int vb = std::max(0, 2 * (n - 1) - (2 * s1 + e1) - (2 * s2 + e2));
                std::fill(out_c, out_c + vb, 0.0);
                for (int h = vb; h < rows; ++h) {
                    double v = in_ll[h];
                    if (h + o1 < rows) v += in_rl[h + o1];
                    if (h + o2 < rows) v += in_lr[h + o2];
                    if (h + o1 + o2 < rows) v += in_rr[h + o1 + o2];
                    out_c[h] = v;
                }
            }
        }
    }
}

void adjoint_level3(const std::vector<double>& in, std::vector<double>& out, int n, int m,
                    bool parallel) {
    const int rows = 3 * n - 2;
    const int blocks = n / (2 * m);
    const long pairs = static_cast<long>(blocks) * m * blocks * m;
    const auto col = [&](const std::vector<double>& buf, int cj, int ck) {
        return buf.data() + (static_cast<size_t>(cj) * n + ck) * rows;
    };
#pragma omp parallel for schedule(static) if (parallel)
    for (long t = 0; t < pairs; ++t) {
        const int s2 = static_cast<int>(t % m);
        const int bk = static_cast<int>((t / m) % blocks);
        const int s1 = static_cast<int>((t / (static_cast<long>(m) * blocks)) % m);
        const int bj = static_cast<int>(t / (static_cast<long>(m) * blocks * m));
        const double* in_c[2][2];
        for (int e1 = 0; e1 < 2; ++e1)
            for (int e2 = 0; e2 < 2; ++e2)
                in_c[e1][e2] = col(in, bj * 2 * m + 2 * s1 + e1, bk * 2 * m + 2 * s2 + e2);
        for (int rj = 0; rj < 2; ++rj) {
            for (int rk = 0; rk < 2; ++rk) {
                double* out_c = out.data() +
                                (static_cast<size_t>((2 * bj + rj) * m + s1) * n +
                                 (2 * bk + rk) * m + s2) *
                                    rows;
                for (int h = 0; h < rows; ++h) {
                    double v = 0.0;
                    for (int e1 = 0; e1 < 2; ++e1) {
                        for (int e2 = 0; e2 < 2; ++e2) {
                            const int src = h - (rj ? s1 + e1 : 0) - (rk ? s2 + e2 : 0);
                            if (src >= 0) v += in_c[e1][e2][src];
                        }
                    }
                    out_c[h] = v;
                }
            }
        }
    }
}

Hexadecant3D sweep_forward3(const Grid3D& g, Exec ex) {
    const int n = g.n;
    const int rows = 3 * n - 2;
    const bool parallel = (ex == Exec::parallel);
    std::vector<double> buf_a(static_cast<size_t>(n) * n * rows, 0.0);
    std::vector<double> buf_b(buf_a.size(), 0.0);
#pragma omp parallel for schedule(static) if (parallel)
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            double* colp = buf_a.data() + (static_cast<size_t>(j) * n + k) * rows;
            for (int i = 0; i < n; ++i) colp[i + 2 * (n - 1)] = g.at(i, j, k);
        }
    std::vector<double>* in = &buf_a;
    std::vector<double>* out = &buf_b;
    for (int m = 1; m < n; m *= 2) {
        forward_level3(*in, *out, n, m, parallel);
        std::swap(in, out);
    }
    Hexadecant3D hex(n, HexLabel{});
    hex.data = std::move(*in);
    return hex;
}

}  // namespace

std::vector<std::array<int, 3>> dplane_cells(int n, int h, int s1, int s2) {
    if (!is_power_of_two(n)) throw std::invalid_argument("dplane_cells: n must be a power of two");
    if (s1 < 0 || s1 >= n || s2 < 0 || s2 >= n)
        throw std::invalid_argument("dplane_cells: slopes out of [0, n-1]");
    std::vector<std::array<int, 3>> cells;
    collect_dplane(n, h, s1, s2, 0, 0, cells);
    return cells;
}

Grid3D hexadecant_view(const Grid3D& g, HexLabel label) {
    const int n = g.n;
    Grid3D out(n, g.half_width);
    const auto map2 = [n](Quad q, int i, int j) -> std::array<int, 2> {
        switch (q) {
            case Quad::a: return {i, j};
            case Quad::b: return {j, i};
            case Quad::c: return {j, n - 1 - i};
            case Quad::d: return {n - 1 - i, j};
        }
        return {i, j};
    };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const auto ik = map2(label.second, i, k);
                const auto ij = map2(label.first, ik[0], j);
                out.at(i, j, k) = g.at(ij[0], ij[1], ik[1]);
            }
    return out;
}

void hexadecant_view_adjoint(const std::vector<double>& view_data, HexLabel label, Grid3D& accum) {
    const int n = accum.n;
    if (view_data.size() != static_cast<size_t>(n) * n * n)
        throw std::invalid_argument("hexadecant_view_adjoint: size mismatch");
    const auto map2 = [n](Quad q, int i, int j) -> std::array<int, 2> {
        switch (q) {
            case Quad::a: return {i, j};
            case Quad::b: return {j, i};
            case Quad::c: return {j, n - 1 - i};
            case Quad::d: return {n - 1 - i, j};
        }
        return {i, j};
    };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const auto ik = map2(label.second, i, k);
                const auto ij = map2(label.first, ik[0], j);
                accum.at(ij[0], ij[1], ik[1]) +=
                    view_data[(static_cast<size_t>(i) * n + j) * n + k];
            }
}

Sinogram3D drt3_forward(const Grid3D& g, Exec ex) {
    Sinogram3D sino(g.n);
    for (int idx = 0; idx < 16; ++idx) {
        const HexLabel label = HexLabel::from_index(idx);
        Grid3D view = hexadecant_view(g, label);
        Hexadecant3D hex = sweep_forward3(view, ex);
        hex.label = label;
        sino.hexadecants[idx] = std::move(hex);
    }
    return sino;
}

std::vector<double> sweep_adjoint3(const Hexadecant3D& hex, Exec ex) {
    const int n = hex.n;
    const int rows = 3 * n - 2;
    const bool parallel = (ex == Exec::parallel);
    std::vector<double> buf_a = hex.data;
    std::vector<double> buf_b(buf_a.size(), 0.0);
    std::vector<double>* in = &buf_a;
    std::vector<double>* out = &buf_b;
    for (int m = n / 2; m >= 1; m /= 2) {
        adjoint_level3(*in, *out, n, m, parallel);
        std::swap(in, out);
    }
    std::vector<double> grid(static_cast<size_t>(n) * n * n, 0.0);
    const std::vector<double>& fin = *in;
#pragma omp parallel for schedule(static) if (parallel)
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            const double* colp = fin.data() + (static_cast<size_t>(j) * n + k) * rows;
            for (int i = 0; i < n; ++i)
                grid[(static_cast<size_t>(i) * n + j) * n + k] = colp[i + 2 * (n - 1)];
        }
    return grid;
}

Grid3D backproject3(const Sinogram3D& sino, double half_width, Exec ex) {
    const int n = sino.n;
    if (sino.hexadecants.size() != 16)
        throw std::invalid_argument("backproject3: expected 16 hexadecants");
    for (const auto& hex : sino.hexadecants)
        if (hex.n != n) throw std::invalid_argument("backproject3: hexadecant size mismatch");
    Grid3D accum(n, half_width);
    for (const auto& hex : sino.hexadecants) {
        std::vector<double> view = sweep_adjoint3(hex, ex);
        hexadecant_view_adjoint(view, hex.label, accum);
    }
    const double scale = 1.0 / (16.0 * n * static_cast<double>(n) * n);
    for (double& v : accum.data) v *= scale;
    return accum;
}

}  // namespace rsplit
