#include "rsplit/hypersolve.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

namespace rsplit {

Grid2D make_cosine_hump(std::array<double, 2> center, double scale, double amplitude,
                        const Grid2D& g_template) {
    Grid2D out(g_template.n, g_template.half_width);
    const int n = out.n;
    for (int i = 0; i < n; ++i) {
        const double d1 = out.x1(i) - center[0];
        for (int j = 0; j < n; ++j) {
            const double d2 = out.x2(j) - center[1];
            const double r2 = scale * scale * (d1 * d1 + d2 * d2);
            out.at(i, j) = r2 < 1.0 ? amplitude * std::cos(M_PI * r2 / 2.0) : 0.0;
        }
    }
    return out;
}

Grid2D sample_humps(const std::vector<HumpSpec>& humps, const Grid2D& g_template) {
    Grid2D out(g_template.n, g_template.half_width);
    for (const HumpSpec& h : humps) {
        const Grid2D one = make_cosine_hump(h.center, h.scale, h.amplitude, g_template);
        for (size_t k = 0; k < out.data.size(); ++k) out.data[k] += one.data[k];
    }
    return out;
}

Grid2D standard_hump(int n, double half_width) {
    return make_cosine_hump({0.0, 0.0}, 1.0, 1.0, Grid2D(n, half_width));
}

std::vector<HumpSpec> two_hump_specs() {
    return {{{-1.0, -1.5}, 1.0, 1.0}, {{0.75, 1.1}, 1.25, 1.5}};
}

double slope_shift_amount(Quad label, int s, int n, double half_width, double speed, double t) {
    (void)label;  // theta depends only on the slope under the fixed conventions
    const double theta = (n > 1) ? std::atan2(static_cast<double>(s), static_cast<double>(n - 1)) : 0.0;
    return speed * t * n / (2.0 * half_width * std::cos(theta));
}

void advect_sinogram(Sinogram2D& hat, std::array<double, 2> theta, double T, double half_width,
                     BoundarySpec boundary) {
    const int n = hat.n;
    shift_sinogram_slices(
        hat,
        [&](Quad q, int s) {
            const auto omega = quadrant_normal(q, s, n);
            const double speed = theta[0] * omega[0] + theta[1] * omega[1];
            return slope_shift_amount(q, s, n, half_width, speed, T);
        },
        boundary);
}

void evolve_pressure_hat(Sinogram2D& p_hat, const MaterialParams& params, double T,
                         double half_width, BoundarySpec boundary) {
    const int n = p_hat.n;
    const double c = params.sound_speed();
#pragma omp parallel for collapse(2) schedule(static)
    for (int qi = 0; qi < 4; ++qi) {
        for (int s = 0; s < n; ++s) {
            Quadrant2D& quad = p_hat.quadrants[qi];
            const double dh = slope_shift_amount(static_cast<Quad>(qi), s, n, half_width, c, T);
            auto col = quad.slope_column(s).subspan(quad.valid_begin(s));
            const std::span<const double> src{col.data(), col.size()};
            std::vector<double> fwd(col.size()), bwd(col.size());
            shift_slice_into(src, dh, boundary, fwd);
            shift_slice_into(src, -dh, boundary, bwd);
            for (size_t k = 0; k < col.size(); ++k) col[k] = 0.5 * (fwd[k] + bwd[k]);
        }
    }
}

void acoustic_evolve_hat(Sinogram2D& p_hat, Sinogram2D& u_hat, Sinogram2D& v_hat,
                         const MaterialParams& params, double T, double half_width,
                         BoundarySpec boundary, bool skip_nu) {
    const int n = p_hat.n;
    if (u_hat.n != n || v_hat.n != n)
        throw std::invalid_argument("acoustic_evolve_hat: size mismatch");
    const double c = params.sound_speed();
    const double Z = params.impedance();
#pragma omp parallel for collapse(2) schedule(static)
    for (int qi = 0; qi < 4; ++qi) {
        for (int s = 0; s < n; ++s) {
            const Quad q = static_cast<Quad>(qi);
            const auto omega = quadrant_normal(q, s, n);
            const double dh = slope_shift_amount(q, s, n, half_width, c, T);
            const int vb = p_hat.quadrants[qi].valid_begin(s);
            auto pc = p_hat.quadrants[qi].slope_column(s).subspan(vb);
            auto uc = u_hat.quadrants[qi].slope_column(s).subspan(vb);
            auto vc = v_hat.quadrants[qi].slope_column(s).subspan(vb);
            const size_t len = pc.size();

            std::vector<double> mu(len), nu(len);
            for (size_t k = 0; k < len; ++k) {
                mu[k] = omega[0] * uc[k] + omega[1] * vc[k];
                nu[k] = skip_nu ? 0.0 : -omega[1] * uc[k] + omega[0] * vc[k];
            }
            std::vector<double> p_fwd(len), p_bwd(len), mu_fwd(len), mu_bwd(len);
            shift_slice_into({pc.data(), len}, dh, boundary, p_fwd);
            shift_slice_into({pc.data(), len}, -dh, boundary, p_bwd);
            shift_slice_into(mu, dh, boundary, mu_fwd);
            shift_slice_into(mu, -dh, boundary, mu_bwd);
            for (size_t k = 0; k < len; ++k) {
                const double p_new = 0.5 * (p_fwd[k] + p_bwd[k]) + 0.5 * Z * (mu_fwd[k] - mu_bwd[k]);
                const double mu_new =
                    0.5 / Z * (p_fwd[k] - p_bwd[k]) + 0.5 * (mu_fwd[k] + mu_bwd[k]);
                pc[k] = p_new;
                uc[k] = omega[0] * mu_new - omega[1] * nu[k];
                vc[k] = omega[1] * mu_new + omega[0] * nu[k];
            }
        }
    }
}

TransportResult solve_transport(const Grid2D& q0, std::array<double, 2> theta, double T,
                                const SolveOptions& opts) {
    const int factor = 2 * opts.oversample_p;
    Grid2D big = prolong(q0, factor);
    Sinogram2D hat = drt_forward(big, opts.exec);
    advect_sinogram(hat, theta, T, big.half_width, opts.boundary);
    InvertResult inv = invert_drt(hat, q0.n, q0.half_width, opts.invert_options());
    return {std::move(inv.grid), std::move(inv.cg)};
}

AcousticResult solve_acoustics(const AcousticState& q0, const MaterialParams& params, double T,
                               const SolveOptions& opts) {
    q0.validate();
    const int factor = 2 * opts.oversample_p;
    Sinogram2D p_hat = drt_forward(prolong(q0.p, factor), opts.exec);
    Sinogram2D u_hat = drt_forward(prolong(q0.u, factor), opts.exec);
    Sinogram2D v_hat = drt_forward(prolong(q0.v, factor), opts.exec);
    acoustic_evolve_hat(p_hat, u_hat, v_hat, params, T, q0.p.half_width, opts.boundary);
    const InvertOptions io = opts.invert_options();
    InvertResult ip = invert_drt(p_hat, q0.p.n, q0.p.half_width, io);
    InvertResult iu = invert_drt(u_hat, q0.p.n, q0.p.half_width, io);
    InvertResult iv = invert_drt(v_hat, q0.p.n, q0.p.half_width, io);
    AcousticResult out;
    out.state = {std::move(ip.grid), std::move(iu.grid), std::move(iv.grid)};
    out.cg = {std::move(ip.cg), std::move(iu.cg), std::move(iv.cg)};
    return out;
}

std::vector<PressureSnapshot> acoustic_pressure_snapshots(const Grid2D& p0,
                                                          const MaterialParams& params,
                                                          const std::vector<double>& times,
                                                          const SolveOptions& opts) {
    const int factor = 2 * opts.oversample_p;
    const Sinogram2D hat0 = drt_forward(prolong(p0, factor), opts.exec);
    const InvertOptions io = opts.invert_options();
    std::vector<PressureSnapshot> out;
    out.reserve(times.size());
    for (double t : times) {
        Sinogram2D hat = hat0;
        evolve_pressure_hat(hat, params, t, p0.half_width, opts.boundary);
        InvertResult inv = invert_drt(hat, p0.n, p0.half_width, io);
        out.push_back({t, std::move(inv.grid), std::move(inv.cg)});
    }
    return out;
}

double RadialProfile::sample(double r) const {
    if (p.empty()) return 0.0;
    const double pos = r / dr - 0.5;
    if (pos <= 0.0) return p.front();
    const auto k = static_cast<size_t>(pos);
    if (k + 1 >= p.size()) return p.back();
    const double w = pos - static_cast<double>(k);
    return (1.0 - w) * p[k] + w * p[k + 1];
}

namespace {

// monotonized-central limiter
double mc_limiter(double theta) {
    return std::max(0.0, std::min({(1.0 + theta) / 2.0, 2.0, 2.0 * theta}));
}

}  // namespace

RadialProfile radial_reference_acoustics(int n_cells, double T, double r_max) {
    if (n_cells < 100) throw std::invalid_argument("radial_reference_acoustics: need >= 100 cells");
    const double K0 = 1.0, rho0 = 1.0;
    const double c = std::sqrt(K0 / rho0);
    const double Z = std::sqrt(K0 * rho0);
    const int m = n_cells;
    const double dr = r_max / m;

    RadialProfile prof;
    prof.dr = dr;
    prof.time = T;
    std::vector<double> p(m), u(m, 0.0);
    for (int k = 0; k < m; ++k) {
        const double r = (k + 0.5) * dr;
        p[k] = r * r < 1.0 ? std::cos(M_PI * r * r / 2.0) : 0.0;
    }
    if (T <= 0.0) {
        prof.p = std::move(p);
        return prof;
    }

    // Godunov wave propagation with MC-limited second-order corrections,
    // two ghost cells per side; ext index e holds cell e - 2
    const int em = m + 4;
    std::vector<double> pe(em), ue(em);
    std::vector<double> a1(em), a2(em);  // wave strengths at interface (e-1, e)
    std::vector<double> fp(em), fu(em);  // limited correction fluxes
    std::vector<double> pn(m), un(m);

    double t = 0.0;
    while (t < T) {
        const double dt = std::min(0.9 * dr / c, T - t);
        const double lam = dt / dr;

        // Strang half-step of the geometric source p_t = -K0 u / r
        for (int k = 0; k < m; ++k) p[k] -= 0.5 * dt * K0 * u[k] / ((k + 0.5) * dr);

        for (int k = 0; k < m; ++k) {
            pe[k + 2] = p[k];
            ue[k + 2] = u[k];
        }
        pe[1] = p[0];
        ue[1] = -u[0];  // reflecting wall at r = 0
        pe[0] = p[1];
        ue[0] = -u[1];
        pe[m + 2] = p[m - 1];
        ue[m + 2] = u[m - 1];  // outflow at r_max
        pe[m + 3] = p[m - 1];
        ue[m + 3] = u[m - 1];

        for (int e = 1; e < em; ++e) {
            const double dp = pe[e] - pe[e - 1];
            const double du = ue[e] - ue[e - 1];
            a1[e] = (Z * du - dp) / (2.0 * Z);  // left-going, speed -c
            a2[e] = (Z * du + dp) / (2.0 * Z);  // right-going, speed +c
        }
        const double corr = 0.5 * c * (1.0 - lam * c);
        for (int e = 2; e < em - 1; ++e) {
            const auto ratio = [](double up, double local) {
                return local != 0.0 ? up / local : 0.0;
            };
            const double w1 = mc_limiter(ratio(a1[e + 1], a1[e])) * a1[e];
            const double w2 = mc_limiter(ratio(a2[e - 1], a2[e])) * a2[e];
            fp[e] = corr * (-Z * w1 + Z * w2);
            fu[e] = corr * (w1 + w2);
        }
        for (int k = 0; k < m; ++k) {
            const int e = k + 2;
            // upwind fluctuations plus limited corrections
            pn[k] = p[k] - lam * (c * a2[e] * Z + c * a1[e + 1] * Z) - lam * (fp[e + 1] - fp[e]);
            un[k] = u[k] - lam * (c * a2[e] - c * a1[e + 1]) - lam * (fu[e + 1] - fu[e]);
        }
        for (int k = 0; k < m; ++k) pn[k] -= 0.5 * dt * K0 * un[k] / ((k + 0.5) * dr);
        p.swap(pn);
        u.swap(un);
        t += dt;
    }
    prof.p = std::move(p);
    return prof;
}

double weighted_error(const Grid2D& q, const RadialProfile& ref, int p_norm) {
    if (p_norm != 1 && p_norm != 2) throw std::invalid_argument("weighted_error: p must be 1 or 2");
    const int n = q.n;
    const double drho = std::sqrt(2.0) * q.cell_size();
    double sum = 0.0;
    for (int i = n / 2; i < n; ++i) {
        const double rho = std::sqrt(2.0) * q.x1(i);
        const double diff = std::abs(q.at(i, n - 1 - i) - ref.sample(rho));
        sum += (p_norm == 1 ? diff : diff * diff) * rho * drho;
    }
    return p_norm == 1 ? sum : std::sqrt(sum);
}

std::vector<double> ConvergenceTable::l1_orders() const {
    std::vector<double> orders;
    for (size_t k = 1; k < rows.size(); ++k)
        orders.push_back(std::log2(rows[k - 1].l1_T / rows[k].l1_T));
    return orders;
}

std::vector<double> ConvergenceTable::l2_orders() const {
    std::vector<double> orders;
    for (size_t k = 1; k < rows.size(); ++k)
        orders.push_back(std::log2(rows[k - 1].l2_T / rows[k].l2_T));
    return orders;
}

ConvergenceTable convergence_study(const std::vector<int>& Ns, double T, const SolveOptions& opts,
                                   int oracle_cells, std::ostream* progress) {
    for (int n : Ns)
        if (!is_power_of_two(n))
            throw std::invalid_argument("convergence_study: sizes must be powers of two");
    const RadialProfile ref_T = radial_reference_acoustics(oracle_cells, T);
    const RadialProfile ref_0 = radial_reference_acoustics(oracle_cells, 0.0);

    ConvergenceTable table;
    table.T = T;
    for (int n : Ns) {
        const Grid2D p0 = standard_hump(n);
        const auto snaps = acoustic_pressure_snapshots(p0, MaterialParams{}, {0.0, T}, opts);
        ConvergenceRow row;
        row.n = n;
        row.l1_t0 = weighted_error(snaps[0].p, ref_0, 1);
        row.l2_t0 = weighted_error(snaps[0].p, ref_0, 2);
        row.l1_T = weighted_error(snaps[1].p, ref_T, 1);
        row.l2_T = weighted_error(snaps[1].p, ref_T, 2);
        row.cg_iterations_T = snaps[1].cg.iterations;
        table.rows.push_back(row);
        if (progress)
            (*progress) << "n=" << n << "  L1(0)=" << row.l1_t0 << "  L1(" << T << ")=" << row.l1_T
                        << "  L2(0)=" << row.l2_t0 << "  L2(" << T << ")=" << row.l2_T
                        << "  cg_iters=" << row.cg_iterations_T << std::endl;
    }
    return table;
}

void write_convergence_csv(const ConvergenceTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "N,L1_t0,L1_T,L2_t0,L2_T,order_L1,order_L2,cg_iterations\n";
    const auto o1 = table.l1_orders();
    const auto o2 = table.l2_orders();
    for (size_t k = 0; k < table.rows.size(); ++k) {
        const ConvergenceRow& r = table.rows[k];
        out << r.n << ',' << r.l1_t0 << ',' << r.l1_T << ',' << r.l2_t0 << ',' << r.l2_T << ',';
        if (k > 0)
            out << o1[k - 1] << ',' << o2[k - 1];
        else
            out << ',';
        out << ',' << r.cg_iterations_T << '\n';
    }
}

namespace {

struct DiffNorms {
    double l1 = 0, l2 = 0;
};

DiffNorms diff_norms(const Grid2D& a, const Grid2D& b, double window_half_width) {
    DiffNorms out;
    const double cell_area = a.cell_size() * a.cell_size();
    for (int i = 0; i < a.n; ++i) {
        if (std::abs(a.x1(i)) > window_half_width) continue;
        for (int j = 0; j < a.n; ++j) {
            if (std::abs(a.x2(j)) > window_half_width) continue;
            const double d = std::abs(a.at(i, j) - b.at(i, j));
            out.l1 += d * cell_area;
            out.l2 += d * d * cell_area;
        }
    }
    out.l2 = std::sqrt(out.l2);
    return out;
}

}  // namespace

DecaySeries boundary_decay_study(double T_max, int n, const SolveOptions& opts,
                                 std::vector<double> times, std::ostream* progress) {
    if (!is_power_of_two(n)) throw std::invalid_argument("boundary_decay_study: n must be a power of two");
    if (times.empty()) {
        for (double t = 0.5; t <= std::min(6.0, T_max) + 1e-9; t += 0.5) times.push_back(t);
        for (double t = 7.0; t <= T_max + 1e-9; t += 1.0) times.push_back(t);
    }
    const double L = 4.0;
    const Grid2D p0 = standard_hump(n, L);
    const Grid2D p0_wide = standard_hump(2 * n, 2 * L);

    const auto narrow = acoustic_pressure_snapshots(p0, MaterialParams{}, times, opts);
    const auto wide = acoustic_pressure_snapshots(p0_wide, MaterialParams{}, times, opts);

    // radial reference on a domain wide enough that no boundary reaches the
    // comparison window within T_max
    const double r_max = std::max(16.0, std::sqrt(2.0) * L + T_max + 2.0);
    const int ref_cells = static_cast<int>(r_max / 0.004);

    DecaySeries series;
    series.n = n;
    series.T_max = T_max;
    for (size_t k = 0; k < times.size(); ++k) {
        // central block of the wide run covers the same cells as the narrow run
        Grid2D ref(n, L);
        const Grid2D& w = wide[k].p;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) ref.at(i, j) = w.at(i + n / 2, j + n / 2);
        const DiffNorms full = diff_norms(narrow[k].p, ref, L);
        const DiffNorms interior = diff_norms(narrow[k].p, ref, 0.75 * L);

        const RadialProfile prof = radial_reference_acoustics(ref_cells, times[k], r_max);
        Grid2D truth(n, L);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                truth.at(i, j) = prof.sample(std::hypot(truth.x1(i), truth.x2(j)));
        const DiffNorms vs_truth = diff_norms(narrow[k].p, truth, L);

        series.points.push_back(
            {times[k], full.l1, full.l2, interior.l1, interior.l2, vs_truth.l1});
        if (progress)
            (*progress) << "t=" << times[k] << "  L1=" << full.l1 << "  L2=" << full.l2
                        << "  L1_int=" << interior.l1 << "  L2_int=" << interior.l2
                        << "  L1_truth=" << vs_truth.l1 << std::endl;
    }

    size_t peak = 0;
    for (size_t k = 1; k < series.points.size(); ++k)
        if (series.points[k].l1_full > series.points[peak].l1_full) peak = k;
    series.peak_time = series.points[peak].t;

    // least-squares slope of log(e) vs log(t) well past the peak, skipping
    // exact zeros (the wide-reference comparison degenerates to 0 - 0 once
    // both runs have drained their slices)
    const double fit_t0 = std::max(series.peak_time + 1.0, 0.35 * T_max);
    const auto fit_slope = [&](auto&& value_of) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int count = 0;
        for (const DecayPoint& pt : series.points) {
            const double v = value_of(pt);
            if (pt.t < fit_t0 || v <= 0.0) continue;
            const double x = std::log(pt.t), y = std::log(v);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++count;
        }
        return count >= 2 ? (count * sxy - sx * sy) / (count * sxx - sx * sx) : 0.0;
    };
    series.fitted_slope = fit_slope([](const DecayPoint& pt) { return pt.l1_full; });
    series.truth_slope = fit_slope([](const DecayPoint& pt) { return pt.l1_truth; });
    return series;
}

void write_decay_csv(const DecaySeries& series, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "t,L1_full,L2_full,L1_interior,L2_interior,L1_truth\n";
    for (const DecayPoint& pt : series.points)
        out << pt.t << ',' << pt.l1_full << ',' << pt.l2_full << ',' << pt.l1_interior << ','
            << pt.l2_interior << ',' << pt.l1_truth << '\n';
    out << "# peak_time=" << series.peak_time << " fitted_slope=" << series.fitted_slope
        << " truth_slope=" << series.truth_slope << '\n';
}

}  // namespace rsplit
