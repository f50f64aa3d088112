#include "rsplit/dispinterp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rsplit/shift.hpp"

namespace rsplit {

namespace {

constexpr BoundarySpec kZeroBoundary{BoundaryKind::zero};

double norm2(std::span<const double> v) {
    double sum = 0.0;
    for (double x : v) sum += x * x;
    return std::sqrt(sum);
}

double dot(std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (size_t k = 0; k < a.size(); ++k) sum += a[k] * b[k];
    return sum;
}

// correlation of target against the template moved by an integer delta,
// summed over the overlap
double correlate(std::span<const double> tmpl, std::span<const double> target, long delta) {
    const long len = static_cast<long>(tmpl.size());
    const long lo = std::max<long>(0, delta);
    const long hi = std::min(len, len + delta);
    double sum = 0.0;
    for (long h = lo; h < hi; ++h)
        sum += target[static_cast<size_t>(h)] * tmpl[static_cast<size_t>(h - delta)];
    return sum;
}

}  // namespace

double template_fit(std::span<const double> phi1, std::span<const double> phi2) {
    if (phi1.size() != phi2.size()) throw std::invalid_argument("template_fit: length mismatch");
    const double n1 = norm2(phi1);
    if (n1 == 0.0) throw std::invalid_argument("template_fit: degenerate all-zero template");
    const long len = static_cast<long>(phi1.size());

    // misfit on the zero-extended line: |phi2|^2 + |phi1|^2 - 2 corr(delta),
    // so template mass carried off the stored window still counts against
    // the fit and the search cannot cheat by ejecting the template
    const double base = n1 * n1 + dot(phi2, phi2);
    const auto misfit = [&](long delta) { return base - 2.0 * correlate(phi1, phi2, delta); };

    long best = 0;
    double best_f = misfit(0);
    for (long delta = -(len - 1); delta <= len - 1; ++delta) {
        const double f = misfit(delta);
        if (f < best_f || (f == best_f && std::abs(delta) < std::abs(best))) {
            best_f = f;
            best = delta;
        }
    }
    if (best_f <= 0.0 || std::abs(best) == len - 1) return static_cast<double>(best);
    const double fm = misfit(best - 1);
    const double fp = misfit(best + 1);
    const double denom = fm - 2.0 * best_f + fp;
    if (denom <= 0.0) return static_cast<double>(best);
    const double offset = 0.5 * (fm - fp) / denom;
    // sub-cell corrections below rounding jitter would break exact matches
    if (std::abs(offset) >= 1.0 || std::abs(offset) < 1e-9) return static_cast<double>(best);
    return static_cast<double>(best) + offset;
}

std::vector<double> SliceDecomposition::unexplained() const {
    std::vector<double> out = base;
    for (const SliceComponent& comp : components)
        for (size_t k = 0; k < out.size(); ++k) out[k] -= comp.mask[k] * base[k];
    return out;
}

SliceDecomposition transport_reversal(std::span<const double> phi1, std::span<const double> phi2,
                                      int K_max, double tol) {
    if (phi1.size() != phi2.size())
        throw std::invalid_argument("transport_reversal: length mismatch");
    if (K_max < 1) throw std::invalid_argument("transport_reversal: K_max must be >= 1");
    if (norm2(phi1) == 0.0)
        throw std::invalid_argument("transport_reversal: degenerate all-zero template");
    const long len = static_cast<long>(phi1.size());
    const double target = tol * norm2(phi2);

    SliceDecomposition dec;
    dec.base.assign(phi1.begin(), phi1.end());
    std::vector<double> r(phi2.begin(), phi2.end());

    struct RawComponent {
        double nu;
        double coeff;
        std::vector<char> window;  // grouped and weighted later
        std::vector<double> mask;  // set for value-split pair components
    };
    std::vector<RawComponent> raw;

    // prefix sums of phi1^2 give the shifted-template norm per integer shift
    std::vector<double> prefix_sq(phi1.size() + 1, 0.0);
    for (long h = 0; h < len; ++h) prefix_sq[h + 1] = prefix_sq[h] + phi1[h] * phi1[h];
    const double template_sq = prefix_sq[len];
    const auto shifted_sq = [&](long delta) {
        return delta >= 0 ? prefix_sq[len - delta] : template_sq - prefix_sq[-delta];
    };

    for (int k = 0; k < K_max; ++k) {
        // dominant shift of the residual against the template, scored by the
        // least-squares reduction; the norm is clamped from below so slivers
        // of the template at the array edge cannot win on noise
        long best = 0;
        double best_score = -1.0;
        auto score_at = [&](long delta) {
            const double ss = std::max(shifted_sq(delta), 0.25 * template_sq);
            const double c = correlate(phi1, r, delta);
            return c * c / ss;
        };
        for (long delta = -(len - 1); delta <= len - 1; ++delta) {
            const double score = score_at(delta);
            if (score > best_score || (score == best_score && std::abs(delta) < std::abs(best))) {
                best_score = score;
                best = delta;
            }
        }
        if (best_score <= 0.0) break;

        // counter-propagating pair candidate: wave-like data moves the two
        // characteristic parts of phi1 by opposite shifts, which a single
        // correlation peak cannot represent once the parts overlap.  With
        // phi2(s) = R(s-v) + L(s+v) and R + L = phi1, the right mover
        // telescopes from the upper end of the data; scanning v on the
        // fitted movers gives a sharp maximum at the true displacement.
        if (k == 0) {
            struct PairFit {
                double reduction = -1.0;
                double a_r = 0.0, a_l = 0.0;
                std::vector<double> mask_r, mask_l, t_r, t_l;
            };
            const auto value_at = [len](const auto& data, double pos) {
                if (pos <= -1.0 || pos >= static_cast<double>(len)) return 0.0;
                const double fl = std::floor(pos);
                const double w = pos - fl;
                const long k = static_cast<long>(fl);
                const double lo = (k >= 0 && k < len) ? data[k] : 0.0;
                const double hi = (k + 1 >= 0 && k + 1 < len) ? data[k + 1] : 0.0;
                return (1.0 - w) * lo + w * hi;
            };
            const auto fit_pair = [&](double v_frac) {
                PairFit fit;
                // the telescoped recursion carries errors with unit gain, so
                // each mover sample is clamped between zero and the profile
                std::vector<double> mover(phi1.size(), 0.0);
                for (long u = len - 1; u >= 0; --u) {
                    const double raw = value_at(r, u + v_frac) - value_at(phi1, u + 2.0 * v_frac) +
                                       value_at(mover, u + 2.0 * v_frac);
                    mover[u] = std::clamp(raw, std::min(0.0, phi1[u]), std::max(0.0, phi1[u]));
                }
                fit.mask_r.assign(phi1.size(), 0.0);
                fit.mask_l.assign(phi1.size(), 0.0);
                for (long u = 0; u < len; ++u) {
                    if (phi1[u] == 0.0) continue;
                    const double w = std::clamp(mover[u] / phi1[u], 0.0, 1.0);
                    fit.mask_r[u] = w;
                    fit.mask_l[u] = 1.0 - w;
                }
                fit.t_r.resize(phi1.size());
                fit.t_l.resize(phi1.size());
                std::vector<double> work(phi1.size());
                for (long u = 0; u < len; ++u) work[u] = fit.mask_r[u] * phi1[u];
                shift_slice_into(work, v_frac, kZeroBoundary, fit.t_r);
                for (long u = 0; u < len; ++u) work[u] = fit.mask_l[u] * phi1[u];
                shift_slice_into(work, -v_frac, kZeroBoundary, fit.t_l);
                const double g11 = dot(fit.t_r, fit.t_r);
                const double g22 = dot(fit.t_l, fit.t_l);
                const double g12 = dot(fit.t_r, fit.t_l);
                const double det = g11 * g22 - g12 * g12;
                if (det <= 1e-12 * std::max(g11 * g22, 1e-300)) return fit;
                const double b1 = dot(r, fit.t_r), b2 = dot(r, fit.t_l);
                fit.a_r = (g22 * b1 - g12 * b2) / det;
                fit.a_l = (g11 * b2 - g12 * b1) / det;
                fit.reduction = fit.a_r * b1 + fit.a_l * b2;
                return fit;
            };
            const long v_hi = (len - 1) / 2;
            std::vector<double> reds(v_hi + 2, -1.0);
            double global_red = -1.0;
            for (long v = 2; v <= v_hi; ++v) {
                reds[v] = fit_pair(static_cast<double>(v)).reduction;
                global_red = std::max(global_red, reds[v]);
            }
            // parabolic refinement of an integer local maximum
            const auto refine = [&](long v) {
                double v_frac = static_cast<double>(v);
                const double denom = 2.0 * reds[v] - reds[v - 1] - reds[v + 1];
                if (reds[v - 1] > 0.0 && reds[v + 1] > 0.0 && denom > 0.0) {
                    const double offset = 0.5 * (reds[v + 1] - reds[v - 1]) / denom;
                    if (std::abs(offset) < 1.0 && std::abs(offset) >= 1e-9) v_frac += offset;
                }
                return v_frac;
            };
            // swapped-mover solutions at larger v fit the endpoints equally
            // well; displacement interpolation wants the minimal transport,
            // so take the smallest refined local maximum within a hair of
            // the best one
            double best_v_frac = -1.0;
            double best_red = -1.0;
            for (long v = 2; v <= v_hi; ++v) {
                const bool local_max = reds[v] >= reds[v - 1] && reds[v] >= reds[v + 1];
                if (!local_max || reds[v] < 0.95 * global_red) continue;
                const double v_frac = refine(v);
                const double red = fit_pair(v_frac).reduction;
                if (red > best_red * (1.0 + 1e-3)) {
                    best_red = red;
                    best_v_frac = v_frac;
                }
            }
            if (best_v_frac > 0.0 && best_red > 1.05 * best_score) {
                PairFit fit = fit_pair(best_v_frac);
                const bool balanced = fit.a_r > 0.0 && fit.a_l > 0.0 &&
                                      std::min(fit.a_r, fit.a_l) >=
                                          0.1 * std::max(fit.a_r, fit.a_l);
                if (fit.reduction > 0.0 && balanced) {
                    // the pair allocates the whole template mass between the
                    // two movers; anything left goes to the residual term
                    for (size_t h = 0; h < r.size(); ++h)
                        r[h] -= fit.a_r * fit.t_r[h] + fit.a_l * fit.t_l[h];
                    raw.push_back({best_v_frac, fit.a_r, {}, std::move(fit.mask_r)});
                    raw.push_back({-best_v_frac, fit.a_l, {}, std::move(fit.mask_l)});
                    break;
                }
            }
        }

        double nu = static_cast<double>(best);
        if (std::abs(best) < len - 1) {
            const double sm = score_at(best - 1);
            const double s0 = score_at(best);
            const double sp = score_at(best + 1);
            const double denom = 2.0 * s0 - sm - sp;
            if (denom > 0.0) {
                const double offset = 0.5 * (sp - sm) / denom;
                if (std::abs(offset) < 1.0 && std::abs(offset) >= 1e-9)
                    nu = static_cast<double>(best) + offset;
            }
        }

        // window: connected support of the matched feature in template
        // space, bridging isolated zero samples but stopping at zero runs
        std::vector<double> r_back(phi1.size());
        shift_slice_into(r, -nu, kZeroBoundary, r_back);
        std::vector<double> overlap(phi1.size());
        double peak = 0.0;
        long peak_at = -1;
        for (long h = 0; h < len; ++h) {
            overlap[h] = phi1[h] * r_back[h];
            if (std::abs(overlap[h]) > peak) {
                peak = std::abs(overlap[h]);
                peak_at = h;
            }
        }
        if (peak_at < 0 || peak <= 0.0) break;
        std::vector<char> window(phi1.size(), 0);
        const auto grow = [&](long start, long step) {
            int zero_run = 0;
            for (long h = start; h >= 0 && h < len; h += step) {
                if (overlap[h] != 0.0)
                    zero_run = 0;
                else if (++zero_run > 2)
                    break;
                window[h] = 1;
            }
        };
        grow(peak_at, -1);
        grow(peak_at + 1, +1);

        std::vector<double> masked(phi1.size());
        for (long h = 0; h < len; ++h) masked[h] = window[h] ? phi1[h] : 0.0;
        std::vector<double> shifted(phi1.size());
        shift_slice_into(masked, nu, kZeroBoundary, shifted);
        const double ss = dot(shifted, shifted);
        if (ss <= 0.0) break;
        const double coeff = dot(r, shifted) / ss;
        for (size_t h = 0; h < r.size(); ++h) r[h] -= coeff * shifted[h];
        raw.push_back({nu, coeff, std::move(window), {}});

        if (norm2(r) <= target) break;
    }

    if (raw.empty()) raw.push_back({0.0, 0.0, std::vector<char>(phi1.size(), 1), {}});

    // Value-split pair components already carry final masks; windowed ones
    // are grouped where their windows overlap, splitting the unit mask
    // weight in proportion to the fitted coefficients so each group's
    // pieces carry eta factors consistent at both endpoints.
    for (const RawComponent& rc : raw) {
        if (rc.mask.empty()) continue;
        SliceComponent comp;
        comp.shift_per_tau = rc.nu;
        comp.end_scale = rc.coeff;
        comp.mask = rc.mask;
        dec.components.push_back(std::move(comp));
    }
    std::vector<int> windowed;
    for (int a = 0; a < static_cast<int>(raw.size()); ++a)
        if (raw[a].mask.empty()) windowed.push_back(a);

    const int K = static_cast<int>(windowed.size());
    std::vector<int> group(K);
    std::iota(group.begin(), group.end(), 0);
    const auto find = [&](int a) {
        while (group[a] != a) a = group[a] = group[group[a]];
        return a;
    };
    for (int a = 0; a < K; ++a)
        for (int b = a + 1; b < K; ++b) {
            bool overlap_ab = false;
            for (size_t h = 0; h < phi1.size() && !overlap_ab; ++h)
                overlap_ab = raw[windowed[a]].window[h] && raw[windowed[b]].window[h];
            if (overlap_ab) group[find(a)] = find(b);
        }

    for (int g = 0; g < K; ++g) {
        if (find(g) != g) continue;
        std::vector<int> members;
        for (int a = 0; a < K; ++a)
            if (find(a) == g) members.push_back(windowed[a]);
        double coeff_sum = 0.0;
        bool nonneg = true;
        for (int a : members) {
            coeff_sum += raw[a].coeff;
            nonneg = nonneg && raw[a].coeff >= 0.0;
        }
        for (int a : members) {
            double weight, scale;
            if (nonneg && coeff_sum > 0.0) {
                weight = raw[a].coeff / coeff_sum;
                scale = coeff_sum;
            } else {
                weight = 1.0 / static_cast<double>(members.size());
                scale = raw[a].coeff * static_cast<double>(members.size());
            }
            SliceComponent comp;
            comp.shift_per_tau = raw[a].nu;
            comp.end_scale = scale;
            comp.mask.assign(phi1.size(), 0.0);
            for (size_t h = 0; h < phi1.size(); ++h)
                if (raw[a].window[h]) comp.mask[h] = weight;
            dec.components.push_back(std::move(comp));
        }
    }

    // pointwise mask budget: scale down wherever the pieces over-cover
    std::vector<double> cover(phi1.size(), 0.0);
    for (const SliceComponent& comp : dec.components)
        for (size_t h = 0; h < cover.size(); ++h) cover[h] += comp.mask[h];
    for (size_t h = 0; h < cover.size(); ++h) {
        if (cover[h] > 1.0)
            for (SliceComponent& comp : dec.components) comp.mask[h] /= cover[h];
    }

    // the stored residual closes the gap at tau = 1 against the final masks
    dec.residual.assign(phi2.begin(), phi2.end());
    std::vector<double> masked(phi1.size()), moved(phi1.size());
    for (const SliceComponent& comp : dec.components) {
        for (size_t h = 0; h < masked.size(); ++h) masked[h] = comp.mask[h] * dec.base[h];
        shift_slice_into(masked, comp.shift_per_tau, kZeroBoundary, moved);
        for (size_t h = 0; h < dec.residual.size(); ++h)
            dec.residual[h] -= comp.end_scale * moved[h];
    }
    return dec;
}

std::vector<double> displacement_interpolate_1d(const SliceDecomposition& dec, double tau) {
    if (!(tau >= 0.0 && tau <= 1.0))
        throw std::invalid_argument("displacement_interpolate_1d: tau must lie in [0, 1]");
    if (tau == 0.0) return dec.base;

    const size_t len = dec.base.size();
    std::vector<double> out(len, 0.0);
    std::vector<double> masked(len), shifted(len);
    for (const SliceComponent& comp : dec.components) {
        const double eta = (1.0 - tau) + tau * comp.end_scale;
        for (size_t h = 0; h < len; ++h) masked[h] = comp.mask[h] * dec.base[h];
        shift_slice_into(masked, comp.shift_per_tau * tau, kZeroBoundary, shifted);
        for (size_t h = 0; h < len; ++h) out[h] += eta * shifted[h];
    }
    const std::vector<double> ue = dec.unexplained();
    for (size_t h = 0; h < len; ++h) out[h] += (1.0 - tau) * ue[h] + tau * dec.residual[h];
    return out;
}

Interp2DResult displacement_interpolate_2d(const Grid2D& q_t1, const Grid2D& q_t2, double tau,
                                           const InterpOptions& opts,
                                           std::vector<SliceRecord>* records) {
    if (q_t1.n != q_t2.n || q_t1.half_width != q_t2.half_width)
        throw std::invalid_argument("displacement_interpolate_2d: shape mismatch");
    if (!(tau >= 0.0 && tau <= 1.0))
        throw std::invalid_argument("displacement_interpolate_2d: tau must lie in [0, 1]");

    const int factor = 2 * opts.oversample_p;
    const Sinogram2D hat1 = drt_forward(prolong(q_t1, factor), opts.exec);
    const Sinogram2D hat2 = drt_forward(prolong(q_t2, factor), opts.exec);
    const int np = hat1.n;

    Sinogram2D hat_tau(np);
    std::vector<std::vector<SliceRecord>> slice_records(static_cast<size_t>(4) * np);

#pragma omp parallel for collapse(2) schedule(dynamic)
    for (int qi = 0; qi < 4; ++qi) {
        for (int s = 0; s < np; ++s) {
            const Quadrant2D& quad1 = hat1.quadrants[qi];
            const Quadrant2D& quad2 = hat2.quadrants[qi];
            const int vb = quad1.valid_begin(s);
            const auto col1 = quad1.slope_column(s).subspan(vb);
            const auto col2 = quad2.slope_column(s).subspan(vb);
            auto out_col = hat_tau.quadrants[qi].slope_column(s).subspan(vb);

            const std::span<const double> phi1{col1.data(), col1.size()};
            const std::span<const double> phi2{col2.data(), col2.size()};
            bool zero_base = true;
            for (double v : phi1) zero_base = zero_base && v == 0.0;

            if (zero_base) {
                for (size_t k = 0; k < out_col.size(); ++k)
                    out_col[k] = (1.0 - tau) * phi1[k] + tau * phi2[k];
                continue;
            }
            const SliceDecomposition dec = transport_reversal(phi1, phi2, opts.K_max, opts.tol);
            const std::vector<double> value = displacement_interpolate_1d(dec, tau);
            std::copy(value.begin(), value.end(), out_col.begin());
            if (records) {
                const double rnorm = norm2(dec.residual);
                auto& recs = slice_records[static_cast<size_t>(qi) * np + s];
                for (size_t k = 0; k < dec.components.size(); ++k)
                    recs.push_back({static_cast<Quad>(qi), s, static_cast<int>(k),
                                    dec.components[k].shift_per_tau, dec.components[k].end_scale,
                                    rnorm});
            }
        }
    }
    if (records)
        for (const auto& recs : slice_records)
            records->insert(records->end(), recs.begin(), recs.end());

    InvertResult inv = invert_drt(hat_tau, q_t1.n, q_t1.half_width, opts.invert_options());
    return {std::move(inv.grid), std::move(inv.cg)};
}

}  // namespace rsplit
