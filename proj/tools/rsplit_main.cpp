// Command-line front end: transforms, least-squares inversion, the
// dimensional-splitting solvers, study harnesses, and displacement
// interpolation.
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "rsplit/adrt3.hpp"
#include "rsplit/dispinterp.hpp"
#include "rsplit/hypersolve.hpp"
#include "rsplit/io.hpp"
#include "rsplit/parallel.hpp"

using namespace rsplit;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double now_seconds() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

void require_input(const std::string& path) {
    if (!fs::exists(path)) throw UsageError("input not found: " + path);
}

uint64_t fnv1a(const std::string& bytes) {
    uint64_t hash = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    return hash;
}

std::vector<double> parse_double_list(const std::string& list) {
    std::vector<double> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

std::vector<int> parse_size_list(const std::string& spec) {
    std::vector<int> out;
    const size_t dots = spec.find("..");
    if (dots != std::string::npos) {
        const int lo = std::stoi(spec.substr(0, dots));
        const int hi = std::stoi(spec.substr(dots + 2));
        for (int n = lo; n <= hi; n *= 2) out.push_back(n);
    } else {
        std::stringstream ss(spec);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    }
    for (int n : out)
        if (!is_power_of_two(n)) throw UsageError("sizes must be powers of two, got " +
                                                  std::to_string(n));
    if (out.empty()) throw UsageError("empty size list");
    return out;
}

std::string format_time_suffix(double t) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", t);
    return buf;
}

// ---- transform ----

int cmd_transform(const std::string& op, const std::string& in_path, const std::string& out_path,
                  double half_width) {
    require_input(in_path);
    const double t0 = now_seconds();
    if (op == "fwd") {
        const Grid2D g = load_grid(in_path);
        const Sinogram2D sino = drt_forward(g);
        if (guess_grid_format(out_path) == GridFormat::csv)
            save_sinogram_csv(sino, out_path);
        else
            save_sinogram(sino, out_path);
        std::cout << "forward transform: n=" << g.n << " -> 4 x " << (2 * g.n - 1) << " x " << g.n
                  << " in " << now_seconds() - t0 << " s\n";
    } else if (op == "adj") {
        const Sinogram2D sino = guess_grid_format(in_path) == GridFormat::csv
                                    ? load_sinogram_csv(in_path)
                                    : load_sinogram(in_path);
        const Grid2D g = backproject(sino, half_width);
        save_grid(g, out_path);
        std::cout << "back-projection: n=" << g.n << " in " << now_seconds() - t0 << " s\n";
    } else if (op == "fwd3") {
        const Grid3D g = load_grid3(in_path);
        const Sinogram3D sino = drt3_forward(g);
        save_sinogram3(sino, out_path);
        std::cout << "forward 3D transform: n=" << g.n << " -> 16 x " << (3 * g.n - 2) << " x "
                  << g.n << "^2 in " << now_seconds() - t0 << " s\n";
    } else if (op == "adj3") {
        const Sinogram3D sino = load_sinogram3(in_path);
        const Grid3D g = backproject3(sino, half_width);
        save_grid3(g, out_path);
        std::cout << "3D back-projection: n=" << g.n << " in " << now_seconds() - t0 << " s\n";
    } else {
        throw UsageError("unknown transform op: " + op + " (expected fwd|adj|fwd3|adj3)");
    }
    return 0;
}

// ---- invert ----

int cmd_invert(const std::string& in_path, const std::string& out_path, int target_n,
               const InvertOptions& opts, double half_width, const std::string& residual_csv) {
    require_input(in_path);
    const Sinogram2D sino = guess_grid_format(in_path) == GridFormat::csv
                                ? load_sinogram_csv(in_path)
                                : load_sinogram(in_path);
    if (target_n <= 0) target_n = sino.n / (2 * opts.oversample_p);
    InvertOptions io = opts;
    io.record_residuals = !residual_csv.empty();
    const double t0 = now_seconds();
    const InvertResult res = invert_drt(sino, target_n, half_width, io);
    save_grid(res.grid, out_path);
    {
        std::ofstream meta(out_path + ".meta");
        meta << "converged," << (res.cg.converged ? 1 : 0) << "\n"
             << "iterations," << res.cg.iterations << "\n"
             << "rel_residual," << res.cg.rel_residual << "\n";
    }
    if (!residual_csv.empty()) {
        std::ofstream out(residual_csv);
        out << "iteration,rel_residual\n";
        for (size_t k = 0; k < res.cg.residual_history.size(); ++k)
            out << k << ',' << res.cg.residual_history[k] << '\n';
    }
    std::cout << "inverted to n=" << target_n << " in " << res.cg.iterations
              << " iterations, rel_residual=" << res.cg.rel_residual << ", "
              << now_seconds() - t0 << " s\n";
    if (!res.cg.converged)
        std::cout << "warning: CG stopped at max_iter without reaching tol\n";
    return 0;
}

// ---- solve ----

struct SolveConfig {
    std::string problem;
    int n = 128;
    double L = 4.0;
    double T = 0.0;
    std::array<double, 2> theta{1.0, 0.0};
    MaterialParams material;
    std::vector<HumpSpec> humps;
    SolveOptions options;
    std::vector<double> output_times;
    bool out_grids = true;
    bool out_sinograms = false;
    bool out_csv = false;
    bool out_pgm = false;
};

SolveConfig parse_solve_config(const json& cfg) {
    std::vector<std::string> bad;
    SolveConfig out;
    const auto fail = [&bad](const std::string& key) { bad.push_back(key); };

    if (!cfg.contains("problem") || !cfg["problem"].is_string())
        fail("problem");
    else {
        out.problem = cfg["problem"].get<std::string>();
        if (out.problem != "transport" && out.problem != "acoustics") fail("problem");
    }
    if (!cfg.contains("n") || !cfg["n"].is_number_integer() ||
        !is_power_of_two(cfg.value("n", 0)))
        fail("n");
    else
        out.n = cfg["n"].get<int>();
    if (cfg.contains("L")) {
        if (!cfg["L"].is_number() || cfg["L"].get<double>() <= 0.0)
            fail("L");
        else
            out.L = cfg["L"].get<double>();
    }
    if (cfg.contains("T")) {
        if (!cfg["T"].is_number())
            fail("T");
        else
            out.T = cfg["T"].get<double>();
    }
    if (out.problem == "transport") {
        if (!cfg.contains("theta") || !cfg["theta"].is_array() || cfg["theta"].size() != 2)
            fail("theta");
        else
            out.theta = {cfg["theta"][0].get<double>(), cfg["theta"][1].get<double>()};
    }
    if (out.problem == "acoustics") {
        const double K0 = cfg.value("K0", 1.0);
        const double rho0 = cfg.value("rho0", 1.0);
        if (K0 <= 0.0) fail("K0");
        if (rho0 <= 0.0) fail("rho0");
        if (K0 > 0.0 && rho0 > 0.0) out.material = MaterialParams(K0, rho0);
    }
    if (!cfg.contains("ic") || !cfg["ic"].contains("humps") || !cfg["ic"]["humps"].is_array() ||
        cfg["ic"]["humps"].empty()) {
        fail("ic.humps");
    } else {
        for (const auto& h : cfg["ic"]["humps"]) {
            HumpSpec spec;
            if (!h.contains("center") || !h["center"].is_array() || h["center"].size() != 2) {
                fail("ic.humps[].center");
                continue;
            }
            spec.center = {h["center"][0].get<double>(), h["center"][1].get<double>()};
            spec.scale = h.value("scale", 1.0);
            spec.amplitude = h.value("amplitude", 1.0);
            if (spec.scale <= 0.0) fail("ic.humps[].scale");
            out.humps.push_back(spec);
        }
    }
    if (cfg.contains("oversample_p")) {
        const int p = cfg["oversample_p"].is_number_integer() ? cfg["oversample_p"].get<int>() : 0;
        if (p < 1)
            fail("oversample_p");
        else
            out.options.oversample_p = p;
    }
    if (cfg.contains("boundary")) {
        const std::string b = cfg["boundary"].is_string() ? cfg["boundary"].get<std::string>() : "";
        if (b == "absorbing-extrapolation")
            out.options.boundary.kind = BoundaryKind::absorbing_extrapolation;
        else if (b == "zero")
            out.options.boundary.kind = BoundaryKind::zero;
        else
            fail("boundary");
    }
    if (cfg.contains("cg_tol")) {
        const double tol = cfg["cg_tol"].is_number() ? cfg["cg_tol"].get<double>() : -1.0;
        if (tol <= 0.0 || tol >= 1.0)
            fail("cg_tol");
        else
            out.options.invert.tol = tol;
    }
    if (cfg.contains("output_times")) {
        if (!cfg["output_times"].is_array())
            fail("output_times");
        else
            for (const auto& t : cfg["output_times"]) out.output_times.push_back(t.get<double>());
    }
    if (out.output_times.empty()) out.output_times.push_back(out.T);
    if (cfg.contains("outputs")) {
        const auto& o = cfg["outputs"];
        out.out_grids = o.value("grids", true);
        out.out_sinograms = o.value("sinograms", false);
        out.out_csv = o.value("csv", false);
        out.out_pgm = o.value("pgm", false);
    }
    for (const auto& [key, value] : cfg.items()) {
        (void)value;
        static const std::vector<std::string> known{"problem", "n",          "L",
                                                    "T",       "theta",      "K0",
                                                    "rho0",    "ic",         "oversample_p",
                                                    "boundary", "cg_tol",    "output_times",
                                                    "outputs"};
        if (std::find(known.begin(), known.end(), key) == known.end()) fail(key);
    }
    if (!bad.empty()) {
        std::string msg = "invalid config keys:";
        for (const auto& key : bad) msg += " " + key;
        throw UsageError(msg);
    }
    return out;
}

int cmd_solve(const std::string& config_path, const std::string& out_dir) {
    require_input(config_path);
    std::ifstream in(config_path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string raw = buffer.str();
    json cfg;
    try {
        cfg = json::parse(raw);
    } catch (const json::parse_error& err) {
        throw UsageError(std::string("config is not valid JSON: ") + err.what());
    }
    const SolveConfig sc = parse_solve_config(cfg);
    fs::create_directories(out_dir);

    const Grid2D q0 = sample_humps(sc.humps, Grid2D(sc.n, sc.L));
    std::vector<std::string> written;

    const auto emit_grid = [&](const Grid2D& g, const std::string& stem) {
        if (sc.out_grids) {
            const std::string path = (fs::path(out_dir) / (stem + ".rsg")).string();
            save_grid(g, path, GridFormat::rsg_binary);
            written.push_back(path);
        }
        if (sc.out_csv) {
            const std::string path = (fs::path(out_dir) / (stem + ".csv")).string();
            save_grid(g, path, GridFormat::csv);
            written.push_back(path);
        }
        if (sc.out_pgm) {
            const std::string path = (fs::path(out_dir) / (stem + ".pgm")).string();
            save_grid(g, path, GridFormat::pgm);
            written.push_back(path);
        }
    };
    const auto emit_sinogram = [&](const Sinogram2D& hat, const std::string& stem) {
        if (!sc.out_sinograms) return;
        const std::string path = (fs::path(out_dir) / (stem + ".rss")).string();
        save_sinogram(hat, path);
        written.push_back(path);
    };

    const int factor = 2 * sc.options.oversample_p;
    const Sinogram2D hat0 = drt_forward(prolong(q0, factor), sc.options.exec);
    const InvertOptions io = sc.options.invert_options();

    for (double t : sc.output_times) {
        Sinogram2D hat = hat0;
        if (sc.problem == "transport")
            advect_sinogram(hat, sc.theta, t, sc.L, sc.options.boundary);
        else
            evolve_pressure_hat(hat, sc.material, t, sc.L, sc.options.boundary);
        const InvertResult inv = invert_drt(hat, sc.n, sc.L, io);
        const std::string field = sc.problem == "transport" ? "q" : "p";
        const std::string stem = field + "_t" + format_time_suffix(t);
        emit_grid(inv.grid, stem);
        emit_sinogram(hat, field + "_hat_t" + format_time_suffix(t));
        std::cout << "t=" << t << ": cg_iterations=" << inv.cg.iterations
                  << " rel_residual=" << inv.cg.rel_residual
                  << (inv.cg.converged ? "" : " (not converged)") << "\n";
    }

    const std::string manifest_path = (fs::path(out_dir) / "run_manifest.csv").string();
    std::ofstream manifest(manifest_path);
    manifest << "key,value\n";
    manifest << "version," << kVersion << '\n';
    char hash_hex[32];
    std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                  static_cast<unsigned long long>(fnv1a(raw)));
    manifest << "config_hash," << hash_hex << '\n';
    manifest << "problem," << sc.problem << '\n';
    manifest << "n," << sc.n << '\n';
    manifest << "L," << sc.L << '\n';
    manifest << "oversample_p," << sc.options.oversample_p << '\n';
    manifest << "cg_tol," << io.tol << '\n';
    manifest << "cg_max_iter," << (io.max_iter > 0 ? io.max_iter : 10 * sc.n) << '\n';
    manifest << "boundary,"
             << (sc.options.boundary.kind == BoundaryKind::zero ? "zero"
                                                                : "absorbing-extrapolation")
             << '\n';
    manifest << "threads," << max_threads() << '\n';
    for (const auto& path : written) manifest << "file," << fs::path(path).filename().string() << '\n';
    std::cout << "wrote " << written.size() << " files and " << manifest_path << "\n";
    return 0;
}

// ---- study ----

int cmd_study_convergence(const std::string& sizes, double T, double tol, int oversample_p,
                          const std::string& out_dir) {
    const std::vector<int> Ns = parse_size_list(sizes);
    SolveOptions opts;
    opts.oversample_p = oversample_p;
    opts.invert.tol = tol;
    fs::create_directories(out_dir);
    const ConvergenceTable table = convergence_study(Ns, T, opts, 4000, &std::cout);
    const std::string csv = (fs::path(out_dir) / "convergence.csv").string();
    write_convergence_csv(table, csv);
    const auto orders = table.l1_orders();
    std::cout << "observed L1 orders:";
    for (double o : orders) std::cout << ' ' << o;
    std::cout << "\nwrote " << csv << "\n";
    return 0;
}

int cmd_study_boundary(int n, double T, double tol, int oversample_p, const std::string& out_dir) {
    if (!is_power_of_two(n)) throw UsageError("n must be a power of two");
    SolveOptions opts;
    opts.oversample_p = oversample_p;
    opts.invert.tol = tol;
    fs::create_directories(out_dir);
    const DecaySeries series = boundary_decay_study(T, n, opts, {}, &std::cout);
    const std::string csv = (fs::path(out_dir) / "boundary_decay.csv").string();
    write_decay_csv(series, csv);
    std::cout << "peak_time=" << series.peak_time << " fitted_slope=" << series.fitted_slope
              << " truth_slope=" << series.truth_slope << "\nwrote " << csv << "\n";
    return 0;
}

// ---- interp ----

int cmd_interp(const std::string& path1, const std::string& path2, const std::string& taus,
               const std::string& out_dir, const InterpOptions& opts, bool slice_csv) {
    require_input(path1);
    require_input(path2);
    const Grid2D q1 = load_grid(path1);
    const Grid2D q2 = load_grid(path2);
    fs::create_directories(out_dir);
    for (double tau : parse_double_list(taus)) {
        std::vector<SliceRecord> records;
        const Interp2DResult res =
            displacement_interpolate_2d(q1, q2, tau, opts, slice_csv ? &records : nullptr);
        const std::string stem = "interp_tau" + format_time_suffix(tau);
        save_grid(res.grid, (fs::path(out_dir) / (stem + ".rsg")).string());
        if (slice_csv) {
            std::ofstream out((fs::path(out_dir) / (stem + "_slices.csv")).string());
            out << "quadrant,s,k,nu,a,residual_norm\n";
            for (const SliceRecord& r : records)
                out << quad_name(r.quadrant) << ',' << r.slope << ',' << r.component << ','
                    << r.shift_per_tau << ',' << r.end_scale << ',' << r.residual_norm << '\n';
        }
        std::cout << "tau=" << tau << ": cg_iterations=" << res.cg.iterations
                  << " rel_residual=" << res.cg.rel_residual << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fast discrete Radon transform, least-squares inversion, and "
                 "Radon-based dimensional-splitting solvers"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "cap worker threads (default: all cores)");

    // transform
    auto* transform = app.add_subcommand("transform", "apply fwd|adj|fwd3|adj3");
    std::string t_op, t_in, t_out;
    double t_L = 4.0;
    transform->add_option("op", t_op, "fwd|adj|fwd3|adj3")->required();
    transform->add_option("input", t_in)->required();
    transform->add_option("output", t_out)->required();
    transform->add_option("--L", t_L, "half-width of reconstructed grids (adj/adj3)");

    // invert
    auto* invert = app.add_subcommand("invert", "least-squares inversion of a sinogram");
    std::string i_in, i_out, i_residual_csv;
    int i_n = 0;
    double i_L = 4.0;
    InvertOptions i_opts;
    invert->add_option("input", i_in)->required();
    invert->add_option("output", i_out)->required();
    invert->add_option("--n", i_n, "target grid size (default: sinogram n / 2p)");
    invert->add_option("--p", i_opts.oversample_p, "oversampling factor p (prolongation 2p)");
    invert->add_option("--tol", i_opts.tol, "relative residual tolerance");
    invert->add_option("--max-iter", i_opts.max_iter, "iteration cap (default 10n)");
    invert->add_option("--L", i_L, "half-width of the output grid");
    invert->add_option("--residual-csv", i_residual_csv, "write per-iteration residuals");

    // solve
    auto* solve = app.add_subcommand("solve", "run a solver config (JSON)");
    std::string s_config, s_out = ".";
    solve->add_option("config", s_config)->required();
    solve->add_option("--out", s_out, "output directory");

    // study
    auto* study = app.add_subcommand("study", "convergence | boundary-decay");
    std::string st_name, st_sizes = "8..256", st_out = ".";
    double st_T = -1.0, st_tol = 1e-7;
    int st_n = 128, st_p = 2;
    study->add_option("name", st_name, "convergence|boundary-decay")->required();
    study->add_option("--Ns", st_sizes, "sizes, e.g. 8..256 or 8,16,32");
    study->add_option("--T", st_T, "final time (convergence: 3, boundary-decay: 20)");
    study->add_option("--n", st_n, "grid size for boundary-decay");
    study->add_option("--tol", st_tol, "CG tolerance");
    study->add_option("--p", st_p, "oversampling factor");
    study->add_option("--out", st_out, "output directory");

    // interp
    auto* interp = app.add_subcommand("interp", "displacement interpolation of two grids");
    std::string in_a, in_b, in_taus = "0.5", in_out = ".";
    bool in_slice_csv = false;
    InterpOptions in_opts;
    interp->add_option("grid1", in_a)->required();
    interp->add_option("grid2", in_b)->required();
    interp->add_option("--tau", in_taus, "comma-separated interpolation weights in [0,1]");
    interp->add_option("--out", in_out, "output directory");
    interp->add_option("--p", in_opts.oversample_p, "oversampling factor");
    interp->add_option("--kmax", in_opts.K_max, "components per slice");
    interp->add_option("--tol", in_opts.tol, "per-slice residual tolerance");
    interp->add_flag("--slice-csv", in_slice_csv, "write per-slice decomposition records");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    set_thread_cap(threads);
    try {
        if (*transform) return cmd_transform(t_op, t_in, t_out, t_L);
        if (*invert) return cmd_invert(i_in, i_out, i_n, i_opts, i_L, i_residual_csv);
        if (*solve) return cmd_solve(s_config, s_out);
        if (*study) {
            if (st_name == "convergence")
                return cmd_study_convergence(st_sizes, st_T > 0 ? st_T : 3.0, st_tol, st_p, st_out);
            if (st_name == "boundary-decay")
                return cmd_study_boundary(st_n, st_T > 0 ? st_T : 20.0, st_tol, st_p, st_out);
            throw UsageError("unknown study: " + st_name);
        }
        if (*interp) return cmd_interp(in_a, in_b, in_taus, in_out, in_opts, in_slice_csv);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
