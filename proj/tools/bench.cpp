// Timing harness comparing the serial reference sweeps against the
// OpenMP kernels for the forward transform and back-projection.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "rsplit/adrt2.hpp"
#include "rsplit/parallel.hpp"

using namespace rsplit;
using clock_type = std::chrono::steady_clock;

namespace {

double time_once(const std::function<void()>& fn) {
    const auto t0 = clock_type::now();
    fn();
    const auto t1 = clock_type::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

double time_median(const std::function<void()>& fn, int reps) {
    std::vector<double> times;
    fn();  // warm up
    for (int r = 0; r < reps; ++r) times.push_back(time_once(fn));
    std::sort(times.begin(), times.end());
    return times[times.size() / 2];
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> sizes{128, 256, 512};
    int reps = 5;
    for (int a = 1; a < argc; ++a) {
        const std::string arg = argv[a];
        if (arg == "--sizes" && a + 1 < argc) {
            sizes.clear();
            std::string list = argv[++a];
            size_t pos = 0;
            while (pos < list.size()) {
                size_t comma = list.find(',', pos);
                if (comma == std::string::npos) comma = list.size();
                sizes.push_back(std::stoi(list.substr(pos, comma - pos)));
                pos = comma + 1;
            }
        } else if (arg == "--reps" && a + 1 < argc) {
            reps = std::stoi(argv[++a]);
        } else if (arg == "--threads" && a + 1 < argc) {
            set_thread_cap(std::stoi(argv[++a]));
        } else {
            std::fprintf(stderr, "usage: rsplit-bench [--sizes n1,n2,...] [--reps k] [--threads k]\n");
            return 2;
        }
    }

    std::printf("threads=%d reps=%d\n", max_threads(), reps);
    std::printf("%8s %14s %14s %9s %14s %14s %9s\n", "n", "fwd_serial[s]", "fwd_omp[s]", "speedup",
                "adj_serial[s]", "adj_omp[s]", "speedup");
    double prev_omp = -1.0;
    for (int n : sizes) {
        std::mt19937 rng(12345);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        Grid2D g(n, 4.0);
        for (double& v : g.data) v = dist(rng);
        const Sinogram2D sino = drt_forward(g);

        const double fwd_s = time_median([&] { drt_forward(g, Exec::serial); }, reps);
        const double fwd_p = time_median([&] { drt_forward(g, Exec::parallel); }, reps);
        const double adj_s = time_median([&] { backproject(sino, g.half_width, Exec::serial); }, reps);
        const double adj_p = time_median([&] { backproject(sino, g.half_width, Exec::parallel); }, reps);
        std::printf("%8d %14.6f %14.6f %9.2f %14.6f %14.6f %9.2f\n", n, fwd_s, fwd_p, fwd_s / fwd_p,
                    adj_s, adj_p, adj_s / adj_p);
        if (prev_omp > 0.0)
            std::printf("%8s forward omp time ratio vs previous size: %.2f\n", "", fwd_p / prev_omp);
        prev_omp = fwd_p;
    }
    return 0;
}
