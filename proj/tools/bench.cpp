// Serial reference vs OpenMP kernels: wall time and bitwise agreement.
#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>

#include <omp.h>

#include "isac/kernels.hpp"

using namespace isac;

namespace {

template <class F>
double seconds(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool same(const std::vector<TrialOutcome>& a, const std::vector<TrialOutcome>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(TrialOutcome)) == 0;
}

bool same(const std::vector<RegionPoint>& a, const std::vector<RegionPoint>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(RegionPoint)) == 0;
}

}  // namespace

int main(int argc, char** argv) {
    const int workers = argc > 1 ? std::stoi(argv[1]) : omp_get_max_threads();
    const TwoBandModel model(0.5, Constellation::bpsk(2.0), StatePrior::beta(3.0, 3.0, true));

    std::printf("workers: %d (hardware threads: %d)\n", workers, omp_get_num_procs());
    std::printf("%-28s %12s %12s %8s %s\n", "kernel", "serial [s]", "openmp [s]", "speedup", "match");

    for (bool fast : {true, false}) {
        SimConfig cfg;
        cfg.fast_path = fast;
        const std::size_t n = fast ? 10000 : 1000;
        const std::size_t trials = fast ? 20000 : 4000;
        const TrialSetup setup = make_trial_setup(model, cfg, n);
        std::vector<TrialOutcome> ser, par;
        const double ts = seconds([&] { ser = kernels::trials_serial(setup, trials); });
        const double tp = seconds([&] { par = kernels::trials_parallel(setup, trials, workers); });
        const std::string name = std::string("map trials ") + (fast ? "fast n=1e4" : "sample n=1e3");
        std::printf("%-28s %12.3f %12.3f %8.2f %s\n", name.c_str(), ts, tp, ts / tp,
                    same(ser, par) ? "yes" : "NO");
    }

    const auto grid = sweep_grid({0.01, 0.99, 99});
    std::vector<RegionPoint> ser, par;
    const double ts = seconds([&] { ser = kernels::region_points_serial(model, grid, 0.9, 0.6); });
    const double tp =
        seconds([&] { par = kernels::region_points_parallel(model, grid, 0.9, 0.6, workers); });
    std::printf("%-28s %12.3f %12.3f %8.2f %s\n", "region sweep 99 pts", ts, tp, ts / tp,
                same(ser, par) ? "yes" : "NO");
    return 0;
}
