#include "isac/kernels.hpp"

#include <exception>
#include <omp.h>

#include "isac/bounds.hpp"
#include "isac/rate.hpp"

namespace isac::kernels {

namespace {

int resolve_workers(int workers) { return workers > 0 ? workers : omp_get_max_threads(); }

RegionPoint region_point(const TwoBandModel& model, double t1, double c1, double c2) {
    const FisherProfile profile(model.channel(), model.design(t1), model.prior());
    return {t1, two_band_rate(t1, c1, c2).total, alpha_atbcrb(profile), alpha_bcrb(profile)};
}

// Exceptions must not escape an OpenMP region; keep the first and rethrow.
class FirstError {
public:
    template <class F>
    void guard(F&& f) {
        try {
            f();
        } catch (...) {
#pragma omp critical(isac_first_error)
            if (!error_) error_ = std::current_exception();
        }
    }
    void rethrow() const {
        if (error_) std::rethrow_exception(error_);
    }

private:
    std::exception_ptr error_;
};

}  // namespace

std::vector<TrialOutcome> trials_serial(const TrialSetup& setup, std::size_t trials) {
    std::vector<TrialOutcome> out(trials);
    for (std::size_t i = 0; i < trials; ++i) out[i] = run_trial(setup, i);
    return out;
}

std::vector<TrialOutcome> trials_parallel(const TrialSetup& setup, std::size_t trials,
                                          int workers) {
    std::vector<TrialOutcome> out(trials);
    const auto count = static_cast<std::ptrdiff_t>(trials);
    FirstError err;
#pragma omp parallel for num_threads(resolve_workers(workers)) schedule(dynamic, 64)
    for (std::ptrdiff_t i = 0; i < count; ++i)
        err.guard([&] { out[i] = run_trial(setup, static_cast<std::size_t>(i)); });
    err.rethrow();
    return out;
}

std::vector<RegionPoint> region_points_serial(const TwoBandModel& model,
                                              const std::vector<double>& t1_grid, double c1,
                                              double c2_worst) {
    std::vector<RegionPoint> out(t1_grid.size());
    for (std::size_t i = 0; i < t1_grid.size(); ++i)
        out[i] = region_point(model, t1_grid[i], c1, c2_worst);
    return out;
}

std::vector<RegionPoint> region_points_parallel(const TwoBandModel& model,
                                                const std::vector<double>& t1_grid, double c1,
                                                double c2_worst, int workers) {
    std::vector<RegionPoint> out(t1_grid.size());
    const auto count = static_cast<std::ptrdiff_t>(t1_grid.size());
    FirstError err;
#pragma omp parallel for num_threads(resolve_workers(workers)) schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < count; ++i)
        err.guard([&] { out[i] = region_point(model, t1_grid[i], c1, c2_worst); });
    err.rethrow();
    return out;
}

}  // namespace isac::kernels
