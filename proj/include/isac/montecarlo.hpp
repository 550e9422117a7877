#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "isac/model.hpp"

namespace isac {

enum class Estimator { ml, map };

std::string to_string(Estimator e);

/// Constant-composition codeword: every symbol count is fixed by the design.
struct CCCodeword {
    std::vector<std::size_t> symbols;
    std::vector<std::size_t> composition;  // count per label

    std::size_t n() const { return symbols.size(); }
};

/// Largest-remainder rounding of n * pmf. Ties go to the larger remainder,
/// then to the smaller label.
std::vector<std::size_t> ccc_composition(const InputDesign& design, std::size_t n);

/// Codeword with composition ccc_composition(design, n), symbols placed by a
/// seeded permutation.
CCCodeword generate_ccc(const InputDesign& design, std::size_t n, std::uint64_t seed);

std::vector<double> simulate_observations(const ChannelModel& channel, const CCCodeword& codeword,
                                          double s, Rng& rng);
std::vector<double> simulate_observations(const ChannelModel& channel, const CCCodeword& codeword,
                                          double s, std::uint64_t seed);

/// Sum of squared band-2 residuals and the band-2 count.
struct SufficientStatistic {
    double T = 0.0;
    std::size_t n2 = 0;
};

SufficientStatistic sufficient_statistic(const TwoBandModel& model, const CCCodeword& codeword,
                                         std::span<const double> observations);

/// clip(T / n2 - sigma2, prior support).
double ml_from_statistic(const TwoBandModel& model, const SufficientStatistic& stat);
/// argmax_s log p(s) - (n2/2) log(s + sigma2) - T / (2 (s + sigma2)).
double map_from_statistic(const TwoBandModel& model, const SufficientStatistic& stat);

double ml_estimate(const TwoBandModel& model, const CCCodeword& codeword,
                   std::span<const double> observations);
double map_estimate(const TwoBandModel& model, const CCCodeword& codeword,
                    std::span<const double> observations);

/// Generic maximisers of sum_i log d(y_i | x_i, s) (+ log p(s) for MAP):
/// 1024-node grid scan then golden-section refinement to 1e-9.
double ml_estimate(const ChannelModel& channel, double lo, double hi, const CCCodeword& codeword,
                   std::span<const double> observations);
double map_estimate(const StatePrior& prior, const ChannelModel& channel,
                    const CCCodeword& codeword, std::span<const double> observations);

struct SimConfig {
    double t1 = 0.0;
    Estimator estimator = Estimator::map;
    std::vector<std::size_t> n_list{100, 1000, 10000};
    std::size_t trials = 20000;
    std::uint64_t seed = 1;
    bool fast_path = true;
    int workers = 1;  // 0 selects the OpenMP default
};

struct SimRow {
    std::size_t n = 0;
    std::size_t trials = 0;
    double mse = 0.0;
    double n_mse = 0.0;
    double stderr_mse = 0.0;  // sample stddev of squared errors / sqrt(trials)
    double alpha_atbcrb = 0.0;
    double alpha_bcrb = 0.0;
    double n_atbcrb_finite = 0.0;
    double n_bcrb_finite = 0.0;
    Estimator estimator = Estimator::map;
    bool fast_path = true;
};

struct SimReport {
    std::vector<SimRow> rows;
};

/// One Monte Carlo trial: the drawn state and its estimate.
struct TrialOutcome {
    double state;
    double estimate;
};

/// Everything a trial needs; shared read-only across workers.
struct TrialSetup {
    const TwoBandModel* model;
    CCCodeword codeword;
    std::size_t n2;
    Estimator estimator;
    bool fast_path;
    std::uint64_t seed;
};

TrialSetup make_trial_setup(const TwoBandModel& model, const SimConfig& config, std::size_t n);

/// Trial `index` at block length n. Randomness comes from
/// (seed, n, index) alone, so the result does not depend on scheduling.
TrialOutcome run_trial(const TrialSetup& setup, std::size_t index);

/// Outcomes for trials 0..trials-1 at block length n.
std::vector<TrialOutcome> trial_outcomes(const TwoBandModel& model, const SimConfig& config,
                                         std::size_t n);

/// Order-fixed pairwise sum.
double pairwise_sum(std::span<const double> v);

SimReport empirical_mse(const TwoBandModel& model, const SimConfig& config);

struct ConvergenceTable {
    SimReport report;
    std::vector<double> mse_ratio;  // MSE(n_{i-1}) / MSE(n_i), i >= 1
};

ConvergenceTable convergence_study(const TwoBandModel& model, const SimConfig& config);

}  // namespace isac
