#include "isac/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "isac/bounds.hpp"
#include "isac/kernels.hpp"
#include "isac/optimize.hpp"

namespace isac {

namespace {

constexpr std::size_t kPosteriorGrid = 1024;
constexpr double kPosteriorTol = 1e-9;
constexpr std::uint64_t kCodewordStream = 0xc0dec0deULL;

void check_lengths(const CCCodeword& c, std::span<const double> obs) {
    if (obs.size() != c.n()) throw Error("montecarlo", "observation count differs from codeword length");
}

}  // namespace

std::string to_string(Estimator e) { return e == Estimator::ml ? "ml" : "map"; }

std::vector<std::size_t> ccc_composition(const InputDesign& design, std::size_t n) {
    const std::size_t k = design.size();
    std::vector<std::size_t> counts(k);
    std::vector<double> rem(k);
    std::size_t assigned = 0;
    for (std::size_t x = 0; x < k; ++x) {
        const double target = static_cast<double>(n) * design[x];
        counts[x] = static_cast<std::size_t>(std::floor(target));
        rem[x] = target - static_cast<double>(counts[x]);
        assigned += counts[x];
    }
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return rem[i] > rem[j]; });
    for (std::size_t i = 0; assigned < n; ++i, ++assigned) ++counts[order[i % k]];
    return counts;
}

CCCodeword generate_ccc(const InputDesign& design, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw Error("montecarlo", "block length must be >= 1");
    CCCodeword c;
    c.composition = ccc_composition(design, n);
    c.symbols.reserve(n);
    for (std::size_t x = 0; x < c.composition.size(); ++x)
        c.symbols.insert(c.symbols.end(), c.composition[x], x);
    Rng rng = make_rng(seed, kCodewordStream, n);
    std::shuffle(c.symbols.begin(), c.symbols.end(), rng);
    return c;
}

std::vector<double> simulate_observations(const ChannelModel& channel, const CCCodeword& codeword,
                                          double s, Rng& rng) {
    std::vector<double> y(codeword.n());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = channel.sample(codeword.symbols[i], s, rng);
    return y;
}

std::vector<double> simulate_observations(const ChannelModel& channel, const CCCodeword& codeword,
                                          double s, std::uint64_t seed) {
    Rng rng = make_rng(seed, 0);
    return simulate_observations(channel, codeword, s, rng);
}

SufficientStatistic sufficient_statistic(const TwoBandModel& model, const CCCodeword& codeword,
                                         std::span<const double> observations) {
    check_lengths(codeword, observations);
    const auto& pts = model.constellation().points();
    const std::size_t k = pts.size();
    SufficientStatistic st;
    for (std::size_t i = 0; i < observations.size(); ++i) {
        const std::size_t x = codeword.symbols[i];
        if (!model.is_band2(x)) continue;
        const double r = observations[i] - pts[x - k];
        st.T += r * r;
        ++st.n2;
    }
    return st;
}

double ml_from_statistic(const TwoBandModel& model, const SufficientStatistic& stat) {
    if (stat.n2 == 0) throw Error("montecarlo", "state unidentifiable from this codeword");
    const double raw = stat.T / static_cast<double>(stat.n2) - model.sigma2();
    return std::clamp(raw, model.prior().lo(), model.prior().hi());
}

double map_from_statistic(const TwoBandModel& model, const SufficientStatistic& stat) {
    if (stat.n2 == 0) throw Error("montecarlo", "state unidentifiable from this codeword");
    const StatePrior& prior = model.prior();
    const double half_n2 = 0.5 * static_cast<double>(stat.n2);
    const double sigma2 = model.sigma2();
    auto log_post = [&](double s) {
        const double v = s + sigma2;
        return prior.log_density(s) - half_n2 * std::log(v) - stat.T / (2.0 * v);
    };
    const double x = opt::grid_then_golden_max(log_post, prior.lo(), prior.hi(), kPosteriorGrid,
                                               kPosteriorTol, false, kBoundaryGuard)
                         .x;

    // Polish on the stationarity condition; value comparisons stall near
    // sqrt(machine epsilon) on a flat peak.
    auto slope = [&](double s) {
        const double v = s + sigma2;
        return prior.score(s) - half_n2 / v + stat.T / (2.0 * v * v);
    };
    const double step = 1e-6 * (prior.hi() - prior.lo());
    double a = std::max(prior.lo() + kBoundaryGuard, x - step);
    double b = std::min(prior.hi() - kBoundaryGuard, x + step);
    if (!(slope(a) > 0.0 && slope(b) < 0.0)) return x;
    for (int i = 0; i < 200 && b - a > 4e-16 * std::max(1.0, std::abs(x)); ++i) {
        const double m = 0.5 * (a + b);
        (slope(m) > 0.0 ? a : b) = m;
    }
    return 0.5 * (a + b);
}

double ml_estimate(const TwoBandModel& model, const CCCodeword& codeword,
                   std::span<const double> observations) {
    return ml_from_statistic(model, sufficient_statistic(model, codeword, observations));
}

double map_estimate(const TwoBandModel& model, const CCCodeword& codeword,
                    std::span<const double> observations) {
    return map_from_statistic(model, sufficient_statistic(model, codeword, observations));
}

double ml_estimate(const ChannelModel& channel, double lo, double hi, const CCCodeword& codeword,
                   std::span<const double> observations) {
    check_lengths(codeword, observations);
    auto loglik = [&](double s) {
        double sum = 0.0;
        for (std::size_t i = 0; i < observations.size(); ++i)
            sum += channel.log_density(observations[i], codeword.symbols[i], s);
        return sum;
    };
    return opt::grid_then_golden_max(loglik, lo, hi, kPosteriorGrid, kPosteriorTol, true).x;
}

double map_estimate(const StatePrior& prior, const ChannelModel& channel,
                    const CCCodeword& codeword, std::span<const double> observations) {
    check_lengths(codeword, observations);
    auto log_post = [&](double s) {
        double sum = prior.log_density(s);
        for (std::size_t i = 0; i < observations.size(); ++i)
            sum += channel.log_density(observations[i], codeword.symbols[i], s);
        return sum;
    };
    return opt::grid_then_golden_max(log_post, prior.lo(), prior.hi(), kPosteriorGrid,
                                     kPosteriorTol, false, kBoundaryGuard)
        .x;
}

// ---------------------------------------------------------------------------

TrialSetup make_trial_setup(const TwoBandModel& model, const SimConfig& config, std::size_t n) {
    if (n == 0) throw Error("montecarlo", "block length must be >= 1");
    TrialSetup setup{&model, generate_ccc(model.design(config.t1), n, config.seed), 0,
                     config.estimator, config.fast_path, config.seed};
    const std::size_t k = model.constellation().points().size();
    for (std::size_t x = k; x < 2 * k; ++x) setup.n2 += setup.codeword.composition[x];
    if (setup.n2 == 0) throw Error("montecarlo", "state unidentifiable from this codeword");
    return setup;
}

TrialOutcome run_trial(const TrialSetup& setup, std::size_t index) {
    const TwoBandModel& model = *setup.model;
    Rng rng = make_rng(setup.seed, setup.codeword.n(), index);
    const double s = model.prior().sample(rng);

    SufficientStatistic stat;
    if (setup.fast_path) {
        // T / (s + sigma2) ~ chi-square(n2).
        std::gamma_distribution<double> gamma(0.5 * static_cast<double>(setup.n2),
                                              2.0 * (s + model.sigma2()));
        stat = {gamma(rng), setup.n2};
    } else {
        const auto y = simulate_observations(model.channel(), setup.codeword, s, rng);
        stat = sufficient_statistic(model, setup.codeword, y);
    }
    const double est = setup.estimator == Estimator::ml ? ml_from_statistic(model, stat)
                                                        : map_from_statistic(model, stat);
    return {s, est};
}

std::vector<TrialOutcome> trial_outcomes(const TwoBandModel& model, const SimConfig& config,
                                         std::size_t n) {
    if (config.trials == 0) throw Error("montecarlo", "trials must be >= 1");
    const TrialSetup setup = make_trial_setup(model, config, n);
    return config.workers == 1 ? kernels::trials_serial(setup, config.trials)
                               : kernels::trials_parallel(setup, config.trials, config.workers);
}

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 16) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

SimReport empirical_mse(const TwoBandModel& model, const SimConfig& config) {
    if (config.n_list.empty()) throw Error("montecarlo", "n_list must be nonempty");
    const FisherProfile profile(model.channel(), model.design(config.t1), model.prior());
    const double a_at = alpha_atbcrb(profile);
    const double a_bc = alpha_bcrb(profile);

    SimReport report;
    for (std::size_t n : config.n_list) {
        const auto outcomes = trial_outcomes(model, config, n);
        std::vector<double> sq(outcomes.size());
        for (std::size_t i = 0; i < sq.size(); ++i) {
            const double e = outcomes[i].state - outcomes[i].estimate;
            sq[i] = e * e;
        }
        const double trials = static_cast<double>(sq.size());
        const double mse = pairwise_sum(sq) / trials;
        std::vector<double> dev(sq.size());
        for (std::size_t i = 0; i < sq.size(); ++i) dev[i] = (sq[i] - mse) * (sq[i] - mse);
        const double var = sq.size() > 1 ? pairwise_sum(dev) / (trials - 1.0) : 0.0;

        SimRow row;
        row.n = n;
        row.trials = sq.size();
        row.mse = mse;
        row.n_mse = static_cast<double>(n) * mse;
        row.stderr_mse = std::sqrt(var / trials);
        row.alpha_atbcrb = a_at;
        row.alpha_bcrb = a_bc;
        row.n_atbcrb_finite = static_cast<double>(n) * atbcrb_finite(profile, static_cast<double>(n));
        row.n_bcrb_finite = static_cast<double>(n) * bcrb_finite(profile, static_cast<double>(n));
        row.estimator = config.estimator;
        row.fast_path = config.fast_path;
        report.rows.push_back(row);
    }
    return report;
}

ConvergenceTable convergence_study(const TwoBandModel& model, const SimConfig& config) {
    for (std::size_t i = 1; i < config.n_list.size(); ++i)
        if (config.n_list[i] <= config.n_list[i - 1])
            throw Error("montecarlo", "convergence study needs an increasing n_list");
    ConvergenceTable table{empirical_mse(model, config), {}};
    for (std::size_t i = 1; i < table.report.rows.size(); ++i)
        table.mse_ratio.push_back(table.report.rows[i - 1].mse / table.report.rows[i].mse);
    return table;
}

}  // namespace isac
