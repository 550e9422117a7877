#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "isac/bounds.hpp"
#include "isac/montecarlo.hpp"
#include "oracles.hpp"

using namespace isac;

namespace {

const TwoBandModel kModel(0.5, Constellation::bpsk(2), StatePrior::beta(3, 3, true));

}  // namespace

TEST_CASE("constant-composition rounding") {
    CHECK(ccc_composition(InputDesign({0.6, 0.4}), 10) == std::vector<std::size_t>{6, 4});
    CHECK(ccc_composition(InputDesign({0.5, 0.5}), 7) == std::vector<std::size_t>{4, 3});
    CHECK(ccc_composition(kModel.design(0.0), 10) == std::vector<std::size_t>{0, 0, 5, 5});
    CHECK(ccc_composition(kModel.design(0.3), 0) == std::vector<std::size_t>{0, 0, 0, 0});

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        std::vector<double> p(5);
        for (auto& v : p) v = u(rng);
        const double tot = std::accumulate(p.begin(), p.end(), 0.0);
        for (auto& v : p) v /= tot;
        p.back() = 1.0 - std::accumulate(p.begin(), p.end() - 1, 0.0);
        const std::size_t n = 1 + rng() % 997;
        const auto c = ccc_composition(InputDesign(p), n);
        CHECK(std::accumulate(c.begin(), c.end(), std::size_t{0}) == n);
        for (std::size_t k = 0; k < p.size(); ++k) CHECK(std::abs(c[k] - n * p[k]) < 1.0);
    }
}

TEST_CASE("codeword generation") {
    const auto cw = generate_ccc(kModel.design(0.4), 1000, 5);
    CHECK(cw.n() == 1000);
    CHECK(cw.composition == std::vector<std::size_t>{200, 200, 300, 300});
    std::vector<std::size_t> counts(4);
    for (auto x : cw.symbols) ++counts[x];
    CHECK(counts == cw.composition);
    CHECK(generate_ccc(kModel.design(0.4), 1000, 5).symbols == cw.symbols);
    CHECK(generate_ccc(kModel.design(0.4), 1000, 6).symbols != cw.symbols);
}

TEST_CASE("ML estimator examples and clipping") {
    CHECK(ml_from_statistic(kModel, {120.0, 100}) == doctest::Approx(0.7).epsilon(1e-14));
    CHECK(ml_from_statistic(kModel, {10.0, 100}) == 0.0);
    CHECK(ml_from_statistic(kModel, {200.0, 100}) == 1.0);
    CHECK_THROWS_WITH(ml_from_statistic(kModel, {1.0, 0}), doctest::Contains("unidentifiable"));
    CHECK_THROWS_WITH(map_from_statistic(kModel, {1.0, 0}), doctest::Contains("unidentifiable"));
    for (double T : {0.0, 10.0, 60.0, 500.0}) {
        const double m = map_from_statistic(kModel, {T, 100});
        CHECK(m > 0.0);
        CHECK(m < 1.0);
    }
}

TEST_CASE("flat-prior MAP coincides with ML") {
    const TwoBandModel flat(0.5, Constellation::bpsk(2), StatePrior::beta(1, 1));
    for (double T : {60.0, 80.0, 110.0, 140.0})
        CHECK(map_from_statistic(flat, {T, 100}) == doctest::Approx(ml_from_statistic(flat, {T, 100})).epsilon(1e-8));
}

TEST_CASE("generic estimators agree with the two-band closed forms") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto cw = generate_ccc(kModel.design(0.3), 400, seed);
        const auto y = simulate_observations(kModel.channel(), cw, 0.2 * seed - 0.1, seed);
        const auto& prior = kModel.prior();
        CHECK(ml_estimate(kModel.channel(), prior.lo(), prior.hi(), cw, y) ==
              doctest::Approx(ml_estimate(kModel, cw, y)).epsilon(1e-7));
        CHECK(map_estimate(prior, kModel.channel(), cw, y) ==
              doctest::Approx(map_estimate(kModel, cw, y)).epsilon(1e-7));
    }
}

TEST_CASE("sufficient statistic ignores band 1") {
    const auto cw = generate_ccc(kModel.design(0.5), 20, 3);
    auto y = simulate_observations(kModel.channel(), cw, 0.4, 9);
    const auto st = sufficient_statistic(kModel, cw, y);
    CHECK(st.n2 == 10);
    for (std::size_t i = 0; i < y.size(); ++i)
        if (!kModel.is_band2(cw.symbols[i])) y[i] += 100.0;
    CHECK(sufficient_statistic(kModel, cw, y).T == st.T);
}

TEST_CASE("ML is consistent at large n") {
    const auto cw = generate_ccc(kModel.design(0.0), 100000, 1);
    for (double s : {0.1, 0.5, 0.9}) {
        const auto y = simulate_observations(kModel.channel(), cw, s, 77);
        CHECK(std::abs(ml_estimate(kModel, cw, y) - s) < 0.02);
    }
}

TEST_CASE("MAP lies between the ML estimate and the prior mode") {
    SimConfig ml_cfg;
    ml_cfg.estimator = Estimator::ml;
    ml_cfg.trials = 1000;
    SimConfig map_cfg = ml_cfg;
    map_cfg.estimator = Estimator::map;
    const auto ml = trial_outcomes(kModel, ml_cfg, 1000);
    const auto map = trial_outcomes(kModel, map_cfg, 1000);
    for (std::size_t i = 0; i < ml.size(); ++i) {
        CHECK(ml[i].state == map[i].state);
        const double lo = std::min(ml[i].estimate, 0.5), hi = std::max(ml[i].estimate, 0.5);
        CHECK(map[i].estimate >= lo - 1e-9);
        CHECK(map[i].estimate <= hi + 1e-9);
    }
}

TEST_CASE("empirical MSE respects the Bayesian bound") {
    SimConfig cfg;
    cfg.n_list = {100, 1000};
    cfg.trials = 5000;
    const auto rep = empirical_mse(kModel, cfg);
    REQUIRE(rep.rows.size() == 2);
    for (const auto& r : rep.rows) {
        CHECK(r.n_mse + 3 * r.n * r.stderr_mse > r.n_bcrb_finite);
        CHECK(r.n_mse + 3 * r.n * r.stderr_mse > r.n_atbcrb_finite);
        CHECK(r.alpha_atbcrb == doctest::Approx(2.0714285714285714).epsilon(1e-10));
        CHECK(r.mse == doctest::Approx(r.n_mse / r.n).epsilon(1e-14));
        CHECK(r.trials == 5000);
    }
}

TEST_CASE("fast path and per-sample path agree in distribution") {
    SimConfig cfg;
    cfg.trials = 10000;
    cfg.seed = 3;
    const auto fast = trial_outcomes(kModel, cfg, 100);
    cfg.fast_path = false;
    const auto slow = trial_outcomes(kModel, cfg, 100);
    std::vector<double> ef, es, sqf, sqs;
    for (std::size_t i = 0; i < fast.size(); ++i) {
        ef.push_back(fast[i].estimate - fast[i].state);
        es.push_back(slow[i].estimate - slow[i].state);
        sqf.push_back(ef.back() * ef.back());
        sqs.push_back(es.back() * es.back());
    }
    CHECK(oracle::ks_distance(ef, es) < 0.02);
    auto mean_se = [](const std::vector<double>& v) {
        const double m = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
        double ss = 0;
        for (double x : v) ss += (x - m) * (x - m);
        return std::pair{m, std::sqrt(ss / (v.size() - 1) / v.size())};
    };
    const auto [mf, sf] = mean_se(sqf);
    const auto [ms, ss] = mean_se(sqs);
    CHECK(std::abs(mf - ms) < 1.96 * std::hypot(sf, ss) * 1.5);
}

TEST_CASE("trials are reproducible and stay in the support") {
    SimConfig cfg;
    cfg.trials = 2000;
    const auto a = trial_outcomes(kModel, cfg, 500);
    const auto b = trial_outcomes(kModel, cfg, 500);
    cfg.workers = 4;
    const auto c = trial_outcomes(kModel, cfg, 500);
    cfg.seed = 2;
    const auto d = trial_outcomes(kModel, cfg, 500);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].estimate == b[i].estimate);
        CHECK(a[i].estimate == c[i].estimate);
        CHECK(a[i].estimate >= 0.0);
        CHECK(a[i].estimate <= 1.0);
    }
    CHECK(a[0].state != d[0].state);
    // Trial index alone fixes the outcome.
    const auto setup = make_trial_setup(kModel, SimConfig{}, 500);
    CHECK(run_trial(setup, 17).estimate == a[17].estimate);
}

TEST_CASE("pairwise sum") {
    std::vector<double> v(1001);
    std::iota(v.begin(), v.end(), 0.0);
    CHECK(pairwise_sum(v) == 500500.0);
    CHECK(pairwise_sum(std::span<const double>{}) == 0.0);
}

TEST_CASE("convergence study") {
    SimConfig cfg;
    cfg.n_list = {1000, 10000};
    cfg.trials = 4000;
    const auto t = convergence_study(kModel, cfg);
    REQUIRE(t.mse_ratio.size() == 1);
    CHECK(t.mse_ratio[0] > 7.0);
    CHECK(t.mse_ratio[0] < 13.0);
    cfg.n_list = {1000, 100};
    CHECK_THROWS(convergence_study(kModel, cfg));
    cfg.n_list = {100};
    cfg.t1 = 1.0;
    CHECK_THROWS(make_trial_setup(kModel, cfg, 100));
}
