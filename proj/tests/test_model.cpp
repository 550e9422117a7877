#include "doctest.h"

#include <cmath>
#include <random>

#include "isac/model.hpp"
#include "isac/quadrature.hpp"
#include "oracles.hpp"

using namespace isac;

TEST_CASE("beta_density examples") {
    CHECK(beta_density(0.5, 3, 3) == doctest::Approx(1.875).epsilon(1e-13));
    CHECK(beta_density(0.5, 1, 1) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(beta_density(0.25, 3, 3) == doctest::Approx(30 * 0.0625 * 0.5625).epsilon(1e-13));
    CHECK_THROWS_WITH(beta_density(1.2, 3, 3), "state outside prior support");
    CHECK_THROWS_WITH(beta_density(0.0, 3, 3), "state outside prior support");
}

TEST_CASE("prior_score examples and boundary errors") {
    const auto p = StatePrior::beta(3, 3);
    CHECK(prior_score(p, 0.5) == doctest::Approx(0.0));
    CHECK(prior_score(p, 0.25) == doctest::Approx(2 / 0.25 - 2 / 0.75).epsilon(1e-13));
    CHECK(prior_score(StatePrior::beta(1, 1), 0.7) == 0.0);
    CHECK_THROWS_WITH(prior_score(p, 0.0), "score singular at support boundary");
    CHECK_THROWS_WITH(prior_score(p, 1.0 - 1e-10), "score singular at support boundary");
}

TEST_CASE("regularity enforcement") {
    CHECK_NOTHROW(StatePrior::beta(3, 3, true));
    CHECK_THROWS(StatePrior::beta(2, 2, true));
    CHECK_THROWS(StatePrior::beta(3, 4, true));
    CHECK_NOTHROW(StatePrior::beta(3, 4, false));
    CHECK_THROWS(StatePrior::beta(0, 1));
}

TEST_CASE("beta densities integrate to one for random shapes") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> shape(1.0, 8.0);
    for (int i = 0; i < 20; ++i) {
        const auto p = StatePrior::beta(shape(rng), shape(rng));
        const double mass = quad::integrate([&](double s) { return p.density(s); }, 0.0, 1.0,
                                            {1e-12, 1e-15, 4000});
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("prior score matches finite differences of the log density") {
    const auto p = StatePrior::beta(3.5, 3.5);
    for (int i = 1; i <= 20; ++i) {
        const double s = i / 21.0;
        const double h = 1e-6;
        const double fd = (p.log_density(s + h) - p.log_density(s - h)) / (2 * h);
        const double sc = p.score(s);
        CHECK(std::abs(sc - fd) <= 1e-6 * std::max(1.0, std::abs(sc)));
    }
}

TEST_CASE("beta sampler moments") {
    const auto p = StatePrior::beta(3, 3);
    Rng rng(12345);
    const int n = 1000000;
    double m1 = 0, m2 = 0;
    std::vector<double> xs(n);
    bool inside = true;
    for (int i = 0; i < n; ++i) {
        xs[i] = p.sample(rng);
        inside = inside && xs[i] > 0.0 && xs[i] < 1.0;
        m1 += xs[i];
    }
    CHECK(inside);
    m1 /= n;
    double m4 = 0;
    for (double x : xs) {
        m2 += (x - m1) * (x - m1);
        m4 += std::pow(x - m1, 4);
    }
    m2 /= n;
    m4 /= n;
    CHECK(std::abs(m1 - 0.5) < 3 * std::sqrt(m2 / n));
    CHECK(std::abs(m2 - 1.0 / 28) < 3 * std::sqrt((m4 - m2 * m2) / n));

    const double s = sample_state(p, 99);
    CHECK(s > 0.0);
    CHECK(s < 1.0);
    CHECK(sample_state(p, 99) == s);
}

TEST_CASE("custom prior: normalisation, score, sampling") {
    // Unnormalised beta(3,3) on [0,1] expressed by hand.
    const auto p = StatePrior::custom(
        [](double s) { return 2 * std::log(s) + 2 * std::log(1 - s); }, 0.0, 1.0);
    CHECK(p.density(0.25) == doctest::Approx(oracle::beta33(0.25)).epsilon(1e-9));
    CHECK(p.score(0.25) == doctest::Approx(2 / 0.25 - 2 / 0.75).epsilon(1e-6));
    CHECK(p.score_d1(0.3) == doctest::Approx(-2 / 0.09 - 2 / 0.49).epsilon(1e-5));
    Rng rng(3);
    double mean = 0;
    for (int i = 0; i < 200000; ++i) mean += p.sample(rng);
    mean /= 200000;
    CHECK(mean == doctest::Approx(0.5).epsilon(3e-3));
}

TEST_CASE("constellations carry mean energy P") {
    const auto b = Constellation::bpsk(2.0);
    CHECK(b.points() == std::vector<double>{std::sqrt(2.0), -std::sqrt(2.0)});
    CHECK(b.mean_energy() == doctest::Approx(2.0).epsilon(1e-15));
    const auto q = Constellation::pam4(2.0);
    REQUIRE(q.points().size() == 4);
    CHECK(q.points()[0] == doctest::Approx(3 * std::sqrt(0.4)));
    CHECK(q.points()[1] == doctest::Approx(std::sqrt(0.4)));
    CHECK(q.mean_energy() == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("input design validation") {
    CHECK_NOTHROW(InputDesign({0.25, 0.75}));
    CHECK_THROWS(InputDesign({0.5, 0.6}));
    CHECK_THROWS(InputDesign({-0.1, 1.1}));
    CHECK_THROWS(InputDesign({}));
    const TwoBandModel m(0.5, Constellation::bpsk(2), StatePrior::beta(3, 3));
    const auto d = m.design(0.6);
    CHECK(d.size() == 4);
    CHECK(d[0] == doctest::Approx(0.3));
    CHECK(d[3] == doctest::Approx(0.2));
    CHECK(*d.t1() == 0.6);
    CHECK_THROWS(m.design(1.5));
}

TEST_CASE("channel densities integrate to one") {
    const TwoBandModel m(0.5, Constellation::pam4(2), StatePrior::beta(3, 3));
    const auto& c = m.channel();
    for (std::size_t x = 0; x < c.alphabet_size(); ++x)
        for (double s : {0.0, 0.3, 1.0}) {
            const auto r = c.output_range(x, s);
            const double mass = quad::integrate([&](double y) { return c.density(y, x, s); }, r.lo, r.hi,
                                                {1e-12, 1e-15, 4000});
            CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
        }
}

TEST_CASE("two-band channel semantics") {
    const TwoBandModel m(0.5, Constellation::bpsk(2), StatePrior::beta(3, 3));
    const auto& c = m.channel();
    // Band 1 does not depend on s.
    for (double y : {-2.0, 0.1, 1.7}) CHECK(c.log_density(y, 0, 0.1) == c.log_density(y, 0, 0.9));
    CHECK(c.branch(0) == 1);
    CHECK(c.branch(2) == 2);
    CHECK(c.gaussian(3, 0.5)->variance == doctest::Approx(1.0));
    // Analytic curvature in s matches central differences of the log density.
    for (double s : {0.1, 0.5, 0.9})
        for (double y : {-1.0, 0.3, 2.5}) {
            const double h = 1e-4;
            const double fd = -(c.log_density(y, 2, s + h) - 2 * c.log_density(y, 2, s) +
                                c.log_density(y, 2, s - h)) / (h * h);
            const double an = *c.neg_curvature(y, 2, s);
            CHECK(std::abs(fd - an) <= 1e-6 * std::max(1.0, std::abs(an)));
        }
}
