#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "isac/bounds.hpp"
#include "isac/fisher.hpp"
#include "oracles.hpp"

using namespace isac;

namespace {

const TwoBandModel kModel(0.5, Constellation::bpsk(2), StatePrior::beta(3, 3, true));
constexpr std::size_t kBand2 = 2;  // first band-2 label for BPSK

}  // namespace

TEST_CASE("per-symbol Fisher examples") {
    const auto& c = kModel.channel();
    CHECK(per_symbol_fisher(c, kBand2, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(per_symbol_fisher(c, kBand2, 0.25) == doctest::Approx(1.0 / (2 * 0.5625)).epsilon(1e-15));
    for (double s : {0.0, 0.3, 0.99}) {
        CHECK(per_symbol_fisher(c, 0, s) == 0.0);
        CHECK(per_symbol_fisher(c, 0, s, FisherMethod::finite_difference) == 0.0);
    }
    CHECK_THROWS(per_symbol_fisher(c, 7, 0.5));
}

TEST_CASE("numeric curvature routes match the closed form on a 9-point grid") {
    const auto& c = kModel.channel();
    for (int i = 1; i <= 9; ++i) {
        const double s = 0.1 * i;
        const double exact = 1.0 / (2 * (s + 0.5) * (s + 0.5));
        for (auto m : {FisherMethod::curvature_quadrature, FisherMethod::finite_difference}) {
            const double v = per_symbol_fisher(c, kBand2, s, m);
            CHECK(std::abs(v - exact) <= 1e-6 * exact);
        }
        // Score-squared form as an independent route.
        CHECK(std::abs(per_symbol_fisher_score_form(c, kBand2, s) - exact) <= 1e-6 * exact);
    }
}

TEST_CASE("Fisher is invariant to the sign of the band-2 symbol") {
    const auto& c = kModel.channel();
    for (double s : {0.1, 0.5, 0.8})
        for (auto m : {FisherMethod::automatic, FisherMethod::curvature_quadrature}) {
            // Labels 2 and 3 are +sqrt(P) and -sqrt(P) on band 2.
            CHECK(per_symbol_fisher(c, 2, s, m) == doctest::Approx(per_symbol_fisher(c, 3, s, m)).epsilon(1e-12));
        }
    CHECK(per_symbol_fisher(c, 2, 0.4) == per_symbol_fisher(c, 3, 0.4));
}

TEST_CASE("mixture Fisher examples") {
    const auto& c = kModel.channel();
    CHECK(mixture_fisher(c, kModel.design(0.6), 0.5) == doctest::Approx(0.2).epsilon(1e-15));
    for (double s : {0.0, 0.4, 1.0}) CHECK(mixture_fisher(c, kModel.design(1.0), s) == 0.0);
    CHECK(mixture_fisher(c, kModel.design(0.0), 0.0) == doctest::Approx(2.0).epsilon(1e-15));
    // mixture = sum_x p(x) J_x exactly.
    const auto d = kModel.design(0.3);
    double sum = 0;
    for (std::size_t x = 0; x < d.size(); ++x) sum += d[x] * per_symbol_fisher(c, x, 0.37);
    CHECK(mixture_fisher(c, d, 0.37) == sum);
}

TEST_CASE("codeword Fisher is additive and permutation invariant") {
    const auto& c = kModel.channel();
    std::vector<std::size_t> cw{0, 1, 2, 0, 3, 1, 2, 0, 3, 1};  // 4 band-2 symbols
    CHECK(codeword_fisher(c, cw, 0.5) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(codeword_fisher(c, std::vector<std::size_t>{0, 1, 1, 0}, 0.5) == 0.0);
    std::mt19937_64 rng(1);
    const double ref = codeword_fisher(c, cw, 0.27);
    for (int i = 0; i < 10; ++i) {
        std::shuffle(cw.begin(), cw.end(), rng);
        CHECK(codeword_fisher(c, cw, 0.27) == ref);
    }
    CHECK_THROWS(codeword_fisher(c, std::vector<std::size_t>{}, 0.5));
}

TEST_CASE("prior Fisher term") {
    const auto& p = kModel.prior();
    CHECK(prior_fisher_term(p, 0.5) == 0.0);
    CHECK(prior_fisher_term(p, 0.25) == doctest::Approx(256.0 / 9).epsilon(1e-13));
    CHECK_THROWS_WITH(prior_fisher_term(p, 1.0), "score singular at support boundary");

    // Oracle: p(s) L_P(s) reduces to 120 (1 - 2s)^2 for beta(3,3).
    const double oracle_value = oracle::simpson([](double s) { return 120 * (1 - 2 * s) * (1 - 2 * s); }, 0, 1, 2);
    CHECK(oracle_value == doctest::Approx(40.0).epsilon(1e-14));
    CHECK(std::abs(expected_prior_fisher(p) - oracle_value) < 1e-8);
    // Guarded generic expectation loses only the O(guard) edge mass.
    const double g = prior_expectation(p, [&](double s) { return prior_fisher_term(p, s); });
    CHECK(std::abs(g - oracle_value) < 1e-6);
}

TEST_CASE("profile memoises numeric values and reports analytic derivatives") {
    const FisherProfile numeric(kModel.channel(), kModel.design(0.2), kModel.prior(),
                                FisherMethod::finite_difference);
    const FisherProfile analytic(kModel.channel(), kModel.design(0.2), kModel.prior());
    for (double s : {0.2, 0.6}) {
        CHECK(numeric.mixture(s) == doctest::Approx(analytic.mixture(s)).epsilon(1e-6));
        CHECK(numeric.mixture(s) == numeric.mixture(s));
    }
    CHECK_FALSE(numeric.mixture_derivs(0.3).has_value());
    const auto d = analytic.mixture_derivs(0.3);
    REQUIRE(d.has_value());
    CHECK(d->value == doctest::Approx(0.8 / (2 * 0.64)));
    CHECK(d->d1 == doctest::Approx(-0.8 / (0.8 * 0.8 * 0.8)));
    CHECK(analytic.combined(0.25, 100) ==
          doctest::Approx(100 * analytic.mixture(0.25) + analytic.prior_term(0.25)));
}
