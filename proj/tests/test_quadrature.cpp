#include "doctest.h"

#include <cmath>
#include <numbers>

#include "isac/quadrature.hpp"

using isac::quad::integrate;
using isac::quad::integrate_n;

TEST_CASE("polynomials are integrated exactly") {
    CHECK(integrate([](double x) { return 3 * x * x; }, 0.0, 2.0) == doctest::Approx(8.0).epsilon(1e-14));
}

TEST_CASE("smooth and weakly singular integrands") {
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi) ==
          doctest::Approx(2.0).epsilon(1e-12));
    // Endpoint singularity; nodes never touch x = 0.
    CHECK(integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, {1e-10, 1e-14, 4000}) ==
          doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("vector integrand shares panels across components") {
    auto f = [](double x) { return std::array<double, 3>{1.0, x, std::exp(-50 * x * x)}; };
    const auto r = integrate_n<3>(f, -1.0, 1.0);
    CHECK(r.value[0] == doctest::Approx(2.0));
    CHECK(std::abs(r.value[1]) < 1e-14);
    CHECK(r.value[2] == doctest::Approx(std::sqrt(std::numbers::pi / 50) * std::erf(std::sqrt(50.0))).epsilon(1e-11));
}

TEST_CASE("non-convergence and non-finite integrands raise") {
    CHECK_THROWS_AS(integrate([](double x) { return std::sin(1.0 / x); }, 0.0, 1.0, {1e-12, 1e-15, 8}),
                    isac::Error);
    CHECK_THROWS_AS(integrate([](double) { return NAN; }, 0.0, 1.0), isac::Error);
    try {
        integrate([](double x) { return std::sin(1.0 / x); }, 0.0, 1.0, {1e-12, 1e-15, 8});
    } catch (const isac::Error& e) {
        CHECK(e.module() == "quadrature");
        CHECK(std::string(e.what()).find("achieved error") != std::string::npos);
    }
}
