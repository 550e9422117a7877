#include "isac/bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace isac {

namespace {

void require_block_length(double n) {
    if (!(n >= 0.0) || !std::isfinite(n)) throw Error("bounds", "block length must be >= 0");
}

template <std::size_t N, class F>
std::array<double, N> expect_n(const StatePrior& prior, const F& f, const BoundOptions& opt) {
    auto weighted = [&](double s) {
        std::array<double, N> v{};
        // Beta priors have closed-form scores almost up to the support edge;
        // the last 1e-60 is dropped before the score powers overflow. Other
        // priors skip nodes inside the boundary guard.
        const double edge = 1e-60 * (prior.hi() - prior.lo());
        if (!(s > prior.lo() + edge && s < prior.hi() - edge)) return v;
        if (!prior.closed_form_score(s) && !prior.interior(s)) return v;
        const double p = prior.density(s);
        if (!(p > 0.0)) return v;
        v = f(s);
        for (auto& c : v) c *= p;
        return v;
    };
    try {
        return quad::integrate_n<N>(weighted, prior.lo(), prior.hi(), opt.quad).value;
    } catch (const Error& e) {
        if (e.module() == "quadrature")
            throw Error("bounds", std::string("state expectation failed: ") + e.what());
        throw;
    }
}

}  // namespace

double prior_expectation(const StatePrior& prior, const std::function<double(double)>& f,
                         const quad::Options& opt) {
    BoundOptions o;
    o.quad = opt;
    return expect_n<1>(
        prior, [&](double s) { return std::array<double, 1>{prior.interior(s) ? f(s) : 0.0}; },
        o)[0];
}

namespace {

StatePrior::ScoreTerms score_terms(const StatePrior& prior, double s) {
    if (auto t = prior.closed_form_score(s)) return *t;
    return {prior.score(s), prior.score_d1(s), prior.score_d2(s)};
}

double prior_term(const StatePrior& prior, double s) {
    const double v = score_terms(prior, s).value;
    return v * v;
}

std::string at_state(double s) {
    std::ostringstream os;
    os.precision(12);
    os << " at s = " << s;
    return os.str();
}

/// J_DP^{-1}, (d/ds J_DP^{-1})^2 and d^2/ds^2 J_DP^{-2} at s.
std::array<double, 3> tight_bound_terms(const FisherProfile& profile, double n, double s,
                                        const BoundOptions& opt) {
    const StatePrior& prior = profile.prior();
    std::array<double, 3> t{};

    std::optional<FisherDerivs> m;
    if (opt.derivatives == DerivativeMode::automatic) m = profile.mixture_derivs(s);

    if (m) {
        const auto [psi, psi1, psi2] = score_terms(prior, s);
        const double g = n * m->value + psi * psi;
        const double g1 = n * m->d1 + 2.0 * psi * psi1;
        const double g2 = n * m->d2 + 2.0 * psi1 * psi1 + 2.0 * psi * psi2;
        if (!(g > 0.0)) throw Error("bounds", "J_DP vanishes" + at_state(s));
        const double inv = 1.0 / g;
        const double r1 = g1 * inv, r2 = g2 * inv;
        const double inv_d1 = -r1 * inv;
        const double inv2_d2 = (-2.0 * r2 + 6.0 * r1 * r1) * inv * inv;
        t = {inv, inv_d1 * inv_d1, inv2_d2};
    } else {
        const double h = 1e-3 * (prior.hi() - prior.lo());
        auto inv_at = [&](double u) {
            const double g = n * profile.mixture(u) + prior_term(prior, u);
            if (!(g > 0.0)) throw Error("bounds", "J_DP vanishes" + at_state(u));
            return 1.0 / g;
        };
        const double lo = prior.lo() + kBoundaryGuard, hi = prior.hi() - kBoundaryGuard;
        const double f0 = inv_at(s);
        double d1 = 0.0, d2 = 0.0;
        if (s - h >= lo && s + h <= hi) {
            const double fp = inv_at(s + h), fm = inv_at(s - h);
            d1 = (fp - fm) / (2.0 * h);
            d2 = (fp * fp - 2.0 * f0 * f0 + fm * fm) / (h * h);
        } else {
            // Second-order one-sided stencil pointing into the support.
            const double dir = s - h < lo ? 1.0 : -1.0;
            const double f1 = inv_at(s + dir * h), f2 = inv_at(s + 2 * dir * h),
                         f3 = inv_at(s + 3 * dir * h);
            d1 = dir * (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h);
            d2 = (2.0 * f0 * f0 - 5.0 * f1 * f1 + 4.0 * f2 * f2 - f3 * f3) / (h * h);
        }
        t = {f0, d1 * d1, d2};
    }

    static constexpr const char* names[3] = {"E[J_DP^-1]", "E[(d/ds J_DP^-1)^2]",
                                             "E[d2/ds2 J_DP^-2]"};
    for (std::size_t i = 0; i < 3; ++i)
        if (!std::isfinite(t[i]))
            throw Error("bounds", std::string("non-finite value in integrand ") + names[i] +
                                      at_state(s));
    return t;
}

}  // namespace

double bayesian_fisher(const FisherProfile& profile, double n, const BoundOptions& opt) {
    require_block_length(n);
    const auto e = expect_n<1>(
        profile.prior(), [&](double s) { return std::array<double, 1>{profile.mixture(s)}; }, opt);
    const double value = n * e[0] + expected_prior_fisher(profile.prior(), opt.quad);
    if (!std::isfinite(value)) throw Error("bounds", "Bayesian Fisher information is not finite");
    return value;
}

double bcrb_finite(const FisherProfile& profile, double n, const BoundOptions& opt) {
    const double jb = bayesian_fisher(profile, n, opt);
    if (!(jb > 0.0)) throw Error("bounds", "degenerate model: Bayesian Fisher information is zero");
    return 1.0 / jb;
}

double atbcrb_finite(const FisherProfile& profile, double n, const BoundOptions& opt) {
    require_block_length(n);
    BoundOptions o = opt;
    const double mid = 0.5 * (profile.prior().lo() + profile.prior().hi());
    if (o.derivatives == DerivativeMode::numeric || !profile.mixture_derivs(mid))
        o.quad.rel_tol = std::max(o.quad.rel_tol, 1e-7);
    // Terms that nearly vanish are judged against the bound's own scale;
    // 1 / J_B is a lower bound on E[J_DP^-1].
    const double jb = bayesian_fisher(profile, n, opt);
    if (jb > 0.0 && std::isfinite(jb)) o.quad.abs_tol = std::max(o.quad.abs_tol, o.quad.rel_tol / jb);
    const auto e = expect_n<3>(
        profile.prior(), [&](double s) { return tight_bound_terms(profile, n, s, o); }, o);
    const double denom = e[0] + e[1] - e[2];
    if (!(denom > 0.0) || !std::isfinite(denom))
        throw Error("bounds", "tight bound denominator is not positive");
    return e[0] * e[0] / denom;
}

double alpha_atbcrb(const FisherProfile& profile, const BoundOptions& opt) {
    const auto e = expect_n<1>(
        profile.prior(),
        [&](double s) {
            const double m = profile.mixture(s);
            if (!(m > 0.0))
                throw Error("bounds", "state not identifiable under this design" + at_state(s));
            return std::array<double, 1>{1.0 / m};
        },
        opt);
    return e[0];
}

double alpha_bcrb(const FisherProfile& profile, const BoundOptions& opt) {
    const auto e = expect_n<1>(
        profile.prior(), [&](double s) { return std::array<double, 1>{profile.mixture(s)}; },
        opt);
    if (!(e[0] > 0.0)) throw Error("bounds", "state not identifiable under this design");
    return 1.0 / e[0];
}

double expected_prior_fisher(const StatePrior& prior, const quad::Options& opt) {
    BoundOptions o;
    o.quad = opt;
    auto integrand = [](const StatePrior& p) {
        return [&p](double s) { return std::array<double, 1>{prior_term(p, s)}; };
    };
    if (prior.kind() != StatePrior::Kind::beta)
        return expect_n<1>(prior, integrand(prior), o)[0];

    // Near s = 1 doubles are too coarse to resolve an s^(a-3) edge, so the
    // upper half is integrated as the lower half of the reflected beta(b, a).
    auto half = [&](const StatePrior& p) {
        try {
            return quad::integrate_n<1>(
                       [&](double s) {
                           std::array<double, 1> v{};
                           if (!(s > 1e-60)) return v;
                           v = integrand(p)(s);
                           v[0] *= p.density(s);
                           return v;
                       },
                       0.0, 0.5, opt)
                .value[0];
        } catch (const Error& e) {
            if (e.module() == "quadrature")
                throw Error("bounds", std::string("state expectation failed: ") + e.what());
            throw;
        }
    };
    return half(prior) + half(StatePrior::beta(prior.b(), prior.a()));
}

BoundReport bound_report(const FisherProfile& profile, double n, const BoundOptions& opt) {
    BoundReport r;
    r.n = n;
    r.bcrb_finite = bcrb_finite(profile, n, opt);
    r.atbcrb_finite = atbcrb_finite(profile, n, opt);
    r.alpha_atbcrb = alpha_atbcrb(profile, opt);
    r.alpha_bcrb = alpha_bcrb(profile, opt);
    r.jensen_gap = r.alpha_atbcrb - r.alpha_bcrb;
    return r;
}

}  // namespace isac
