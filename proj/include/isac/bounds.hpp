#pragma once

#include <functional>

#include "isac/fisher.hpp"
#include "isac/quadrature.hpp"

namespace isac {

/// Source of the s-derivatives of J_DP^{-1} and J_DP^{-2} in the
/// asymptotically tight bound: closed form when the profile supplies one,
/// or finite differences with step 1e-3 * (support width), one-sided near the
/// support edges. The numeric route runs its quadrature at a relative
/// tolerance of at least 1e-7.
enum class DerivativeMode { automatic, numeric };

struct BoundOptions {
    quad::Options quad{1e-11, 1e-300, 4000};
    DerivativeMode derivatives = DerivativeMode::automatic;
};

struct BoundReport {
    double n = 0.0;
    double bcrb_finite = 0.0;
    double atbcrb_finite = 0.0;
    double alpha_atbcrb = 0.0;
    double alpha_bcrb = 0.0;
    double jensen_gap = 0.0;
};

/// E_S[f(S)] under the prior by adaptive quadrature. f is only called on
/// states outside the boundary guard; nodes inside it contribute zero.
double prior_expectation(const StatePrior& prior, const std::function<double(double)>& f,
                         const quad::Options& opt = {1e-11, 1e-300, 4000});

/// E_S[L_P(S)]. For beta priors the nodes reach the support edges, where the
/// integrand may grow like s^(a-3).
double expected_prior_fisher(const StatePrior& prior,
                             const quad::Options& opt = {1e-11, 1e-300, 4000});

/// E_S[n * mixture(S) + L_P(S)].
double bayesian_fisher(const FisherProfile& profile, double n, const BoundOptions& opt = {});

/// Bayesian Cramer-Rao bound 1 / bayesian_fisher at block length n.
double bcrb_finite(const FisherProfile& profile, double n, const BoundOptions& opt = {});

/// Asymptotically tight Bayesian Cramer-Rao bound at block length n:
///
///   E^2[J^{-1}] / (E[J^{-1}] + E[(d/ds J^{-1})^2] - E[d^2/ds^2 J^{-2}])
///
/// with J = J_DP(s) = n * mixture(s) + L_P(s). This is the weighted Bayesian
/// bound with weight 1/J; the curvature term enters with a minus sign after
/// integrating the prior-score cross term by parts. The three expectations
/// are taken over one shared adaptive state grid.
double atbcrb_finite(const FisherProfile& profile, double n, const BoundOptions& opt = {});

/// Limit of n * MSE attained by ML/MAP on a constant-composition code:
/// E_S[1 / mixture(S)].
double alpha_atbcrb(const FisherProfile& profile, const BoundOptions& opt = {});

/// Limit of n * BCRB: 1 / E_S[mixture(S)]. Never exceeds alpha_atbcrb.
double alpha_bcrb(const FisherProfile& profile, const BoundOptions& opt = {});

BoundReport bound_report(const FisherProfile& profile, double n, const BoundOptions& opt = {});

}  // namespace isac
