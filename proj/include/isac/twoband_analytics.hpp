#pragma once

namespace isac::closed_form {

// Closed forms for the two-band example with a symmetric beta(a, a) prior.
// t2 is the band-2 (sensing) fraction.

/// (2 / t2) ((a + 1) / (2 (2a + 1)) + sigma2 + sigma2^2)
double alpha_atbcrb(double t2, double a, double sigma2);

/// t2 / (2 (s + sigma2)^2)
double mixture_fisher(double t2, double s, double sigma2);

/// (a - 1) (1/s - 1/(1 - s))
double prior_score(double a, double s);

/// Unclipped ML stationary point T / n2 - sigma2.
double ml_stationary(double T, double n2, double sigma2);

}  // namespace isac::closed_form
