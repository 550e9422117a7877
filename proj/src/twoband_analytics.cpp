#include "isac/twoband_analytics.hpp"

#include <cmath>

#include "isac/error.hpp"

namespace isac::closed_form {

double alpha_atbcrb(double t2, double a, double sigma2) {
    if (!(t2 > 0.0)) throw Error("twoband_analytics", "no sensing use (t2 = 0)");
    if (!(t2 <= 1.0) || !(a > 2.0) || !(sigma2 > 0.0))
        throw Error("twoband_analytics", "closed form needs t2 in (0,1], a > 2, sigma2 > 0");
    return (2.0 / t2) * ((a + 1.0) / (2.0 * (2.0 * a + 1.0)) + sigma2 + sigma2 * sigma2);
}

double mixture_fisher(double t2, double s, double sigma2) {
    const double v = s + sigma2;
    return t2 / (2.0 * v * v);
}

double prior_score(double a, double s) { return (a - 1.0) * (1.0 / s - 1.0 / (1.0 - s)); }

double ml_stationary(double T, double n2, double sigma2) {
    if (!(n2 > 0.0)) throw Error("twoband_analytics", "state unidentifiable from this codeword");
    return T / n2 - sigma2;
}

}  // namespace isac::closed_form
