#pragma once

#include <span>

#include "isac/model.hpp"

namespace isac {

struct RateBreakdown {
    double t1 = 0.0;
    double h2 = 0.0;        // binary entropy of t1, bits
    double c1 = 0.0;        // band-1 rate, bits/symbol
    double c2_worst = 0.0;  // band-2 rate at the worst state, bits/symbol
    double total = 0.0;     // h2 + t1 c1 + (1 - t1) c2_worst
};

struct WorstCase {
    double rate_bits;
    double state;
};

double binary_entropy(double t);

/// Differential entropy (bits) of sum_k w_k N(mu_k, variance).
double gaussian_mixture_entropy(std::span<const double> weights, std::span<const double> means,
                                double variance);

/// I(X; Y~) in bits for a discrete input over the channel at a fixed state.
/// The branch tag of each symbol is treated as part of the output.
double mi_discrete_input(const ChannelModel& channel, const InputDesign& design, double s);

/// Compound-channel rate min_s I(X; Y~) over [lo, hi]: grid scan then
/// golden-section refinement around the grid minimiser.
WorstCase worst_case_rate(const ChannelModel& channel, const InputDesign& design, double lo,
                          double hi, std::size_t grid = 64);

/// Time-sharing rate of the two-band example with band 2 at s = prior.hi().
RateBreakdown two_band_rate(const TwoBandModel& model, double t1);
/// Same, from precomputed band rates.
RateBreakdown two_band_rate(double t1, double c1, double c2_worst);

}  // namespace isac
