#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>

#include "isac/model.hpp"

namespace isac {

/// How per-symbol Fisher information is obtained.
///  - automatic: closed form if the channel has one, else analytic curvature
///    quadrature, else the finite-difference score form.
///  - curvature_quadrature: E[-d^2/ds^2 log d] over y, analytic curvature if
///    available, second differences of log d otherwise.
///  - finite_difference: E[(d/ds log d)^2] with the score by central
///    differences. Never uses channel closed forms. Roundoff stays near 1e-12
///    relative, smooth enough for numeric s-derivatives of the result.
enum class FisherMethod { automatic, curvature_quadrature, finite_difference };

double per_symbol_fisher(const ChannelModel& channel, std::size_t x, double s,
                         FisherMethod method = FisherMethod::automatic);

/// Score-squared form E[(d/ds log d)^2] by central differences and output
/// quadrature. Same route as FisherMethod::finite_difference.
double per_symbol_fisher_score_form(const ChannelModel& channel, std::size_t x, double s);

double mixture_fisher(const ChannelModel& channel, const InputDesign& design, double s,
                      FisherMethod method = FisherMethod::automatic);

/// Sum of per-symbol Fisher terms over a codeword, evaluated through its
/// composition.
double codeword_fisher(const ChannelModel& channel, std::span<const std::size_t> codeword,
                       double s, FisherMethod method = FisherMethod::automatic);

double prior_fisher_term(const StatePrior& prior, double s);

/// Fisher quantities of one (channel, design, prior) triple. Per-symbol values
/// are memoised by (label, state); the table is shared between copies and
/// guarded for concurrent use. The channel must outlive the profile.
class FisherProfile {
public:
    FisherProfile(const ChannelModel& channel, InputDesign design, StatePrior prior,
                  FisherMethod method = FisherMethod::automatic);

    const ChannelModel& channel() const { return *channel_; }
    const InputDesign& design() const { return design_; }
    const StatePrior& prior() const { return prior_; }

    double per_symbol(std::size_t x, double s) const;
    double mixture(double s) const;
    /// Mixture Fisher with analytic s-derivatives, when every symbol in the
    /// design's support has a closed form and the method permits it.
    std::optional<FisherDerivs> mixture_derivs(double s) const;
    double prior_term(double s) const { return prior_fisher_term(prior_, s); }
    /// J_DP(s) = n * mixture(s) + prior_term(s).
    double combined(double s, double n) const { return n * mixture(s) + prior_term(s); }

private:
    struct Cache;
    const ChannelModel* channel_;
    InputDesign design_;
    StatePrior prior_;
    FisherMethod method_;
    std::shared_ptr<Cache> cache_;
};

}  // namespace isac
