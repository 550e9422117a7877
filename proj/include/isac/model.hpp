#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "isac/error.hpp"
#include "isac/rng.hpp"

namespace isac {

/// States closer than this to a support endpoint are rejected by every
/// prior-dependent quantity.
inline constexpr double kBoundaryGuard = 1e-9;

// ---------------------------------------------------------------------------
// Priors

double beta_density(double s, double a, double b);
double beta_log_density(double s, double a, double b);

/// Continuous prior on a closed interval. Built-in kind is the beta
/// distribution on [0, 1]; a user density on [lo, hi] is also accepted.
class StatePrior {
public:
    enum class Kind { beta, custom };

    /// Beta(a, b) on [0, 1]. With `require_regular` the symmetric a = b > 2
    /// regime is enforced, which is where the score-based bounds are valid.
    static StatePrior beta(double a, double b, bool require_regular = false);

    /// User density given by its (possibly unnormalised) log. The density is
    /// normalised by quadrature at construction.
    static StatePrior custom(std::function<double(double)> log_density, double lo, double hi);

    Kind kind() const { return kind_; }
    double a() const { return a_; }
    double b() const { return b_; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }

    double density(double s) const;
    double log_density(double s) const;

    /// d/ds log p(s) and its first two derivatives. Analytic for beta,
    /// central differences otherwise. Throw at the support boundary.
    double score(double s) const;
    double score_d1(double s) const;
    double score_d2(double s) const;

    struct ScoreTerms {
        double value, d1, d2;
    };
    /// Closed-form score and derivatives anywhere in the open support,
    /// without the boundary guard. Beta priors only.
    std::optional<ScoreTerms> closed_form_score(double s) const;

    double sample(Rng& rng) const;

    bool interior(double s) const { return s > lo_ + kBoundaryGuard && s < hi_ - kBoundaryGuard; }

private:
    StatePrior() = default;
    void require_interior(double s) const;

    Kind kind_ = Kind::beta;
    double a_ = 1.0, b_ = 1.0;
    double lo_ = 0.0, hi_ = 1.0;
    std::function<double(double)> log_density_;
    double log_norm_ = 0.0;
    std::shared_ptr<const std::vector<double>> cdf_table_;
};

double prior_score(const StatePrior& prior, double s);
double sample_state(const StatePrior& prior, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Inputs

class Constellation {
public:
    enum class Kind { bpsk, pam4 };

    static Constellation bpsk(double power);
    static Constellation pam4(double power);
    static Constellation make(Kind kind, double power);

    Kind kind() const { return kind_; }
    double power() const { return power_; }
    const std::vector<double>& points() const { return points_; }
    double mean_energy() const;
    std::string name() const { return kind_ == Kind::bpsk ? "bpsk" : "4pam"; }

private:
    Kind kind_ = Kind::bpsk;
    double power_ = 0.0;
    std::vector<double> points_;
};

/// Probability mass function over input labels 0..size()-1. For two-band
/// designs the band-1 fraction is kept alongside.
class InputDesign {
public:
    explicit InputDesign(std::vector<double> pmf);

    std::size_t size() const { return pmf_.size(); }
    const std::vector<double>& pmf() const { return pmf_; }
    double operator[](std::size_t x) const { return pmf_[x]; }

    std::optional<double> t1() const { return t1_; }
    void set_band_fraction(double t1) { t1_ = t1; }

private:
    std::vector<double> pmf_;
    std::optional<double> t1_;
};

// ---------------------------------------------------------------------------
// Channels

struct OutputRange {
    double lo, hi;
};

/// Per-symbol Fisher information and its first two state derivatives.
struct FisherDerivs {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

struct GaussianComponent {
    double mean;
    double variance;
};

/// Memoryless channel d(y | x, s) with a scalar real output. `branch(x)` is a
/// discrete tag the receiver observes alongside y (e.g. the band used); the
/// output space is branch x R.
class ChannelModel {
public:
    virtual ~ChannelModel() = default;

    virtual std::size_t alphabet_size() const = 0;
    virtual double log_density(double y, std::size_t x, double s) const = 0;
    virtual double sample(std::size_t x, double s, Rng& rng) const = 0;
    /// Integration window holding all but a negligible tail of d(.|x,s).
    virtual OutputRange output_range(std::size_t x, double s) const = 0;

    virtual int branch(std::size_t /*x*/) const { return 0; }

    /// Closed-form curvature -d^2/ds^2 log d(y|x,s), if available.
    virtual std::optional<double> neg_curvature(double /*y*/, std::size_t /*x*/,
                                                double /*s*/) const {
        return std::nullopt;
    }
    /// Closed-form per-symbol Fisher information, if available.
    virtual std::optional<FisherDerivs> fisher(std::size_t /*x*/, double /*s*/) const {
        return std::nullopt;
    }
    virtual std::optional<GaussianComponent> gaussian(std::size_t /*x*/, double /*s*/) const {
        return std::nullopt;
    }

    double density(double y, std::size_t x, double s) const;
};

/// y ~ N(point[x], sigma2); carries no information about s.
class GaussianMeanShiftChannel : public ChannelModel {
public:
    GaussianMeanShiftChannel(std::vector<double> points, double sigma2);

    std::size_t alphabet_size() const override { return points_.size(); }
    double log_density(double y, std::size_t x, double s) const override;
    double sample(std::size_t x, double s, Rng& rng) const override;
    OutputRange output_range(std::size_t x, double s) const override;
    std::optional<double> neg_curvature(double y, std::size_t x, double s) const override;
    std::optional<FisherDerivs> fisher(std::size_t x, double s) const override;
    std::optional<GaussianComponent> gaussian(std::size_t x, double s) const override;

private:
    std::vector<double> points_;
    double sigma2_;
};

/// y ~ N(point[x], s + sigma2): the state is an additive noise variance.
class GaussianStateVarianceChannel : public ChannelModel {
public:
    GaussianStateVarianceChannel(std::vector<double> points, double sigma2);

    std::size_t alphabet_size() const override { return points_.size(); }
    double log_density(double y, std::size_t x, double s) const override;
    double sample(std::size_t x, double s, Rng& rng) const override;
    OutputRange output_range(std::size_t x, double s) const override;
    std::optional<double> neg_curvature(double y, std::size_t x, double s) const override;
    std::optional<FisherDerivs> fisher(std::size_t x, double s) const override;
    std::optional<GaussianComponent> gaussian(std::size_t x, double s) const override;

private:
    double variance(double s) const;
    std::vector<double> points_;
    double sigma2_;
};

/// Two-band composite: labels [0, K) send point k on band 1, labels [K, 2K)
/// send point k - K on band 2. The band index is observed (branch).
class TwoBandChannel : public ChannelModel {
public:
    TwoBandChannel(std::vector<double> points, double sigma2);

    std::size_t alphabet_size() const override { return 2 * band1_.alphabet_size(); }
    double log_density(double y, std::size_t x, double s) const override;
    double sample(std::size_t x, double s, Rng& rng) const override;
    OutputRange output_range(std::size_t x, double s) const override;
    int branch(std::size_t x) const override { return x < band1_.alphabet_size() ? 1 : 2; }
    std::optional<double> neg_curvature(double y, std::size_t x, double s) const override;
    std::optional<FisherDerivs> fisher(std::size_t x, double s) const override;
    std::optional<GaussianComponent> gaussian(std::size_t x, double s) const override;

    std::size_t points_per_band() const { return band1_.alphabet_size(); }

private:
    const ChannelModel& route(std::size_t x, std::size_t& local) const;
    GaussianMeanShiftChannel band1_;
    GaussianStateVarianceChannel band2_;
};

/// Spectrum-sensing example: band 1 is N(x, sigma2), band 2 is N(x, s + sigma2),
/// the state has a beta prior on [0, 1].
class TwoBandModel {
public:
    TwoBandModel(double sigma2, Constellation constellation, StatePrior prior);

    double sigma2() const { return sigma2_; }
    const Constellation& constellation() const { return constellation_; }
    const StatePrior& prior() const { return prior_; }

    const GaussianMeanShiftChannel& band1() const { return band1_; }
    const GaussianStateVarianceChannel& band2() const { return band2_; }
    const TwoBandChannel& channel() const { return composite_; }

    /// Uniform symbols within each band; band 1 used a fraction t1 of the time.
    InputDesign design(double t1) const;
    /// Uniform design over one band's constellation.
    InputDesign uniform_band_design() const;

    bool is_band2(std::size_t label) const { return label >= constellation_.points().size(); }

private:
    double sigma2_;
    Constellation constellation_;
    StatePrior prior_;
    GaussianMeanShiftChannel band1_;
    GaussianStateVarianceChannel band2_;
    TwoBandChannel composite_;
};

}  // namespace isac
