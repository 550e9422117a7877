#include "isac/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "isac/quadrature.hpp"

namespace isac {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;  // ln(2 pi)

double gaussian_log_density(double y, double mean, double variance) {
    const double d = y - mean;
    return -0.5 * (kLog2Pi + std::log(variance)) - d * d / (2.0 * variance);
}

}  // namespace

double beta_log_density(double s, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0))
        throw Error("model", "beta shape parameters must be positive");
    if (!(s > 0.0 && s < 1.0)) throw Error("model", "state outside prior support");
    return std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + (a - 1.0) * std::log(s) +
           (b - 1.0) * std::log1p(-s);
}

double beta_density(double s, double a, double b) { return std::exp(beta_log_density(s, a, b)); }

// ---------------------------------------------------------------------------

StatePrior StatePrior::beta(double a, double b, bool require_regular) {
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
        throw Error("model", "beta shape parameters must be positive and finite");
    if (require_regular && !(a == b && a > 2.0))
        throw Error("model", "beta prior must satisfy a = b > 2 for the regularity conditions");
    StatePrior p;
    p.kind_ = Kind::beta;
    p.a_ = a;
    p.b_ = b;
    p.lo_ = 0.0;
    p.hi_ = 1.0;
    return p;
}

StatePrior StatePrior::custom(std::function<double(double)> log_density, double lo, double hi) {
    if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi))
        throw Error("model", "custom prior needs a bounded support with lo < hi");
    StatePrior p;
    p.kind_ = Kind::custom;
    p.lo_ = lo;
    p.hi_ = hi;
    p.log_density_ = std::move(log_density);

    const auto& f = p.log_density_;
    const double mass = quad::integrate([&](double s) { return std::exp(f(s)); }, lo, hi,
                                        {1e-12, 1e-300, 4000});
    if (!(mass > 0.0) || !std::isfinite(mass))
        throw Error("model", "custom prior density has no finite positive mass");
    p.log_norm_ = std::log(mass);

    // Tabulated CDF for inverse-transform sampling.
    constexpr std::size_t cells = 4096;
    auto table = std::make_shared<std::vector<double>>(cells + 1, 0.0);
    const double w = (hi - lo) / cells;
    for (std::size_t i = 0; i < cells; ++i) {
        const double a = lo + i * w;
        auto pdf = [&](double s) {
            return std::array<double, 1>{std::exp(f(s) - p.log_norm_)};
        };
        (*table)[i + 1] = (*table)[i] + quad::detail::gk15<1>(pdf, a, a + w).value[0];
    }
    for (auto& c : *table) c /= table->back();
    p.cdf_table_ = std::move(table);
    return p;
}

void StatePrior::require_interior(double s) const {
    if (!(s >= lo_ && s <= hi_)) throw Error("model", "state outside prior support");
    if (!interior(s)) throw Error("model", "score singular at support boundary");
}

double StatePrior::log_density(double s) const {
    if (!(s > lo_ && s < hi_)) return -INFINITY;
    if (kind_ == Kind::beta) return beta_log_density(s, a_, b_);
    return log_density_(s) - log_norm_;
}

double StatePrior::density(double s) const { return std::exp(log_density(s)); }

double StatePrior::score(double s) const {
    require_interior(s);
    if (kind_ == Kind::beta) return (a_ - 1.0) / s - (b_ - 1.0) / (1.0 - s);
    const double h = std::min(1e-5 * (hi_ - lo_), 0.5 * std::min(s - lo_, hi_ - s));
    return (log_density_(s + h) - log_density_(s - h)) / (2.0 * h);
}

double StatePrior::score_d1(double s) const {
    require_interior(s);
    if (kind_ == Kind::beta) return -(a_ - 1.0) / (s * s) - (b_ - 1.0) / ((1.0 - s) * (1.0 - s));
    const double h = std::min(1e-4 * (hi_ - lo_), 0.5 * std::min(s - lo_, hi_ - s));
    return (log_density_(s + h) - 2.0 * log_density_(s) + log_density_(s - h)) / (h * h);
}

double StatePrior::score_d2(double s) const {
    require_interior(s);
    if (kind_ == Kind::beta) {
        const double u = 1.0 - s;
        return 2.0 * (a_ - 1.0) / (s * s * s) - 2.0 * (b_ - 1.0) / (u * u * u);
    }
    const double h = std::min(1e-3 * (hi_ - lo_), 0.25 * std::min(s - lo_, hi_ - s));
    const auto& l = log_density_;
    return (l(s + 2 * h) - 2.0 * l(s + h) + 2.0 * l(s - h) - l(s - 2 * h)) / (2.0 * h * h * h);
}

std::optional<StatePrior::ScoreTerms> StatePrior::closed_form_score(double s) const {
    if (kind_ != Kind::beta || !(s > lo_ && s < hi_)) return std::nullopt;
    const double u = 1.0 - s;
    return ScoreTerms{(a_ - 1.0) / s - (b_ - 1.0) / u, -(a_ - 1.0) / (s * s) - (b_ - 1.0) / (u * u),
                      2.0 * (a_ - 1.0) / (s * s * s) - 2.0 * (b_ - 1.0) / (u * u * u)};
}

double StatePrior::sample(Rng& rng) const {
    if (kind_ == Kind::beta) {
        std::gamma_distribution<double> ga(a_, 1.0), gb(b_, 1.0);
        const double x = ga(rng);
        const double y = gb(rng);
        return x / (x + y);
    }
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double u = unif(rng);
    const auto& cdf = *cdf_table_;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t i = std::clamp<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), 1,
                                            cdf.size() - 1);
    const double c0 = cdf[i - 1], c1 = cdf[i];
    const double frac = c1 > c0 ? (u - c0) / (c1 - c0) : 0.5;
    const double w = (hi_ - lo_) / static_cast<double>(cdf.size() - 1);
    return lo_ + (static_cast<double>(i - 1) + frac) * w;
}

double prior_score(const StatePrior& prior, double s) { return prior.score(s); }

double sample_state(const StatePrior& prior, std::uint64_t seed) {
    Rng rng = make_rng(seed, 0);
    return prior.sample(rng);
}

// ---------------------------------------------------------------------------

Constellation Constellation::bpsk(double power) { return make(Kind::bpsk, power); }
Constellation Constellation::pam4(double power) { return make(Kind::pam4, power); }

Constellation Constellation::make(Kind kind, double power) {
    if (!(power > 0.0) || !std::isfinite(power))
        throw Error("model", "constellation power must be positive");
    Constellation c;
    c.kind_ = kind;
    c.power_ = power;
    if (kind == Kind::bpsk) {
        const double r = std::sqrt(power);
        c.points_ = {r, -r};
    } else {
        const double r = std::sqrt(power / 5.0);
        c.points_ = {3.0 * r, r, -r, -3.0 * r};
    }
    return c;
}

double Constellation::mean_energy() const {
    double e = 0.0;
    for (double p : points_) e += p * p;
    return e / static_cast<double>(points_.size());
}

InputDesign::InputDesign(std::vector<double> pmf) : pmf_(std::move(pmf)) {
    if (pmf_.empty()) throw Error("model", "input design needs a nonempty alphabet");
    double sum = 0.0;
    for (double p : pmf_) {
        if (!(p >= 0.0) || !std::isfinite(p))
            throw Error("model", "input pmf entries must be nonnegative");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw Error("model", "input pmf must sum to 1");
}

// ---------------------------------------------------------------------------

double ChannelModel::density(double y, std::size_t x, double s) const {
    return std::exp(log_density(y, x, s));
}

GaussianMeanShiftChannel::GaussianMeanShiftChannel(std::vector<double> points, double sigma2)
    : points_(std::move(points)), sigma2_(sigma2) {
    if (!(sigma2 > 0.0)) throw Error("model", "noise variance must be positive");
    if (points_.empty()) throw Error("model", "channel needs at least one input point");
}

double GaussianMeanShiftChannel::log_density(double y, std::size_t x, double) const {
    return gaussian_log_density(y, points_.at(x), sigma2_);
}

double GaussianMeanShiftChannel::sample(std::size_t x, double, Rng& rng) const {
    std::normal_distribution<double> z(0.0, 1.0);
    return points_.at(x) + std::sqrt(sigma2_) * z(rng);
}

OutputRange GaussianMeanShiftChannel::output_range(std::size_t x, double) const {
    const double w = 10.0 * std::sqrt(sigma2_);
    return {points_.at(x) - w, points_.at(x) + w};
}

std::optional<double> GaussianMeanShiftChannel::neg_curvature(double, std::size_t, double) const {
    return 0.0;
}

std::optional<FisherDerivs> GaussianMeanShiftChannel::fisher(std::size_t, double) const {
    return FisherDerivs{};
}

std::optional<GaussianComponent> GaussianMeanShiftChannel::gaussian(std::size_t x, double) const {
    return GaussianComponent{points_.at(x), sigma2_};
}

GaussianStateVarianceChannel::GaussianStateVarianceChannel(std::vector<double> points,
                                                           double sigma2)
    : points_(std::move(points)), sigma2_(sigma2) {
    if (!(sigma2 > 0.0)) throw Error("model", "noise variance must be positive");
    if (points_.empty()) throw Error("model", "channel needs at least one input point");
}

double GaussianStateVarianceChannel::variance(double s) const {
    const double v = s + sigma2_;
    if (!(v > 0.0)) throw Error("model", "band-2 variance s + sigma2 must be positive");
    return v;
}

double GaussianStateVarianceChannel::log_density(double y, std::size_t x, double s) const {
    return gaussian_log_density(y, points_.at(x), variance(s));
}

double GaussianStateVarianceChannel::sample(std::size_t x, double s, Rng& rng) const {
    std::normal_distribution<double> z(0.0, 1.0);
    return points_.at(x) + std::sqrt(variance(s)) * z(rng);
}

OutputRange GaussianStateVarianceChannel::output_range(std::size_t x, double s) const {
    const double w = 10.0 * std::sqrt(variance(s));
    return {points_.at(x) - w, points_.at(x) + w};
}

std::optional<double> GaussianStateVarianceChannel::neg_curvature(double y, std::size_t x,
                                                                  double s) const {
    const double v = variance(s);
    const double d = y - points_.at(x);
    return d * d / (v * v * v) - 0.5 / (v * v);
}

std::optional<FisherDerivs> GaussianStateVarianceChannel::fisher(std::size_t, double s) const {
    const double v = variance(s);
    const double v2 = v * v;
    return FisherDerivs{0.5 / v2, -1.0 / (v2 * v), 3.0 / (v2 * v2)};
}

std::optional<GaussianComponent> GaussianStateVarianceChannel::gaussian(std::size_t x,
                                                                        double s) const {
    return GaussianComponent{points_.at(x), variance(s)};
}

TwoBandChannel::TwoBandChannel(std::vector<double> points, double sigma2)
    : band1_(points, sigma2), band2_(std::move(points), sigma2) {}

const ChannelModel& TwoBandChannel::route(std::size_t x, std::size_t& local) const {
    const std::size_t k = band1_.alphabet_size();
    if (x >= 2 * k) throw Error("model", "input label outside the two-band alphabet");
    if (x < k) {
        local = x;
        return band1_;
    }
    local = x - k;
    return band2_;
}

double TwoBandChannel::log_density(double y, std::size_t x, double s) const {
    std::size_t l;
    const auto& c = route(x, l);
    return c.log_density(y, l, s);
}

double TwoBandChannel::sample(std::size_t x, double s, Rng& rng) const {
    std::size_t l;
    const auto& c = route(x, l);
    return c.sample(l, s, rng);
}

OutputRange TwoBandChannel::output_range(std::size_t x, double s) const {
    std::size_t l;
    const auto& c = route(x, l);
    return c.output_range(l, s);
}

std::optional<double> TwoBandChannel::neg_curvature(double y, std::size_t x, double s) const {
    std::size_t l;
    const auto& c = route(x, l);
    return c.neg_curvature(y, l, s);
}

std::optional<FisherDerivs> TwoBandChannel::fisher(std::size_t x, double s) const {
    std::size_t l;
    const auto& c = route(x, l);
    return c.fisher(l, s);
}

std::optional<GaussianComponent> TwoBandChannel::gaussian(std::size_t x, double s) const {
    std::size_t l;
    const auto& c = route(x, l);
    return c.gaussian(l, s);
}

// ---------------------------------------------------------------------------

TwoBandModel::TwoBandModel(double sigma2, Constellation constellation, StatePrior prior)
    : sigma2_(sigma2),
      constellation_(std::move(constellation)),
      prior_(std::move(prior)),
      band1_(constellation_.points(), sigma2),
      band2_(constellation_.points(), sigma2),
      composite_(constellation_.points(), sigma2) {
    if (prior_.lo() + sigma2_ <= 0.0)
        throw Error("model", "band-2 variance s + sigma2 must be positive on the prior support");
}

InputDesign TwoBandModel::design(double t1) const {
    if (!(t1 >= 0.0 && t1 <= 1.0)) throw Error("model", "band-1 fraction t1 must lie in [0, 1]");
    const std::size_t k = constellation_.points().size();
    std::vector<double> pmf(2 * k);
    for (std::size_t i = 0; i < k; ++i) {
        pmf[i] = t1 / static_cast<double>(k);
        pmf[k + i] = (1.0 - t1) / static_cast<double>(k);
    }
    InputDesign d(std::move(pmf));
    d.set_band_fraction(t1);
    return d;
}

InputDesign TwoBandModel::uniform_band_design() const {
    const std::size_t k = constellation_.points().size();
    return InputDesign(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

}  // namespace isac
