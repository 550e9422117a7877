#include "isac/rate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <vector>

#include "isac/optimize.hpp"
#include "isac/quadrature.hpp"

namespace isac {

namespace {

constexpr double kLn2 = std::numbers::ln2;
const quad::Options kEntropyQuad{1e-12, 1e-15, 4000};

double gaussian_entropy_nats(double variance) {
    return 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * variance);
}

double log_sum_exp(const std::vector<double>& v) {
    const double m = *std::max_element(v.begin(), v.end());
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

/// Integrate g over [lo, hi] split at the given interior breakpoints.
template <class G>
double integrate_piecewise(const G& g, double lo, double hi, std::vector<double> breaks) {
    breaks.push_back(lo);
    breaks.push_back(hi);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (breaks[i] < lo || breaks[i + 1] > hi) continue;
        try {
            total += quad::integrate(g, breaks[i], breaks[i + 1], kEntropyQuad);
        } catch (const Error& e) {
            throw Error("rate", std::string("entropy integral failed: ") + e.what());
        }
    }
    return total;
}

double mixture_entropy_nats(std::span<const double> w, std::span<const double> mu,
                            double variance) {
    const double sd = std::sqrt(variance);
    std::vector<double> logw;
    std::vector<double> means;
    for (std::size_t k = 0; k < w.size(); ++k)
        if (w[k] > 0.0) {
            logw.push_back(std::log(w[k]));
            means.push_back(mu[k]);
        }
    const auto [mn, mx] = std::minmax_element(means.begin(), means.end());
    const double lo = *mn - 10.0 * sd, hi = *mx + 10.0 * sd;
    const double norm = -0.5 * std::log(2.0 * std::numbers::pi * variance);
    std::vector<double> terms(means.size());
    auto integrand = [&](double y) {
        for (std::size_t k = 0; k < means.size(); ++k) {
            const double d = y - means[k];
            terms[k] = logw[k] + norm - d * d / (2.0 * variance);
        }
        const double lf = log_sum_exp(terms);
        const double f = std::exp(lf);
        return f > 0.0 ? -f * lf : 0.0;
    };
    return integrate_piecewise(integrand, lo, hi, means);
}

void check_weights(std::span<const double> w) {
    double sum = 0.0;
    for (double x : w) {
        if (!(x >= 0.0)) throw Error("rate", "mixture weights must be nonnegative");
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw Error("rate", "mixture weights must sum to 1");
}

/// Generic I(X;Y) in nats: sum_x p(x) E[log d(Y|x) / q(b_x, Y)].
double mi_generic_nats(const ChannelModel& c, const InputDesign& d, double s) {
    const std::size_t k = d.size();
    double total = 0.0;
    std::vector<double> terms;
    for (std::size_t x = 0; x < k; ++x) {
        if (!(d[x] > 0.0)) continue;
        const int b = c.branch(x);
        std::vector<std::size_t> peers;
        std::vector<double> breaks;
        double lo = INFINITY, hi = -INFINITY;
        for (std::size_t j = 0; j < k; ++j)
            if (d[j] > 0.0 && c.branch(j) == b) {
                peers.push_back(j);
                const OutputRange r = c.output_range(j, s);
                lo = std::min(lo, r.lo);
                hi = std::max(hi, r.hi);
                breaks.push_back(0.5 * (r.lo + r.hi));
            }
        terms.resize(peers.size());
        const OutputRange own = c.output_range(x, s);
        auto integrand = [&](double y) {
            const double ld = c.log_density(y, x, s);
            const double f = std::exp(ld);
            if (!(f > 0.0)) return 0.0;
            for (std::size_t i = 0; i < peers.size(); ++i)
                terms[i] = std::log(d[peers[i]]) + c.log_density(y, peers[i], s);
            return f * (ld - log_sum_exp(terms));
        };
        std::vector<double> inner;
        for (double bp : breaks)
            if (bp > own.lo && bp < own.hi) inner.push_back(bp);
        total += d[x] * integrate_piecewise(integrand, own.lo, own.hi, inner);
    }
    return total;
}

/// Gaussian components sharing one variance per branch: closed-form
/// conditional entropies plus one mixture entropy per branch.
std::optional<double> mi_gaussian_nats(const ChannelModel& c, const InputDesign& d, double s) {
    struct Branch {
        double mass = 0.0;
        double variance = -1.0;
        std::vector<double> weights, means;
    };
    std::map<int, Branch> branches;
    for (std::size_t x = 0; x < d.size(); ++x) {
        if (!(d[x] > 0.0)) continue;
        const auto g = c.gaussian(x, s);
        if (!g) return std::nullopt;
        Branch& br = branches[c.branch(x)];
        if (br.variance < 0.0) br.variance = g->variance;
        if (g->variance != br.variance) return std::nullopt;
        br.mass += d[x];
        br.weights.push_back(d[x]);
        br.means.push_back(g->mean);
    }
    double mi = 0.0;
    for (auto& [tag, br] : branches) {
        for (double& w : br.weights) w /= br.mass;
        const double h_out = mixture_entropy_nats(br.weights, br.means, br.variance);
        mi += -br.mass * std::log(br.mass) + br.mass * (h_out - gaussian_entropy_nats(br.variance));
    }
    return mi;
}

}  // namespace

double binary_entropy(double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw Error("rate", "binary entropy needs t in [0, 1]");
    auto term = [](double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; };
    return term(t) + term(1.0 - t);
}

double gaussian_mixture_entropy(std::span<const double> weights, std::span<const double> means,
                                double variance) {
    if (weights.size() != means.size() || weights.empty())
        throw Error("rate", "mixture weights and means must have equal nonzero length");
    if (!(variance > 0.0)) throw Error("rate", "mixture component variance must be positive");
    check_weights(weights);
    return mixture_entropy_nats(weights, means, variance) / kLn2;
}

double mi_discrete_input(const ChannelModel& channel, const InputDesign& design, double s) {
    if (design.size() != channel.alphabet_size())
        throw Error("rate", "design alphabet does not match the channel");
    double nats;
    if (auto g = mi_gaussian_nats(channel, design, s))
        nats = *g;
    else
        nats = mi_generic_nats(channel, design, s);
    const double bits = nats / kLn2;
    const double cap = std::log2(static_cast<double>(design.size()));
    constexpr double tol = 1e-9;
    if (bits < -tol || bits > cap + tol || !std::isfinite(bits))
        throw Error("rate", "mutual information outside [0, log2|X|]: internal inconsistency");
    return std::clamp(bits, 0.0, cap);
}

WorstCase worst_case_rate(const ChannelModel& channel, const InputDesign& design, double lo,
                          double hi, std::size_t grid) {
    if (!(hi >= lo)) throw Error("rate", "state interval must satisfy lo <= hi");
    if (grid < 2 || hi == lo) return {mi_discrete_input(channel, design, lo), lo};
    auto neg_mi = [&](double s) { return -mi_discrete_input(channel, design, s); };
    const auto best = opt::grid_then_golden_max(neg_mi, lo, hi, grid, 1e-9, true);
    return {-best.value, best.x};
}

RateBreakdown two_band_rate(double t1, double c1, double c2_worst) {
    RateBreakdown r;
    r.t1 = t1;
    r.h2 = binary_entropy(t1);
    r.c1 = c1;
    r.c2_worst = c2_worst;
    r.total = r.h2 + t1 * c1 + (1.0 - t1) * c2_worst;
    return r;
}

RateBreakdown two_band_rate(const TwoBandModel& model, double t1) {
    const InputDesign uniform = model.uniform_band_design();
    const double c1 = mi_discrete_input(model.band1(), uniform, model.prior().lo());
    const double c2 = mi_discrete_input(model.band2(), uniform, model.prior().hi());
    return two_band_rate(t1, c1, c2);
}

}  // namespace isac
