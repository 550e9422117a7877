#include "isac/fisher.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "isac/quadrature.hpp"

namespace isac {

namespace {

double fd_step(double s) { return std::max(1e-5, 1e-4 * (1.0 + std::abs(s))); }

double fd_neg_curvature(const ChannelModel& c, double y, std::size_t x, double s) {
    const double h = fd_step(s);
    const double lp = c.log_density(y, x, s + h);
    const double l0 = c.log_density(y, x, s);
    const double lm = c.log_density(y, x, s - h);
    return -(lp - 2.0 * l0 + lm) / (h * h);
}

template <class Integrand>
double integrate_output(const ChannelModel& c, std::size_t x, double s, const Integrand& g,
                        const quad::Options& opt) {
    const OutputRange r = c.output_range(x, s);
    try {
        return quad::integrate(
            [&](double y) {
                const double d = c.density(y, x, s);
                return d > 0.0 ? d * g(y) : 0.0;
            },
            r.lo, r.hi, opt);
    } catch (const Error& e) {
        throw Error("fisher", std::string("Fisher integral diverged: ") + e.what());
    }
}

}  // namespace

double per_symbol_fisher(const ChannelModel& channel, std::size_t x, double s,
                         FisherMethod method) {
    if (x >= channel.alphabet_size()) throw Error("fisher", "input label outside the alphabet");
    if (method == FisherMethod::automatic) {
        if (auto f = channel.fisher(x, s)) return f->value;
    }

    const bool has_curv = channel.neg_curvature(0.0, x, s).has_value();
    if (method == FisherMethod::finite_difference ||
        (method == FisherMethod::automatic && !has_curv))
        return per_symbol_fisher_score_form(channel, x, s);

    double value = 0.0;
    if (has_curv) {
        value = integrate_output(
            channel, x, s, [&](double y) { return *channel.neg_curvature(y, x, s); },
            {1e-11, 1e-14, 4000});
    } else {
        // Second differences carry roundoff near 1e-9 relative.
        value = integrate_output(
            channel, x, s, [&](double y) { return fd_neg_curvature(channel, y, x, s); },
            {1e-8, 1e-12, 4000});
    }
    if (!std::isfinite(value)) throw Error("fisher", "Fisher integral diverged");
    return std::max(0.0, value);
}

double per_symbol_fisher_score_form(const ChannelModel& channel, std::size_t x, double s) {
    const double h = fd_step(s);
    const double value = integrate_output(
        channel, x, s,
        [&](double y) {
            const double sc =
                (channel.log_density(y, x, s + h) - channel.log_density(y, x, s - h)) / (2.0 * h);
            return sc * sc;
        },
        {1e-11, 1e-14, 4000});
    if (!std::isfinite(value)) throw Error("fisher", "Fisher integral diverged");
    return value;
}

double mixture_fisher(const ChannelModel& channel, const InputDesign& design, double s,
                      FisherMethod method) {
    if (design.size() != channel.alphabet_size())
        throw Error("fisher", "design alphabet does not match the channel");
    double sum = 0.0;
    for (std::size_t x = 0; x < design.size(); ++x)
        if (design[x] > 0.0) sum += design[x] * per_symbol_fisher(channel, x, s, method);
    return sum;
}

double codeword_fisher(const ChannelModel& channel, std::span<const std::size_t> codeword,
                       double s, FisherMethod method) {
    if (codeword.empty()) throw Error("fisher", "codeword must be nonempty");
    std::vector<std::size_t> counts(channel.alphabet_size(), 0);
    for (std::size_t x : codeword) {
        if (x >= counts.size()) throw Error("fisher", "input label outside the alphabet");
        ++counts[x];
    }
    double sum = 0.0;
    for (std::size_t x = 0; x < counts.size(); ++x)
        if (counts[x] > 0)
            sum += static_cast<double>(counts[x]) * per_symbol_fisher(channel, x, s, method);
    return sum;
}

double prior_fisher_term(const StatePrior& prior, double s) {
    const double sc = prior.score(s);
    return sc * sc;
}

// ---------------------------------------------------------------------------

struct FisherProfile::Cache {
    struct Key {
        std::size_t x;
        std::uint64_t s_bits;
        bool operator==(const Key&) const = default;
    };
    struct Hash {
        std::size_t operator()(const Key& k) const {
            return std::hash<std::uint64_t>{}(k.s_bits * 0x9e3779b97f4a7c15ULL ^ k.x);
        }
    };
    std::mutex mutex;
    std::unordered_map<Key, double, Hash> table;
};

FisherProfile::FisherProfile(const ChannelModel& channel, InputDesign design, StatePrior prior,
                             FisherMethod method)
    : channel_(&channel),
      design_(std::move(design)),
      prior_(std::move(prior)),
      method_(method),
      cache_(std::make_shared<Cache>()) {
    if (design_.size() != channel.alphabet_size())
        throw Error("fisher", "design alphabet does not match the channel");
}

double FisherProfile::per_symbol(std::size_t x, double s) const {
    if (method_ == FisherMethod::automatic) {
        if (auto f = channel_->fisher(x, s)) return f->value;
    }
    const Cache::Key key{x, std::bit_cast<std::uint64_t>(s)};
    {
        std::lock_guard lock(cache_->mutex);
        if (auto it = cache_->table.find(key); it != cache_->table.end()) return it->second;
    }
    const double v = per_symbol_fisher(*channel_, x, s, method_);
    std::lock_guard lock(cache_->mutex);
    cache_->table.emplace(key, v);
    return v;
}

double FisherProfile::mixture(double s) const {
    double sum = 0.0;
    for (std::size_t x = 0; x < design_.size(); ++x)
        if (design_[x] > 0.0) sum += design_[x] * per_symbol(x, s);
    return sum;
}

std::optional<FisherDerivs> FisherProfile::mixture_derivs(double s) const {
    if (method_ != FisherMethod::automatic) return std::nullopt;
    FisherDerivs out;
    for (std::size_t x = 0; x < design_.size(); ++x) {
        if (!(design_[x] > 0.0)) continue;
        auto f = channel_->fisher(x, s);
        if (!f) return std::nullopt;
        out.value += design_[x] * f->value;
        out.d1 += design_[x] * f->d1;
        out.d2 += design_[x] * f->d2;
    }
    return out;
}

}  // namespace isac
