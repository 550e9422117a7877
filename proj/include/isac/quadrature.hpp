#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "isac/error.hpp"

namespace isac::quad {

struct Options {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_intervals = 4000;
};

template <std::size_t N>
struct Result {
    std::array<double, N> value{};
    std::array<double, N> error{};
    int intervals = 0;
};

namespace detail {

inline std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

// 15-point Kronrod abscissae (descending, last is the centre) and weights,
// with the embedded 7-point Gauss weights for odd-indexed nodes.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <std::size_t N>
struct Panel {
    double lo, hi;
    std::array<double, N> value;
    std::array<double, N> error;
};

template <std::size_t N, class F>
Panel<N> gk15(const F& f, double lo, double hi) {
    const double centre = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    std::array<double, N> k{}, g{};

    const std::array<double, N> fc = f(centre);
    for (std::size_t c = 0; c < N; ++c) {
        k[c] = kWgk[7] * fc[c];
        g[c] = kWg[3] * fc[c];
    }
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const std::array<double, N> f1 = f(centre - dx);
        const std::array<double, N> f2 = f(centre + dx);
        for (std::size_t c = 0; c < N; ++c) {
            const double sum = f1[c] + f2[c];
            k[c] += kWgk[j] * sum;
            if (j % 2 == 1) g[c] += kWg[j / 2] * sum;
        }
    }
    Panel<N> p{lo, hi, {}, {}};
    for (std::size_t c = 0; c < N; ++c) {
        p.value[c] = k[c] * half;
        p.error[c] = std::abs((k[c] - g[c]) * half);
    }
    return p;
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) integration of a vector-valued
/// integrand over the open interval (lo, hi). Endpoints are never evaluated.
/// All components share one set of panels; the panel with the largest
/// tolerance-scaled error is bisected until every component converges.
/// Throws isac::Error("quadrature", ...) with the achieved error otherwise.
template <std::size_t N, class F>
Result<N> integrate_n(const F& f, double lo, double hi, const Options& opt = {}) {
    using Panel = detail::Panel<N>;
    Result<N> out;
    if (!(hi > lo)) return out;

    auto evaluate = [&](double a, double b) {
        Panel p = detail::gk15<N>(f, a, b);
        for (std::size_t c = 0; c < N; ++c)
            if (!std::isfinite(p.value[c]) || !std::isfinite(p.error[c]))
                throw Error("quadrature", "integrand produced a non-finite value on (" +
                                              std::to_string(a) + ", " + std::to_string(b) + ")");
        return p;
    };

    std::vector<Panel> panels{evaluate(lo, hi)};
    for (;;) {
        // Panels stay sorted by position, so sums are independent of split order.
        std::array<double, N> total{}, err{};
        for (const auto& p : panels)
            for (std::size_t c = 0; c < N; ++c) {
                total[c] += p.value[c];
                err[c] += p.error[c];
            }
        std::array<double, N> tol{};
        double worst_ratio = 0.0;
        std::size_t worst_c = 0;
        for (std::size_t c = 0; c < N; ++c) {
            tol[c] = std::max(opt.abs_tol, opt.rel_tol * std::abs(total[c]));
            if (err[c] / tol[c] > worst_ratio) {
                worst_ratio = err[c] / tol[c];
                worst_c = c;
            }
        }
        if (worst_ratio <= 1.0) {
            out.value = total;
            out.error = err;
            out.intervals = static_cast<int>(panels.size());
            return out;
        }
        if (static_cast<int>(panels.size()) >= opt.max_intervals)
            throw Error("quadrature", "adaptive quadrature did not converge: achieved error " +
                                          detail::sci(err[worst_c]) + " against tolerance " +
                                          detail::sci(tol[worst_c]));

        std::size_t split = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < panels.size(); ++i) {
            double pr = 0.0;
            for (std::size_t c = 0; c < N; ++c) pr = std::max(pr, panels[i].error[c] / tol[c]);
            if (pr > best) {
                best = pr;
                split = i;
            }
        }
        const Panel worst = panels[split];
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi))
            throw Error("quadrature", "adaptive quadrature exhausted floating-point resolution near " +
                                          std::to_string(worst.lo));
        panels[split] = evaluate(worst.lo, mid);
        panels.insert(panels.begin() + static_cast<std::ptrdiff_t>(split) + 1,
                      evaluate(mid, worst.hi));
    }
}

/// Scalar convenience wrapper around integrate_n.
template <class F>
double integrate(const F& f, double lo, double hi, const Options& opt = {}) {
    auto wrapped = [&](double x) { return std::array<double, 1>{f(x)}; };
    return integrate_n<1>(wrapped, lo, hi, opt).value[0];
}

}  // namespace isac::quad
