#pragma once

#include <cmath>
#include <cstddef>

namespace isac::opt {

struct Extremum {
    double x;
    double value;
};

/// Golden-section search for a maximum of f on [a, b] to absolute tolerance tol.
template <class F>
Extremum golden_max(const F& f, double a, double b, double tol) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return fc >= fd ? Extremum{c, fc} : Extremum{d, fd};
}

/// Maximum of f on [lo, hi]: scan `nodes` grid points, then golden-section
/// refine between the neighbours of the best node. With `include_endpoints`
/// the grid spans the closed interval, otherwise it uses cell midpoints and
/// the refinement bracket is kept at least `guard` away from lo and hi.
template <class F>
Extremum grid_then_golden_max(const F& f, double lo, double hi, std::size_t nodes, double tol,
                              bool include_endpoints, double guard = 0.0) {
    const double w = hi - lo;
    auto node = [&](std::size_t k) {
        if (include_endpoints) return lo + w * static_cast<double>(k) / static_cast<double>(nodes - 1);
        return lo + w * (static_cast<double>(k) + 0.5) / static_cast<double>(nodes);
    };
    std::size_t best = 0;
    double best_val = -INFINITY;
    for (std::size_t k = 0; k < nodes; ++k) {
        const double v = f(node(k));
        if (v > best_val) {
            best_val = v;
            best = k;
        }
    }
    const double step = include_endpoints ? w / static_cast<double>(nodes - 1)
                                          : w / static_cast<double>(nodes);
    const double a = std::max(lo + guard, node(best) - step);
    const double b = std::min(hi - guard, node(best) + step);
    Extremum grid{node(best), best_val};
    if (!(b > a)) return grid;
    const Extremum refined = golden_max(f, a, b, tol);
    return refined.value > grid.value ? refined : grid;
}

}  // namespace isac::opt
