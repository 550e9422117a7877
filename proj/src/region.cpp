#include "isac/region.hpp"

#include "isac/bounds.hpp"
#include "isac/kernels.hpp"
#include "isac/rate.hpp"

namespace isac {

std::vector<double> sweep_grid(const Sweep& sweep) {
    if (!(sweep.t_min > 0.0 && sweep.t_min < sweep.t_max && sweep.t_max < 1.0))
        throw Error("region", "sweep needs 0 < t_min < t_max < 1");
    if (sweep.steps < 2) throw Error("region", "sweep needs at least 2 steps");
    std::vector<double> t(sweep.steps);
    const double span = sweep.t_max - sweep.t_min;
    for (std::size_t i = 0; i < sweep.steps; ++i)
        t[i] = sweep.t_min + span * static_cast<double>(i) / static_cast<double>(sweep.steps - 1);
    return t;
}

RegionCurve sweep_tradeoff(const TwoBandModel& model, const Sweep& sweep, int workers) {
    const auto grid = sweep_grid(sweep);
    const RateBreakdown ends = two_band_rate(model, 0.0);

    RegionCurve curve;
    curve.points = workers > 1
                       ? kernels::region_points_parallel(model, grid, ends.c1, ends.c2_worst, workers)
                       : kernels::region_points_serial(model, grid, ends.c1, ends.c2_worst);
    auto& m = curve.metadata;
    m.a = model.prior().a();
    m.b = model.prior().b();
    m.power = model.constellation().power();
    m.sigma2 = model.sigma2();
    m.modulation = model.constellation().name();
    m.sweep = sweep;
    m.c1 = ends.c1;
    m.c2_worst = ends.c2_worst;
    return curve;
}

OperatingPoints operating_points(const RegionCurve& curve) {
    if (curve.points.empty()) throw Error("region", "operating points of an empty curve");
    const auto& p = curve.points;
    // Ties: smaller alpha, then smaller t1.
    auto tie_better = [&](std::size_t i, std::size_t j) {
        if (p[i].alpha_atbcrb != p[j].alpha_atbcrb) return p[i].alpha_atbcrb < p[j].alpha_atbcrb;
        return p[i].t1 < p[j].t1;
    };
    OperatingPoints op{0, 0};
    for (std::size_t i = 1; i < p.size(); ++i) {
        const auto& c = p[op.communication];
        if (p[i].rate_bits > c.rate_bits || (p[i].rate_bits == c.rate_bits && tie_better(i, op.communication)))
            op.communication = i;
        const auto& e = p[op.estimation];
        if (p[i].alpha_atbcrb < e.alpha_atbcrb ||
            (p[i].alpha_atbcrb == e.alpha_atbcrb && p[i].t1 < e.t1))
            op.estimation = i;
    }
    return op;
}

std::vector<DesignPoint> sweep_designs(const ChannelModel& comm, const ChannelModel& sense,
                                       const StatePrior& prior,
                                       const std::vector<InputDesign>& designs) {
    std::vector<DesignPoint> out;
    out.reserve(designs.size());
    for (const auto& d : designs) {
        const FisherProfile profile(sense, d, prior);
        out.push_back({worst_case_rate(comm, d, prior.lo(), prior.hi()).rate_bits,
                       alpha_atbcrb(profile), alpha_bcrb(profile)});
    }
    return out;
}

}  // namespace isac
