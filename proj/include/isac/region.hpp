#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "isac/model.hpp"

namespace isac {

struct Sweep {
    double t_min = 0.01;
    double t_max = 0.99;
    std::size_t steps = 99;
};

struct RegionPoint {
    double t1 = 0.0;
    double rate_bits = 0.0;
    double alpha_atbcrb = 0.0;
    double alpha_bcrb = 0.0;

    double t2() const { return 1.0 - t1; }
};

struct RegionCurve {
    struct Metadata {
        double a = 0.0, b = 0.0, power = 0.0, sigma2 = 0.0;
        std::string modulation;
        Sweep sweep;
        double c1 = 0.0, c2_worst = 0.0;
    };
    std::vector<RegionPoint> points;
    Metadata metadata;
};

struct OperatingPoints {
    std::size_t communication;  // index of the rate-maximising point
    std::size_t estimation;     // index of the alpha-minimising point
};

std::vector<double> sweep_grid(const Sweep& sweep);

/// Trace (rate, alpha_atbcrb, alpha_bcrb) over the band-1 fraction t1.
/// `workers` > 1 evaluates grid points concurrently; output order is by t1.
RegionCurve sweep_tradeoff(const TwoBandModel& model, const Sweep& sweep, int workers = 1);

OperatingPoints operating_points(const RegionCurve& curve);

/// Region points for a user-supplied list of input pmfs over a general
/// channel pair: compound rate on `comm`, decay constants on `sense`.
struct DesignPoint {
    double rate_bits;
    double alpha_atbcrb;
    double alpha_bcrb;
};
std::vector<DesignPoint> sweep_designs(const ChannelModel& comm, const ChannelModel& sense,
                                       const StatePrior& prior,
                                       const std::vector<InputDesign>& designs);

}  // namespace isac
