#pragma once

#include <cstddef>
#include <vector>

#include "isac/montecarlo.hpp"
#include "isac/region.hpp"

// Data-parallel kernels. Each has a serial reference used by tests and the
// benchmark; the OpenMP versions must return bit-identical results.
namespace isac::kernels {

std::vector<TrialOutcome> trials_serial(const TrialSetup& setup, std::size_t trials);
std::vector<TrialOutcome> trials_parallel(const TrialSetup& setup, std::size_t trials,
                                          int workers);

std::vector<RegionPoint> region_points_serial(const TwoBandModel& model,
                                              const std::vector<double>& t1_grid, double c1,
                                              double c2_worst);
std::vector<RegionPoint> region_points_parallel(const TwoBandModel& model,
                                                const std::vector<double>& t1_grid, double c1,
                                                double c2_worst, int workers);

}  // namespace isac::kernels
