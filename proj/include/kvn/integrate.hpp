#pragma once

#include <functional>
#include <span>
#include <vector>

#include "kvn/ode_system.hpp"

namespace kvn {

struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> points;
  std::size_t steps_accepted = 0;
  std::size_t steps_rejected = 0;
  double max_local_error = 0.0;   // largest accepted normalized error estimate
  double conserved_drift = 0.0;   // max relative drift of sum_i x_i^2
};

using RhsFn = std::function<void(const std::vector<double>&, std::vector<double>&, double)>;

// Adaptive embedded RK 5(4) over an explicit output grid. The grid must be
// ascending and start at 0; every grid point is hit exactly. rel_tol is
// accepted in [1e-14, 1e-3].
Trajectory integrate_adaptive_grid(const RhsFn& f, std::span<const double> x0,
                                   double rel_tol, std::span<const double> t_grid);

// Same scheme driven by a validated polynomial system. With an empty grid
// the samples are {0, t_end} (just {0} when t_end == 0).
Trajectory integrate_reference(const OdeSystem& sys, std::span<const double> x0,
                               double t_end, double rel_tol,
                               std::span<const double> t_grid = {});

}  // namespace kvn
