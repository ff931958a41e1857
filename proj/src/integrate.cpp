#include "kvn/integrate.hpp"

#include <boost/numeric/odeint/stepper/runge_kutta_dopri5.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kvn {

namespace {

using state_type = std::vector<double>;

double rms(const state_type& v) {
  double acc = 0.0;
  for (double e : v) acc += e * e;
  return std::sqrt(acc / static_cast<double>(v.size()));
}

double sum_sq(const state_type& v) {
  double acc = 0.0;
  for (double e : v) acc += e * e;
  return acc;
}

bool all_finite(const state_type& v) {
  for (double e : v)
    if (!std::isfinite(e)) return false;
  return true;
}

}  // namespace

Trajectory integrate_adaptive_grid(const RhsFn& f, std::span<const double> x0,
                                   double rel_tol, std::span<const double> t_grid) {
  if (!(rel_tol >= 1e-14 && rel_tol <= 1e-3))
    throw std::invalid_argument("integrate: rel_tol outside [1e-14, 1e-3]");
  if (t_grid.empty()) throw std::invalid_argument("integrate: empty output grid");
  if (t_grid[0] != 0.0) throw std::invalid_argument("integrate: grid must start at 0");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1]))
      throw std::invalid_argument("integrate: grid must be strictly ascending");

  state_type x(x0.begin(), x0.end());
  if (!all_finite(x)) throw std::invalid_argument("integrate: non-finite initial state");

  Trajectory out;
  out.times.assign(t_grid.begin(), t_grid.end());
  out.points.reserve(t_grid.size());
  out.points.push_back(x);

  const double span = t_grid.back();
  if (span == 0.0) return out;

  boost::numeric::odeint::runge_kutta_dopri5<state_type> stepper;
  state_type xerr(x.size()), xnew(x.size()), f0(x.size());

  f(x, f0, 0.0);
  if (!all_finite(f0)) throw std::runtime_error("integrate: rhs not finite at t = 0");
  double dt = 0.01 * (1.0 + rms(x)) / (1.0 + rms(f0));
  dt = std::clamp(dt, span * 1e-10, span / 10.0);

  const double abs_tol = rel_tol;
  double t = 0.0;
  for (std::size_t g = 1; g < t_grid.size(); ++g) {
    const double target = t_grid[g];
    while (t < target) {
      bool clipped = dt >= target - t;
      double h = clipped ? target - t : dt;
      stepper.do_step(f, x, t, xnew, h, xerr);

      double err = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        double scale = abs_tol + rel_tol * std::max(std::abs(x[i]), std::abs(xnew[i]));
        err = std::max(err, std::abs(xerr[i]) / scale);
      }

      if (!all_finite(xnew) || !std::isfinite(err))
        throw std::runtime_error("integrate: state diverged near t = " + std::to_string(t));

      if (err <= 1.0) {
        t += h;
        x.swap(xnew);
        ++out.steps_accepted;
        out.max_local_error = std::max(out.max_local_error, err);
      } else {
        ++out.steps_rejected;
      }
      double grow = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
      double next = h * std::clamp(grow, 0.2, 5.0);
      if (!clipped || err > 1.0) dt = next;
      else dt = std::max(dt, next);

      if (dt < span * 1e-14)
        throw std::runtime_error(
            "integrate: step size underflow (stiffness failure) near t = " +
            std::to_string(t));
      if (out.steps_accepted + out.steps_rejected > 50'000'000)
        throw std::runtime_error("integrate: step budget exhausted");
    }
    out.points.push_back(x);
  }
  return out;
}

Trajectory integrate_reference(const OdeSystem& sys, std::span<const double> x0,
                               double t_end, double rel_tol,
                               std::span<const double> t_grid) {
  if (static_cast<int>(x0.size()) != sys.n_vars())
    throw std::invalid_argument("integrate_reference: x0 dimension mismatch");
  if (!(t_end >= 0.0) || !std::isfinite(t_end))
    throw std::invalid_argument("integrate_reference: bad t_end");

  std::vector<double> grid;
  if (t_grid.empty()) {
    grid.push_back(0.0);
    if (t_end > 0.0) grid.push_back(t_end);
  } else {
    grid.assign(t_grid.begin(), t_grid.end());
    if (grid.back() > t_end)
      throw std::invalid_argument("integrate_reference: grid extends past t_end");
  }

  RhsFn f = [&sys](const state_type& x, state_type& dxdt, double) {
    dxdt = rhs(sys, x);
  };
  Trajectory traj = integrate_adaptive_grid(f, x0, rel_tol, grid);

  double w0 = sum_sq(traj.points.front());
  double scale = std::max(1.0, w0);
  for (const auto& p : traj.points)
    traj.conserved_drift = std::max(traj.conserved_drift, std::abs(sum_sq(p) - w0) / scale);
  return traj;
}

}  // namespace kvn
