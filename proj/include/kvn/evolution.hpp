#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kvn/fock_basis.hpp"
#include "kvn/hamiltonian.hpp"
#include "kvn/integrate.hpp"
#include "kvn/ode_system.hpp"

namespace kvn {

struct EvolveOptions {
  double tol = 1e-10;         // accepted in [1e-13, 1e-6]
  int krylov_dim = 30;
  std::size_t max_substeps = 200'000;
};

struct EvolutionResult {
  std::vector<double> times;
  std::vector<StateVector> states;
  std::vector<double> norms;
  std::size_t substeps = 0;
  int max_krylov_dim = 0;
  double max_norm_drift = 0.0;
  // largest |Im| across reported amplitudes; meaningful when the initial
  // state was real, which the purely imaginary generator must preserve
  double max_imag_amplitude = 0.0;
  bool initial_state_real = false;
};

// Krylov propagation of exp(-iHt) applied to psi0, reported exactly on the
// given ascending time grid. Substeps are chosen adaptively against tol.
EvolutionResult evolve(const SparseHermitianMatrix& h, const StateVector& psi0,
                       std::span<const double> t_grid, const EvolveOptions& opts = {});

struct OutputSeries {
  std::vector<double> values;
  double max_imag_residual = 0.0;
};

// q(t) = sqrt(l_normalization) * <c|psi(t)>. The imaginary residual of the
// bracket is reported and must stay below 1e-9.
OutputSeries output_series(const EvolutionResult& evo, const StateVector& c_state,
                           double l_normalization);

// g(t) = sum_n c_n prod_i p_{n_i}(x_i(t)) along a reference trajectory;
// vacuum Hermite factors are included for every variable.
std::vector<double> classical_observable(const Trajectory& traj,
                                         const ObservableSpec& obs);

struct ComparisonTable {
  std::vector<double> times;
  std::vector<double> quantum;
  std::vector<double> classical;
  std::vector<double> abs_error;
  std::vector<double> norm_drift;
  std::vector<double> l_drift;

  double max_abs_error = 0.0;
  double max_norm_drift = 0.0;
  double max_imag_residual = 0.0;
  double normalization = 0.0;  // L at t = 0
};

// Full pipeline on one system: encode x0, build the truncated generator,
// evolve, and tabulate quantum vs reference observable values on a uniform
// grid of `steps` intervals over [0, t_final].
ComparisonTable compare(const OdeSystem& sys, std::span<const double> x0,
                        const ObservableSpec& obs, int m, double t_final, int steps,
                        const EvolveOptions& opts = {});

struct SweepRow {
  int m = 0;
  double max_error = 0.0;
  std::uint64_t dim = 0;
  double build_seconds = 0.0;
  double evolve_seconds = 0.0;
};

// compare() at several truncation levels; rows come back in input order and
// levels run concurrently (jobs <= 0 means hardware concurrency).
std::vector<SweepRow> convergence_sweep(const OdeSystem& sys, std::span<const double> x0,
                                        const ObservableSpec& obs, double t_final,
                                        std::span<const int> m_list,
                                        const EvolveOptions& opts = {}, int steps = 40,
                                        int jobs = 0);

}  // namespace kvn
