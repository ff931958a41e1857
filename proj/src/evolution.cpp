#include "kvn/evolution.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <future>
#include <thread>
#include <stdexcept>

#include "kvn/hermite.hpp"
#include "krylov_internal.hpp"

namespace kvn {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct KrylovStep {
  Eigen::MatrixXcd V;
  Eigen::MatrixXd ritz_vectors;
  Eigen::VectorXd ritz_values;
  Eigen::VectorXd first_row_overlap;  // U^T e_1
  double beta = 0.0;                  // norm of the input state
  double next_beta = 0.0;
  int k = 0;
};

KrylovStep decompose(const SparseHermitianMatrix& h, const Eigen::VectorXcd& psi,
                     int max_k, double breakdown_tol) {
  internal::ApplyFn apply = [&h](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) {
    y.resize(x.size());
    h.apply({x.data(), static_cast<std::size_t>(x.size())},
            {y.data(), static_cast<std::size_t>(y.size())});
  };
  KrylovStep step;
  step.beta = psi.norm();
  auto dec = internal::lanczos(apply, psi, max_k, breakdown_tol);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(dec.alpha, dec.beta);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("evolve: tridiagonal eigensolve failed");
  step.V = std::move(dec.V);
  step.ritz_vectors = es.eigenvectors();
  step.ritz_values = es.eigenvalues();
  step.first_row_overlap = step.ritz_vectors.row(0).transpose();
  step.next_beta = dec.next_beta;
  step.k = dec.k;
  return step;
}

// y(tau) = exp(-i T tau) e_1 expressed through the Ritz decomposition
Eigen::VectorXcd subspace_propagate(const KrylovStep& s, double tau) {
  Eigen::VectorXcd phases(s.k);
  for (int i = 0; i < s.k; ++i)
    phases(i) = std::polar(1.0, -s.ritz_values(i) * tau) * s.first_row_overlap(i);
  return s.ritz_vectors.cast<std::complex<double>>() * phases;
}

}  // namespace

EvolutionResult evolve(const SparseHermitianMatrix& h, const StateVector& psi0,
                       std::span<const double> t_grid, const EvolveOptions& opts) {
  if (!(opts.tol >= 1e-13 && opts.tol <= 1e-6))
    throw std::invalid_argument("evolve: tol outside [1e-13, 1e-6]");
  if (opts.krylov_dim < 2)
    throw std::invalid_argument("evolve: krylov_dim must be >= 2");
  if (psi0.amplitudes.size() != h.dim())
    throw std::invalid_argument("evolve: state dimension mismatch");
  if (t_grid.empty()) throw std::invalid_argument("evolve: empty time grid");
  if (!(t_grid[0] >= 0.0))
    throw std::invalid_argument("evolve: times must be nonnegative");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1]))
      throw std::invalid_argument("evolve: time grid must be strictly ascending");

  const auto dim = static_cast<Eigen::Index>(h.dim());
  Eigen::VectorXcd psi(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    auto a = psi0.amplitudes[static_cast<std::size_t>(i)];
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
      throw std::invalid_argument("evolve: non-finite initial amplitude");
    psi(i) = a;
  }

  EvolutionResult out;
  out.times.assign(t_grid.begin(), t_grid.end());
  out.initial_state_real = true;
  for (Eigen::Index i = 0; i < dim; ++i)
    if (psi(i).imag() != 0.0) out.initial_state_real = false;

  const double norm0 = psi.norm();
  const double span = t_grid.back();
  const double scale = std::max(1.0, h.inf_norm());
  const double breakdown_tol = 1e-14 * scale;

  auto record = [&](const Eigen::VectorXcd& v) {
    StateVector sv;
    sv.amplitudes.assign(v.data(), v.data() + v.size());
    out.norms.push_back(v.norm());
    out.max_norm_drift = std::max(out.max_norm_drift, std::abs(v.norm() - norm0));
    if (out.initial_state_real)
      for (Eigen::Index i = 0; i < v.size(); ++i)
        out.max_imag_amplitude =
            std::max(out.max_imag_amplitude, std::abs(v(i).imag()));
    out.states.push_back(std::move(sv));
  };

  double t = 0.0;
  for (double target : t_grid) {
    while (t < target) {
      if (norm0 == 0.0) break;  // the zero state stays zero
      double remaining = target - t;
      KrylovStep step = decompose(h, psi, opts.krylov_dim, breakdown_tol);
      out.max_krylov_dim = std::max(out.max_krylov_dim, step.k);

      double tau = remaining;
      bool accepted = false;
      while (!accepted) {
        Eigen::VectorXcd y = subspace_propagate(step, tau);
        double defect = step.beta * step.next_beta * std::abs(y(step.k - 1)) * tau;
        double budget = opts.tol * (span > 0.0 ? tau / span : 1.0);
        if (defect <= budget || step.next_beta <= breakdown_tol) {
          psi = step.V * (step.beta * y);
          t += tau;
          accepted = true;
        } else {
          tau *= 0.5;
          if (tau < remaining * 1e-12)
            throw std::runtime_error(
                "evolve: substep underflow; achieved residual " +
                std::to_string(defect));
        }
        if (++out.substeps > opts.max_substeps)
          throw std::runtime_error(
              "evolve: exceeded max substeps; achieved residual " +
              std::to_string(defect));
      }
      if (std::abs(t - target) < 1e-14 * std::max(1.0, std::abs(target))) t = target;
    }
    record(psi);
  }
  return out;
}

OutputSeries output_series(const EvolutionResult& evo, const StateVector& c_state,
                           double l_normalization) {
  if (!(l_normalization > 0.0) || !std::isfinite(l_normalization))
    throw std::invalid_argument("output_series: normalization must be positive");
  const double root_l = std::sqrt(l_normalization);
  OutputSeries out;
  out.values.reserve(evo.states.size());
  for (const auto& state : evo.states) {
    if (state.amplitudes.size() != c_state.amplitudes.size())
      throw std::invalid_argument("output_series: dimension mismatch");
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < state.amplitudes.size(); ++i)
      acc += std::conj(c_state.amplitudes[i]) * state.amplitudes[i];
    acc *= root_l;
    out.values.push_back(acc.real());
    out.max_imag_residual = std::max(out.max_imag_residual, std::abs(acc.imag()));
  }
  if (out.max_imag_residual >= 1e-9)
    throw std::runtime_error("output_series: imaginary residual " +
                             std::to_string(out.max_imag_residual) +
                             " breaches 1e-9");
  return out;
}

std::vector<double> classical_observable(const Trajectory& traj,
                                         const ObservableSpec& obs) {
  if (traj.points.empty()) throw std::invalid_argument("classical_observable: empty trajectory");
  const int n = static_cast<int>(traj.points.front().size());
  check_observable(obs, n);

  std::vector<double> values;
  values.reserve(traj.points.size());
  std::vector<std::vector<double>> herm(static_cast<std::size_t>(n));
  for (const auto& x : traj.points) {
    for (int i = 0; i < n; ++i)
      herm[static_cast<std::size_t>(i)] = hermite_values(obs.degree_cap, x[static_cast<std::size_t>(i)]);
    double g = 0.0;
    for (const auto& term : obs.terms) {
      double prod = term.coeff;
      auto it = term.occupations.begin();
      for (int i = 0; i < n; ++i) {
        int q = 0;
        if (it != term.occupations.end() && it->first == i) {
          q = it->second;
          ++it;
        }
        prod *= herm[static_cast<std::size_t>(i)][static_cast<std::size_t>(q)];
      }
      g += prod;
    }
    values.push_back(g);
  }
  return values;
}

ComparisonTable compare(const OdeSystem& sys, std::span<const double> x0,
                        const ObservableSpec& obs, int m, double t_final, int steps,
                        const EvolveOptions& opts) {
  auto report = validate_system(sys);
  if (!report.ok)
    throw std::invalid_argument("compare: system fails validation (" +
                                report.violations.front().rule + ": " +
                                report.violations.front().detail + ")");
  if (steps < 1) throw std::invalid_argument("compare: steps must be >= 1");
  if (!(t_final >= 0.0) || !std::isfinite(t_final))
    throw std::invalid_argument("compare: bad final time");

  std::vector<double> grid;
  if (t_final == 0.0) {
    grid.push_back(0.0);
  } else {
    grid.reserve(static_cast<std::size_t>(steps) + 1);
    for (int i = 0; i <= steps; ++i)
      grid.push_back(t_final * static_cast<double>(i) / steps);
  }

  FockBasis basis(sys.n_vars(), m);
  SparseHermitianMatrix h = build_hamiltonian(sys, basis);
  auto [psi0, l0] = encode_position(basis, x0);
  StateVector c_state = encode_observable(basis, obs);

  EvolutionResult evo = evolve(h, psi0, grid, opts);
  OutputSeries q = output_series(evo, c_state, l0);

  double ref_tol = std::clamp(opts.tol, 1e-14, 1e-3);
  Trajectory traj = integrate_reference(sys, x0, t_final, ref_tol, grid);
  std::vector<double> g = classical_observable(traj, obs);

  // occupations cached once for the L(x(t)) diagnostic
  std::vector<std::vector<int>> occs(basis.dimension());
  for (std::uint64_t i = 0; i < basis.dimension(); ++i)
    occs[i] = basis.occupations(basis.unrank(i));

  ComparisonTable table;
  table.normalization = l0;
  table.max_norm_drift = evo.max_norm_drift;
  table.max_imag_residual = std::max(q.max_imag_residual, evo.max_imag_amplitude);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    table.times.push_back(grid[i]);
    table.quantum.push_back(q.values[i]);
    table.classical.push_back(g[i]);
    double err = std::abs(q.values[i] - g[i]);
    table.abs_error.push_back(err);
    table.max_abs_error = std::max(table.max_abs_error, err);
    table.norm_drift.push_back(std::abs(evo.norms[i] - evo.norms.front()));

    const auto& x = traj.points[i];
    std::vector<std::vector<double>> herm(x.size());
    for (std::size_t v = 0; v < x.size(); ++v) herm[v] = hermite_values(m, x[v]);
    double l_t = 0.0;
    for (const auto& occ : occs) {
      double amp = 1.0;
      for (std::size_t v = 0; v < x.size(); ++v)
        amp *= herm[v][static_cast<std::size_t>(occ[v])];
      l_t += amp * amp;
    }
    table.l_drift.push_back((l_t - l0) / l0);
  }
  return table;
}

std::vector<SweepRow> convergence_sweep(const OdeSystem& sys, std::span<const double> x0,
                                        const ObservableSpec& obs, double t_final,
                                        std::span<const int> m_list,
                                        const EvolveOptions& opts, int steps, int jobs) {
  if (m_list.empty()) throw std::invalid_argument("sweep: empty m list");
  auto report = validate_system(sys);
  if (!report.ok) throw std::invalid_argument("sweep: system fails validation");

  std::vector<double> grid;
  if (t_final == 0.0) {
    grid.push_back(0.0);
  } else {
    for (int i = 0; i <= steps; ++i)
      grid.push_back(t_final * static_cast<double>(i) / steps);
  }
  double ref_tol = std::clamp(opts.tol, 1e-14, 1e-3);
  Trajectory traj = integrate_reference(sys, x0, t_final, ref_tol, grid);
  std::vector<double> g = classical_observable(traj, obs);

  auto run_level = [&](int m) {
    SweepRow row;
    row.m = m;
    auto t_build = Clock::now();
    FockBasis basis(sys.n_vars(), m);
    SparseHermitianMatrix h = build_hamiltonian(sys, basis);
    auto [psi0, l0] = encode_position(basis, x0);
    StateVector c_state = encode_observable(basis, obs);
    row.dim = basis.dimension();
    row.build_seconds = seconds_since(t_build);

    auto t_evolve = Clock::now();
    EvolutionResult evo = evolve(h, psi0, grid, opts);
    OutputSeries q = output_series(evo, c_state, l0);
    row.evolve_seconds = seconds_since(t_evolve);

    for (std::size_t i = 0; i < g.size(); ++i)
      row.max_error = std::max(row.max_error, std::abs(q.values[i] - g[i]));
    return row;
  };

  if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
  if (jobs < 1) jobs = 1;

  std::vector<SweepRow> rows(m_list.size());
  std::size_t next = 0;
  while (next < m_list.size()) {
    std::size_t batch = std::min<std::size_t>(static_cast<std::size_t>(jobs),
                                              m_list.size() - next);
    std::vector<std::future<SweepRow>> futs;
    futs.reserve(batch);
    for (std::size_t i = 0; i < batch; ++i)
      futs.push_back(std::async(std::launch::async, run_level, m_list[next + i]));
    for (std::size_t i = 0; i < batch; ++i) rows[next + i] = futs[i].get();
    next += batch;
  }
  return rows;
}

}  // namespace kvn
