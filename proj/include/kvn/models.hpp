#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kvn/fock_basis.hpp"
#include "kvn/integrate.hpp"
#include "kvn/ode_system.hpp"

namespace kvn {

// ---- coupled harmonic oscillators ----------------------------------------

struct HarmonicSpec {
  std::vector<double> masses;               // N entries, positive
  std::vector<std::vector<double>> kappa;   // symmetric, kappa_jj > 0, kappa_jk >= 0
};

// How one embedded variable is built from physical coordinates:
//   value = scale * base expression named by kind.
struct VariableRole {
  enum class Kind {
    kPosition,        // scale * x_j
    kPairDifference,  // scale * (x_j - x_k)
    kSquare,          // scale * x_j^2
    kPairSquare,      // scale * (x_j - x_k)^2
    kVelocity,        // scale * dx_j/dt
    kCos,             // cos(theta_j)
    kSin,             // sin(theta_j)
    kCosShift,        // cos(theta_j + pi)
    kSinShift,        // sin(theta_j + pi)
  };
  Kind kind;
  int site_j = -1;
  int site_k = -1;
  double scale = 1.0;
  std::string name;
};

struct TransformDescriptor {
  std::vector<VariableRole> variables;

  // forward map (x, xdot) -> embedded point
  std::vector<double> embed(std::span<const double> x,
                            std::span<const double> xdot) const;
  // inverse map reading the position and velocity variables back out
  std::pair<std::vector<double>, std::vector<double>> unembed(
      std::span<const double> point) const;

  // first-degree Hermite observable on one embedded variable
  ObservableSpec linear_observable(int variable) const;
};

std::pair<OdeSystem, TransformDescriptor> make_harmonic(const HarmonicSpec& spec);

// ---- Duffing lattice -------------------------------------------------------

struct DuffingSpec {
  std::vector<double> masses;   // positive
  std::vector<double> kappa;    // on-site linear stiffness, positive
  std::vector<double> lambda;   // on-site cubic stiffness, positive
  struct Edge {
    int j = 0;
    int k = 0;       // 0-based sites, j < k
    double kappa = 0.0;
    double lambda = 0.0;
  };
  std::vector<Edge> edges;
};

std::pair<OdeSystem, TransformDescriptor> make_duffing(const DuffingSpec& spec);

// ---- Kuramoto oscillators --------------------------------------------------

struct KuramotoSpec {
  std::vector<double> omega;
  double coupling = 0.0;                  // K
  std::vector<std::vector<int>> neighbors;  // 0-based, irreflexive
  std::vector<double> theta0;
};

struct KuramotoEmbedding {
  OdeSystem system;
  TransformDescriptor transform;
  std::vector<double> x0;
};

// Trigonometric embedding on 4N variables ordered
// (x_1, y_1, z_1, w_1, ..., x_N, y_N, w_N... z/w shifted copies); initial
// point follows cos/sin of theta0 with the shifted pair negated.
KuramotoEmbedding make_kuramoto(const KuramotoSpec& spec);

// atan2 phase readback, unwrapped along the trajectory; one row per sample.
std::vector<std::vector<double>> kuramoto_phase_recover(const Trajectory& traj);

// Direct integration of theta_i' = omega_i + (K/N) sum_j sin(theta_j - theta_i)
// with the same RK scheme; returns unwrapped phases per sample.
std::vector<std::vector<double>> kuramoto_reference(const KuramotoSpec& spec,
                                                    double t_end, double rel_tol,
                                                    std::span<const double> t_grid);

}  // namespace kvn
