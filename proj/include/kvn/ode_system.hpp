#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace kvn {

// One coupling set p: ordered member variables (0-based) and the
// per-member coefficients alpha_{p->i}. A zero coefficient means the
// member's own equation receives no term from this set, but the member
// still participates in the products feeding the other members.
struct Interaction {
  std::vector<int> members;
  std::vector<double> couplings;
};

// Polynomial system dx_i/dt = sum over sets containing i of
// alpha_{p->i} * prod_{j in p, j != i} x_j.
class OdeSystem {
 public:
  OdeSystem(int n_vars, std::vector<Interaction> interactions);

  int n_vars() const { return n_vars_; }
  const std::vector<Interaction>& interactions() const { return interactions_; }

  int degree() const { return degree_; }           // d: largest set size
  int membership() const { return membership_; }   // c: max sets per variable
  double coupling_max() const { return coupling_max_; }  // eta

 private:
  int n_vars_;
  std::vector<Interaction> interactions_;
  int degree_ = 0;
  int membership_ = 0;
  double coupling_max_ = 0.0;
};

struct ValidationIssue {
  std::string rule;
  std::string detail;
};

struct ValidationReport {
  bool ok = false;
  std::vector<ValidationIssue> violations;
  std::vector<std::string> warnings;
  int degree = 0;
  int membership = 0;
  double coupling_max = 0.0;
};

// Checks the three structural conditions: set sizes in [2, d] with
// distinct in-range members, every variable covered by 1..c sets, and
// each set's couplings summing to zero (absolute tolerance 1e-12).
// Memberships must also be pairwise distinct across interactions.
ValidationReport validate_system(const OdeSystem& sys);

inline constexpr double kCouplingSumTol = 1e-12;

std::vector<double> rhs(const OdeSystem& sys, std::span<const double> x);

// sum_i x_i F_i(x); identically zero for systems passing validation.
double weight_drift(const OdeSystem& sys, std::span<const double> x);

// Couplings divided by delta^(|p|-2), initial point multiplied by delta.
// A trajectory x(t) of sys corresponds to delta*x(t) of the result.
std::pair<OdeSystem, std::vector<double>> rescale(const OdeSystem& sys,
                                                  std::span<const double> x0,
                                                  double delta);

}  // namespace kvn
