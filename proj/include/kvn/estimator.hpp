#pragma once

#include <cstdint>

#include "kvn/ode_system.hpp"

namespace kvn {

// Truncation level selection for a degree-b polynomial output read to accuracy
// eps over horizon T. All logarithms are natural.
struct TruncationParams {
  int degree_b = 1;
  double eps = 0.0;
  double horizon = 0.0;
  int interaction_degree = 0;      // d
  long long n0 = 0;
  long long m = 0;                 // d*n0 + b
  double series_constant = 0.0;    // C = 2 eta^2 c d^3 2^{-d/2}
  double delta = 0.0;              // C * T * m^d
};

TruncationParams select_truncation(const OdeSystem& sys, int degree_b, double eps,
                                   double t_final);

// Log-domain check of the two sufficient inequalities behind the truncation
// choice. Margins are (lhs - rhs) in log space, so negative means satisfied.
struct TruncationCheck {
  bool factorial_ok = false;
  bool coupling_ok = false;
  double factorial_margin = 0.0;
  double coupling_margin = 0.0;
  double eta_tilde = 0.0;   // largest rescaled coupling among size>2 interactions
};

TruncationCheck verify_truncation(const OdeSystem& sys, const TruncationParams& params);

// Cost formulas, all up to the Theta-constants of the source bounds; the
// reported numbers are the literal bracketed expressions.
struct ResourceEstimate {
  double sparsity = 0.0;           // c * 2^d * m
  long long qubits = 0;            // ceil(m log2 N) + 3
  double subnormalization = 0.0;   // eta * d * (m/2)^{d/2}
  double alpha = 0.0;              // (e/4) eta c d (2m)^{d/2+1}
  double queries = 0.0;            // alpha t + ln(1/eps)/ln(e + ln(1/eps)/(alpha t))
};

ResourceEstimate block_encoding_cost(const OdeSystem& sys, long long m, long long n_vars);

ResourceEstimate simulation_query_count(const OdeSystem& sys, long long m, double t,
                                        double eps);

// Crude classical floor T * N * (1/eps)^{1/p} for a p-th order explicit scheme.
double classical_baseline_cost(double t_final, long long n_vars, double eps, int rk_order);

// Fock dimension C(n_vars + cap, cap) in double precision via log-gamma; usable
// where the exact integer would overflow.
double fock_dimension_approx(long long n_vars, long long cap);

}  // namespace kvn
