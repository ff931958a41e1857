#include "kvn/estimator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace kvn {

namespace {

struct SystemShape {
  int d = 0;       // largest interaction size
  int c = 0;       // largest membership count
  double eta = 0;  // largest |coupling|
};

SystemShape shape_of(const OdeSystem& sys) {
  ValidationReport report = validate_system(sys);
  if (!report.ok) {
    throw std::invalid_argument("estimator: system fails validation: " +
                                report.violations.front().rule + " (" +
                                report.violations.front().detail + ")");
  }
  return {report.degree, report.membership, report.coupling_max};
}

double series_constant(const SystemShape& s) {
  double d = static_cast<double>(s.d);
  return 2.0 * s.eta * s.eta * s.c * d * d * d * std::exp2(-0.5 * d);
}

}  // namespace

TruncationParams select_truncation(const OdeSystem& sys, int degree_b, double eps,
                                   double t_final) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("select_truncation: eps must lie in (0,1)");
  if (degree_b < 1) throw std::invalid_argument("select_truncation: degree must be >= 1");
  if (!(t_final > 0.0) || !std::isfinite(t_final))
    throw std::invalid_argument("select_truncation: horizon must be positive");

  SystemShape s = shape_of(sys);
  const double d = static_cast<double>(s.d);
  const double c = static_cast<double>(s.c);
  const double b = static_cast<double>(degree_b);
  const double big_c = series_constant(s);
  const double log_inv_eps = std::log(1.0 / eps);

  double candidates[] = {
      log_inv_eps,
      b * std::log(big_c * t_final),
      b * d * std::log(d + 1.0) - 0.5 * std::log(M_PI / 2.0),
      4.0 * b * d - 2.0,
      std::exp(4.0),
      b * std::log(s.eta),
      3.0 * b,
      (std::sqrt(2.0) / d) *
              std::pow(std::exp(3.0) / (2.0 * s.eta * c * d * d * d * t_final), 1.0 / d) -
          b / d,
  };
  double needed = 1.0;
  for (double cand : candidates) needed = std::max(needed, std::max(cand, 1.0));

  TruncationParams out;
  out.degree_b = degree_b;
  out.eps = eps;
  out.horizon = t_final;
  out.interaction_degree = s.d;
  out.n0 = static_cast<long long>(std::ceil(needed));
  out.m = static_cast<long long>(s.d) * out.n0 + degree_b;
  out.series_constant = big_c;
  out.delta = big_c * t_final * std::pow(static_cast<double>(out.m), d);
  return out;
}

TruncationCheck verify_truncation(const OdeSystem& sys, const TruncationParams& params) {
  SystemShape s = shape_of(sys);
  if (params.n0 < 1 || params.delta <= 0.0)
    throw std::invalid_argument("verify_truncation: malformed parameter set");

  const double n0 = static_cast<double>(params.n0);
  const double log_delta = std::log(params.delta);
  const double rhs = std::log(params.eps) - params.degree_b * log_delta;

  TruncationCheck check;
  check.factorial_margin =
      std::log(2.0) - std::lgamma(n0 + 1.0) - n0 * std::log(2.0 * s.d) - rhs;
  check.factorial_ok = check.factorial_margin < 0.0;

  double eta_tilde = 0.0;
  for (const Interaction& p : sys.interactions()) {
    int size = static_cast<int>(p.members.size());
    if (size <= 2) continue;
    double scale = std::pow(params.delta, static_cast<double>(size - 2));
    for (double a : p.couplings) eta_tilde = std::max(eta_tilde, std::abs(a) / scale);
  }
  check.eta_tilde = eta_tilde;
  if (eta_tilde == 0.0) {
    check.coupling_margin = -std::numeric_limits<double>::infinity();
    check.coupling_ok = true;
  } else {
    check.coupling_margin = n0 * std::log(eta_tilde) - rhs;
    check.coupling_ok = check.coupling_margin < 0.0;
  }
  return check;
}

ResourceEstimate block_encoding_cost(const OdeSystem& sys, long long m, long long n_vars) {
  if (m < 1) throw std::invalid_argument("block_encoding_cost: m must be >= 1");
  if (n_vars < 1) throw std::invalid_argument("block_encoding_cost: N must be >= 1");
  SystemShape s = shape_of(sys);
  const double d = static_cast<double>(s.d);

  ResourceEstimate out;
  out.sparsity = s.c * std::exp2(d) * static_cast<double>(m);
  out.subnormalization = s.eta * d * std::pow(0.5 * static_cast<double>(m), 0.5 * d);

  auto un = static_cast<unsigned long long>(n_vars);
  if ((un & (un - 1)) == 0) {
    out.qubits = m * std::countr_zero(un) + 3;
  } else {
    long double bits = static_cast<long double>(m) * std::log2(static_cast<long double>(un));
    out.qubits = static_cast<long long>(std::ceil(bits)) + 3;
  }
  return out;
}

ResourceEstimate simulation_query_count(const OdeSystem& sys, long long m, double t,
                                        double eps) {
  if (m < 1) throw std::invalid_argument("simulation_query_count: m must be >= 1");
  if (!(t > 0.0) || !std::isfinite(t))
    throw std::invalid_argument("simulation_query_count: t must be positive");
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("simulation_query_count: eps must lie in (0,1)");
  SystemShape s = shape_of(sys);
  const double d = static_cast<double>(s.d);

  ResourceEstimate out;
  out.sparsity = s.c * std::exp2(d) * static_cast<double>(m);
  out.subnormalization = s.eta * d * std::pow(0.5 * static_cast<double>(m), 0.5 * d);
  out.alpha = 0.25 * std::exp(1.0) * s.eta * s.c * d *
              std::pow(2.0 * static_cast<double>(m), 0.5 * d + 1.0);
  const double at = out.alpha * t;
  const double log_inv_eps = std::log(1.0 / eps);
  out.queries = at + log_inv_eps / std::log(std::exp(1.0) + log_inv_eps / at);
  return out;
}

double classical_baseline_cost(double t_final, long long n_vars, double eps, int rk_order) {
  if (!(t_final >= 0.0) || n_vars < 1 || rk_order < 1 || !(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("classical_baseline_cost: bad arguments");
  return t_final * static_cast<double>(n_vars) *
         std::pow(1.0 / eps, 1.0 / static_cast<double>(rk_order));
}

double fock_dimension_approx(long long n_vars, long long cap) {
  if (n_vars < 1 || cap < 0) throw std::invalid_argument("fock_dimension_approx: bad arguments");
  double n = static_cast<double>(n_vars);
  double m = static_cast<double>(cap);
  return std::exp(std::lgamma(n + m + 1.0) - std::lgamma(m + 1.0) - std::lgamma(n + 1.0));
}

}  // namespace kvn
