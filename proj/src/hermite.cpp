#include "kvn/hermite.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace kvn {

namespace {

constexpr double kQuarterRootPiInv = 0.75112554446494248;  // pi^(-1/4)
constexpr double kOverflowGuard = 1e300;

void check_domain(int n, double x) {
  if (n < 0 || n > 10000)
    throw std::invalid_argument("hermite: order outside [0, 10000]");
  if (!(std::abs(x) <= 50.0))
    throw std::invalid_argument("hermite: |x| must be <= 50");
}

}  // namespace

std::vector<double> hermite_values(int n, double x) {
  check_domain(n, x);
  std::vector<double> p(static_cast<std::size_t>(n) + 1);
  p[0] = kQuarterRootPiInv;
  if (n == 0) return p;
  p[1] = std::sqrt(2.0) * x * kQuarterRootPiInv;
  for (int k = 1; k < n; ++k) {
    double next = std::sqrt(2.0 / (k + 1)) * x * p[k] -
                  std::sqrt(static_cast<double>(k) / (k + 1)) * p[k - 1];
    if (std::abs(next) > kOverflowGuard)
      throw std::runtime_error("hermite: overflow at order " + std::to_string(k + 1));
    p[static_cast<std::size_t>(k) + 1] = next;
  }
  return p;
}

double hermite_value(int n, double x) { return hermite_values(n, x).back(); }

}  // namespace kvn
