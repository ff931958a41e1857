#pragma once

#include <vector>

namespace kvn {

// Orthonormal Hermite polynomials under the weight exp(-x^2):
//   p_0 = pi^(-1/4),  p_1 = sqrt(2) x pi^(-1/4),
//   p_{n+1} = sqrt(2/(n+1)) x p_n - sqrt(n/(n+1)) p_{n-1}.
// Valid for n <= 10000 and |x| <= 50; magnitude overflow during the
// recurrence is reported with the offending order.
double hermite_value(int n, double x);

// p_0..p_n in one pass.
std::vector<double> hermite_values(int n, double x);

}  // namespace kvn
