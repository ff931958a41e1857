#include "krylov_internal.hpp"

#include <stdexcept>

namespace kvn::internal {

LanczosDecomp lanczos(const ApplyFn& apply, const Eigen::VectorXcd& start,
                      int max_k, double breakdown_tol) {
  const auto dim = start.size();
  if (max_k < 1) throw std::invalid_argument("lanczos: max_k must be >= 1");
  if (max_k > dim) max_k = static_cast<int>(dim);
  double nrm = start.norm();
  if (!(nrm > 0.0)) throw std::invalid_argument("lanczos: zero start vector");

  LanczosDecomp d;
  d.V.resize(dim, max_k);
  d.alpha.resize(max_k);
  d.beta.resize(max_k > 1 ? max_k - 1 : 0);
  d.V.col(0) = start / nrm;

  Eigen::VectorXcd w(dim);
  for (int j = 0; j < max_k; ++j) {
    apply(d.V.col(j), w);
    d.alpha(j) = d.V.col(j).dot(w).real();
    w -= d.alpha(j) * d.V.col(j);
    if (j > 0) w -= d.beta(j - 1) * d.V.col(j - 1);
    // full reorthogonalization, two sweeps
    for (int sweep = 0; sweep < 2; ++sweep)
      w -= d.V.leftCols(j + 1) * (d.V.leftCols(j + 1).adjoint() * w);

    double b = w.norm();
    d.k = j + 1;
    d.next_beta = b;
    if (b <= breakdown_tol || j + 1 == max_k) break;
    d.beta(j) = b;
    d.V.col(j + 1) = w / b;
  }
  d.V.conservativeResize(dim, d.k);
  d.alpha.conservativeResize(d.k);
  d.beta.conservativeResize(d.k > 1 ? d.k - 1 : 0);
  return d;
}

}  // namespace kvn::internal
