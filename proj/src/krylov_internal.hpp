#pragma once

#include <Eigen/Dense>

#include <functional>

namespace kvn::internal {

using ApplyFn = std::function<void(const Eigen::VectorXcd&, Eigen::VectorXcd&)>;

// Hermitian Lanczos with full reorthogonalization. Produces the orthonormal
// block V (dim x k) and the real tridiagonal coefficients; next_beta is the
// residual coupling past the last kept vector (zero on happy breakdown).
struct LanczosDecomp {
  Eigen::MatrixXcd V;
  Eigen::VectorXd alpha;
  Eigen::VectorXd beta;
  double next_beta = 0.0;
  int k = 0;
};

LanczosDecomp lanczos(const ApplyFn& apply, const Eigen::VectorXcd& start,
                      int max_k, double breakdown_tol);

}  // namespace kvn::internal
