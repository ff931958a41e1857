#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "kvn/fock_basis.hpp"
#include "kvn/ode_system.hpp"

namespace kvn {

// Sparse Hermitian matrix with purely imaginary entries: H = i*A where A is
// real and antisymmetric. Only A is stored (CSR by row), which also pins the
// Hermitian structure representationally.
class SparseHermitianMatrix {
 public:
  SparseHermitianMatrix() = default;
  // triplets (row, col, imag) need not be sorted; duplicates are summed and
  // exact zeros dropped. Antisymmetry of the result is verified.
  SparseHermitianMatrix(std::uint64_t dim,
                        std::vector<std::uint64_t> rows,
                        std::vector<std::uint64_t> cols,
                        std::vector<double> imags);

  std::uint64_t dim() const { return dim_; }
  std::uint64_t nnz() const { return cols_.size(); }

  std::complex<double> entry(std::uint64_t row, std::uint64_t col) const;
  double imag_entry(std::uint64_t row, std::uint64_t col) const;

  // y = H x (complex), and y = A x on raw real vectors
  void apply(std::span<const std::complex<double>> x,
             std::span<std::complex<double>> y) const;
  void apply_real(std::span<const double> x, std::span<double> y) const;

  std::uint64_t max_row_nnz() const;
  double max_abs_entry() const;
  double one_norm() const;   // max column absolute sum
  double inf_norm() const;   // max row absolute sum

  const std::vector<std::uint64_t>& row_ptr() const { return row_ptr_; }
  const std::vector<std::uint64_t>& col_index() const { return cols_; }
  const std::vector<double>& imag_values() const { return imags_; }

 private:
  std::uint64_t dim_ = 0;
  std::vector<std::uint64_t> row_ptr_;
  std::vector<std::uint64_t> cols_;
  std::vector<double> imags_;
};

struct BuildOptions {
  // cap on raised/lowered candidate entries before assembly is refused
  std::uint64_t max_entries = 20'000'000;
};

// Truncated generator of the embedded dynamics: for every coupling set p and
// slot i, alpha_{p->i} khat_i prod_{j in p \ i} xhat_j, compressed to total
// occupation <= m, with xhat = (a + a^dag)/sqrt(2), khat = i(a^dag - a)/sqrt(2).
SparseHermitianMatrix build_hamiltonian(const OdeSystem& sys, const FockBasis& basis,
                                        const BuildOptions& opts = {});

// (sets of size 2, sets of size > 2); the parts sum to sys but individually
// may leave variables uncovered.
std::pair<OdeSystem, OdeSystem> split_linear_interactions(const OdeSystem& sys);

// True when every stored entry connects words of equal total occupation.
bool check_number_conserving(const SparseHermitianMatrix& h, const FockBasis& basis);

struct NormCertificate {
  std::uint64_t max_row_nnz = 0;
  double max_abs_entry = 0.0;
  double one_norm = 0.0;
  double inf_norm = 0.0;
  double spectral_estimate = 0.0;
  double spectral_residual = 0.0;

  double sparsity_bound = 0.0;   // c * 2^d * m
  double max_entry_bound = 0.0;  // eta * d * (m/2)^(d/2)
  double one_norm_bound = 0.0;   // eta * c * d * m^(d/2)

  bool sparsity_ok = false;
  bool max_entry_ok = false;
  bool max_entry_certified = false;  // the closed-form bound needs m >= 2
  bool one_norm_ok = false;
  bool spectral_ok = false;          // estimate <= sqrt(one_norm * inf_norm)
};

NormCertificate norm_certificate(const SparseHermitianMatrix& h, const OdeSystem& sys,
                                 const FockBasis& basis);

// "row,col,imag_value" rows under a "# N=.. m=.. M=.." header line.
void write_matrix_csv(std::ostream& out, const SparseHermitianMatrix& h,
                      int n_vars, int cap);

struct MatrixCsv {
  SparseHermitianMatrix matrix;
  int n_vars = 0;
  int cap = 0;
};
MatrixCsv read_matrix_csv(std::istream& in);

}  // namespace kvn
