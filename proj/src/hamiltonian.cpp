#include "kvn/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "krylov_internal.hpp"

namespace kvn {

namespace {

struct Triplet {
  std::uint64_t row, col;
  double imag;
};

constexpr double kHermiticityTol = 1e-12;

}  // namespace

SparseHermitianMatrix::SparseHermitianMatrix(std::uint64_t dim,
                                             std::vector<std::uint64_t> rows,
                                             std::vector<std::uint64_t> cols,
                                             std::vector<double> imags)
    : dim_(dim) {
  if (rows.size() != cols.size() || rows.size() != imags.size())
    throw std::invalid_argument("sparse matrix: triplet arrays differ in length");
  std::vector<Triplet> trips(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= dim || cols[i] >= dim)
      throw std::invalid_argument("sparse matrix: index outside dimension");
    trips[i] = {rows[i], cols[i], imags[i]};
  }
  std::stable_sort(trips.begin(), trips.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  row_ptr_.assign(dim_ + 1, 0);
  cols_.reserve(trips.size());
  imags_.reserve(trips.size());
  std::size_t i = 0;
  for (std::uint64_t r = 0; r < dim_; ++r) {
    while (i < trips.size() && trips[i].row == r) {
      std::uint64_t c = trips[i].col;
      double v = 0.0;
      while (i < trips.size() && trips[i].row == r && trips[i].col == c) {
        v += trips[i].imag;
        ++i;
      }
      if (v != 0.0) {
        cols_.push_back(c);
        imags_.push_back(v);
      }
    }
    row_ptr_[r + 1] = cols_.size();
  }

  // transpose symmetrization check: A must satisfy A[c][r] = -A[r][c]
  for (std::uint64_t r = 0; r < dim_; ++r) {
    for (std::uint64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      std::uint64_t c = cols_[k];
      if (c == r)
        throw std::runtime_error("sparse matrix: nonzero diagonal breaks antisymmetry");
      double mirror = imag_entry(c, r);
      if (std::abs(mirror + imags_[k]) > kHermiticityTol)
        throw std::runtime_error("sparse matrix: Hermiticity violated at (" +
                                 std::to_string(r) + "," + std::to_string(c) + ")");
    }
  }
}

double SparseHermitianMatrix::imag_entry(std::uint64_t row, std::uint64_t col) const {
  if (row >= dim_ || col >= dim_)
    throw std::out_of_range("sparse matrix: entry index out of range");
  auto first = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row]);
  auto last = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row + 1]);
  auto it = std::lower_bound(first, last, col);
  if (it == last || *it != col) return 0.0;
  return imags_[static_cast<std::size_t>(it - cols_.begin())];
}

std::complex<double> SparseHermitianMatrix::entry(std::uint64_t row,
                                                  std::uint64_t col) const {
  return {0.0, imag_entry(row, col)};
}

void SparseHermitianMatrix::apply(std::span<const std::complex<double>> x,
                                  std::span<std::complex<double>> y) const {
  if (x.size() != dim_ || y.size() != dim_)
    throw std::invalid_argument("sparse matrix: apply dimension mismatch");
  for (std::uint64_t r = 0; r < dim_; ++r) {
    std::complex<double> acc = 0.0;
    for (std::uint64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      acc += imags_[k] * x[cols_[k]];
    y[r] = {-acc.imag(), acc.real()};  // multiply the real accumulation by i
  }
}

void SparseHermitianMatrix::apply_real(std::span<const double> x,
                                       std::span<double> y) const {
  if (x.size() != dim_ || y.size() != dim_)
    throw std::invalid_argument("sparse matrix: apply dimension mismatch");
  for (std::uint64_t r = 0; r < dim_; ++r) {
    double acc = 0.0;
    for (std::uint64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      acc += imags_[k] * x[cols_[k]];
    y[r] = acc;
  }
}

std::uint64_t SparseHermitianMatrix::max_row_nnz() const {
  std::uint64_t best = 0;
  for (std::uint64_t r = 0; r < dim_; ++r)
    best = std::max(best, row_ptr_[r + 1] - row_ptr_[r]);
  return best;
}

double SparseHermitianMatrix::max_abs_entry() const {
  double best = 0.0;
  for (double v : imags_) best = std::max(best, std::abs(v));
  return best;
}

double SparseHermitianMatrix::one_norm() const {
  std::vector<double> col_sum(dim_, 0.0);
  for (std::uint64_t r = 0; r < dim_; ++r)
    for (std::uint64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      col_sum[cols_[k]] += std::abs(imags_[k]);
  double best = 0.0;
  for (double v : col_sum) best = std::max(best, v);
  return best;
}

double SparseHermitianMatrix::inf_norm() const {
  double best = 0.0;
  for (std::uint64_t r = 0; r < dim_; ++r) {
    double acc = 0.0;
    for (std::uint64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      acc += std::abs(imags_[k]);
    best = std::max(best, acc);
  }
  return best;
}

SparseHermitianMatrix build_hamiltonian(const OdeSystem& sys, const FockBasis& basis,
                                        const BuildOptions& opts) {
  if (sys.n_vars() != basis.n_vars())
    throw std::invalid_argument("build_hamiltonian: system and basis disagree on N");
  for (const auto& s : sys.interactions()) {
    if (s.members.size() > 62)
      throw std::invalid_argument("build_hamiltonian: interaction too large");
    for (int v : s.members)
      if (v < 0 || v >= sys.n_vars())
        throw std::invalid_argument("build_hamiltonian: member outside variable range");
  }

  const std::uint64_t dim = basis.dimension();
  const int m = basis.cap();

  std::uint64_t patterns_per_column = 0;
  for (const auto& s : sys.interactions())
    patterns_per_column += std::uint64_t{1} << s.members.size();
  if (patterns_per_column > 0 && dim > opts.max_entries / patterns_per_column)
    throw std::runtime_error(
        "build_hamiltonian: candidate entry count exceeds the configured cap");

  std::vector<std::uint64_t> rows, cols;
  std::vector<double> vals;
  std::vector<int> occ, occ_new;
  for (std::uint64_t col = 0; col < dim; ++col) {
    occ = basis.occupations(basis.unrank(col));
    int total = 0;
    for (int q : occ) total += q;

    for (const auto& s : sys.interactions()) {
      const int l = static_cast<int>(s.members.size());
      const double inv_scale = std::exp2(-0.5 * l);
      for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << l); ++bits) {
        int raised = static_cast<int>(__builtin_popcountll(bits));
        int new_total = total + 2 * raised - l;
        if (new_total > m) continue;

        // occupation factors are exact integers; one sqrt at the end
        unsigned __int128 factor = 1;
        bool dead = false;
        for (int t = 0; t < l && !dead; ++t) {
          int q = occ[static_cast<std::size_t>(s.members[t])];
          if (bits >> t & 1)
            factor *= static_cast<unsigned>(q + 1);
          else if (q == 0)
            dead = true;
          else
            factor *= static_cast<unsigned>(q);
        }
        if (dead) continue;

        double g = 0.0;  // sum over slot choices, sign - for a lowering slot
        for (int t = 0; t < l; ++t)
          g += (bits >> t & 1) ? s.couplings[t] : -s.couplings[t];
        if (g == 0.0) continue;

        occ_new = occ;
        for (int t = 0; t < l; ++t)
          occ_new[static_cast<std::size_t>(s.members[t])] += (bits >> t & 1) ? 1 : -1;
        std::uint64_t row = basis.rank_occupations(occ_new);

        double magnitude = std::sqrt(static_cast<double>(factor)) * inv_scale;
        rows.push_back(row);
        cols.push_back(col);
        vals.push_back(g * magnitude);
      }
    }
  }
  return SparseHermitianMatrix(dim, std::move(rows), std::move(cols), std::move(vals));
}

std::pair<OdeSystem, OdeSystem> split_linear_interactions(const OdeSystem& sys) {
  std::vector<Interaction> lin, nonlin;
  for (const auto& s : sys.interactions())
    (s.members.size() == 2 ? lin : nonlin).push_back(s);
  return {OdeSystem(sys.n_vars(), std::move(lin)),
          OdeSystem(sys.n_vars(), std::move(nonlin))};
}

bool check_number_conserving(const SparseHermitianMatrix& h, const FockBasis& basis) {
  if (h.dim() != basis.dimension())
    throw std::invalid_argument("check_number_conserving: dimension mismatch");
  std::vector<int> totals(h.dim());
  for (std::uint64_t i = 0; i < h.dim(); ++i)
    totals[i] = basis.total_occupation(basis.unrank(i));
  const auto& rp = h.row_ptr();
  const auto& ci = h.col_index();
  for (std::uint64_t r = 0; r < h.dim(); ++r)
    for (std::uint64_t k = rp[r]; k < rp[r + 1]; ++k)
      if (totals[r] != totals[ci[k]]) return false;
  return true;
}

NormCertificate norm_certificate(const SparseHermitianMatrix& h, const OdeSystem& sys,
                                 const FockBasis& basis) {
  if (h.dim() != basis.dimension())
    throw std::invalid_argument("norm_certificate: dimension mismatch");
  const double c = sys.membership();
  const double d = sys.degree();
  const double eta = sys.coupling_max();
  const double m = basis.cap();

  NormCertificate cert;
  cert.max_row_nnz = h.max_row_nnz();
  cert.max_abs_entry = h.max_abs_entry();
  cert.one_norm = h.one_norm();
  cert.inf_norm = h.inf_norm();

  cert.sparsity_bound = c * std::exp2(d) * m;
  cert.max_entry_bound = eta * d * std::pow(m / 2.0, d / 2.0);
  cert.one_norm_bound = eta * c * d * std::pow(m, d / 2.0);

  cert.sparsity_ok = static_cast<double>(cert.max_row_nnz) <= cert.sparsity_bound;
  cert.max_entry_certified = basis.cap() >= 2;
  cert.max_entry_ok = cert.max_abs_entry <= cert.max_entry_bound;
  cert.one_norm_ok = cert.one_norm <= cert.one_norm_bound;

  if (h.nnz() == 0) {
    cert.spectral_estimate = 0.0;
    cert.spectral_residual = 0.0;
    cert.spectral_ok = true;
    return cert;
  }

  // Ritz estimate of the spectral norm, 50 reorthogonalized iterations from
  // a fixed pseudorandom start
  std::mt19937_64 gen(0x6b766e2d6e6f726dULL);
  Eigen::VectorXcd start(static_cast<Eigen::Index>(h.dim()));
  for (Eigen::Index i = 0; i < start.size(); ++i) {
    double u = static_cast<double>(gen() >> 11) * 0x1p-53;
    start(i) = 2.0 * u - 1.0;
  }
  internal::ApplyFn apply = [&h](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) {
    y.resize(x.size());
    h.apply({x.data(), static_cast<std::size_t>(x.size())},
            {y.data(), static_cast<std::size_t>(y.size())});
  };
  auto dec = internal::lanczos(apply, start, 50, 1e-13);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(dec.alpha, dec.beta);
  Eigen::Index which = 0;
  es.eigenvalues().cwiseAbs().maxCoeff(&which);
  cert.spectral_estimate = std::abs(es.eigenvalues()(which));
  cert.spectral_residual =
      dec.next_beta * std::abs(es.eigenvectors()(dec.k - 1, which));
  cert.spectral_ok =
      cert.spectral_estimate <= std::sqrt(cert.one_norm * cert.inf_norm) + 1e-12;
  return cert;
}

void write_matrix_csv(std::ostream& out, const SparseHermitianMatrix& h,
                      int n_vars, int cap) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "# N=%d m=%d M=%llu\n", n_vars, cap,
                static_cast<unsigned long long>(h.dim()));
  out << buf << "row,col,imag_value\n";
  const auto& rp = h.row_ptr();
  const auto& ci = h.col_index();
  const auto& iv = h.imag_values();
  for (std::uint64_t r = 0; r < h.dim(); ++r)
    for (std::uint64_t k = rp[r]; k < rp[r + 1]; ++k) {
      std::snprintf(buf, sizeof buf, "%llu,%llu,%.17g\n",
                    static_cast<unsigned long long>(r),
                    static_cast<unsigned long long>(ci[k]), iv[k]);
      out << buf;
    }
}

MatrixCsv read_matrix_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("matrix csv: empty input");
  int n_vars = 0, cap = 0;
  unsigned long long dim = 0;
  if (std::sscanf(line.c_str(), "# N=%d m=%d M=%llu", &n_vars, &cap, &dim) != 3)
    throw std::runtime_error("matrix csv: malformed header line");
  if (!std::getline(in, line) || line != "row,col,imag_value")
    throw std::runtime_error("matrix csv: missing column header");
  if (fock_dimension(n_vars, cap) != dim)
    throw std::runtime_error("matrix csv: header dimension is inconsistent");

  std::vector<std::uint64_t> rows, cols;
  std::vector<double> vals;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    unsigned long long r = 0, c = 0;
    double v = 0.0;
    if (std::sscanf(line.c_str(), "%llu,%llu,%lg", &r, &c, &v) != 3)
      throw std::runtime_error("matrix csv: malformed entry line: " + line);
    rows.push_back(r);
    cols.push_back(c);
    vals.push_back(v);
  }
  MatrixCsv out;
  out.n_vars = n_vars;
  out.cap = cap;
  out.matrix = SparseHermitianMatrix(dim, std::move(rows), std::move(cols), std::move(vals));
  return out;
}

}  // namespace kvn
