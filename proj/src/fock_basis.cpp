#include "kvn/fock_basis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "kvn/hermite.hpp"

namespace kvn {

namespace {

constexpr int kTableSpanLimit = 120;   // N + m bound for exact 64-bit Pascal rows
constexpr int kLinearScanLimit = 64;   // alphabet size below which we scan

}  // namespace

std::uint64_t fock_dimension(int n_vars, int cap) {
  if (n_vars < 1) throw std::invalid_argument("fock_dimension: need n_vars >= 1");
  if (cap < 0) throw std::invalid_argument("fock_dimension: need cap >= 0");
  return binomial_checked(n_vars + cap, std::min(cap, n_vars));
}

FockBasis::FockBasis(int n_vars, int cap) : n_vars_(n_vars), cap_(cap) {
  dim_ = fock_dimension(n_vars, cap);  // validates the arguments
  if (n_vars + cap > kTableSpanLimit)
    throw std::invalid_argument("FockBasis: N + m beyond " +
                                std::to_string(kTableSpanLimit) +
                                " is not enumerable here");
  binom_ = BinomialTable(n_vars + cap, cap);
}

int FockBasis::leftmost_symbol(std::uint64_t& index, int base, int slots) const {
  const int span = n_vars_ - base;  // residual alphabet is {base..N}, size span+1
  // smallest a in [0, span] with C(span + slots - a - 1, slots) <= index
  int a;
  if (span <= kLinearScanLimit) {
    a = 0;
    while (binom_(span + slots - a - 1, slots) > index) ++a;
  } else {
    int lo = 0, hi = span;
    while (lo < hi) {
      int mid = (lo + hi) / 2;
      if (binom_(span + slots - mid - 1, slots) <= index)
        hi = mid;
      else
        lo = mid + 1;
    }
    a = lo;
  }
  index -= binom_(span + slots - a - 1, slots);
  return base + a;
}

OccupationWord FockBasis::unrank(std::uint64_t index) const {
  if (index >= dim_)
    throw std::out_of_range("unrank: index " + std::to_string(index) +
                            " outside [0, " + std::to_string(dim_) + ")");
  OccupationWord w;
  w.symbols.resize(static_cast<std::size_t>(cap_));
  int base = 0;
  for (int s = 0; s < cap_; ++s) {
    base = leftmost_symbol(index, base, cap_ - s);
    w.symbols[static_cast<std::size_t>(s)] = base;
  }
  return w;
}

std::uint64_t FockBasis::rank(const OccupationWord& word) const {
  if (static_cast<int>(word.symbols.size()) != cap_)
    throw std::invalid_argument("rank: word length differs from cap");
  std::uint64_t index = 0;
  int base = 0;
  for (int s = 0; s < cap_; ++s) {
    int sym = word.symbols[static_cast<std::size_t>(s)];
    if (sym < base || sym > n_vars_)
      throw std::invalid_argument("rank: word not ascending over [0, N]");
    int span = n_vars_ - base;
    int slots = cap_ - s;
    index += binom_(span + slots - (sym - base) - 1, slots);
    base = sym;
  }
  return index;
}

std::vector<int> FockBasis::occupations(const OccupationWord& word) const {
  std::vector<int> occ(static_cast<std::size_t>(n_vars_), 0);
  for (int sym : word.symbols) {
    if (sym < 0 || sym > n_vars_)
      throw std::invalid_argument("occupations: symbol out of range");
    if (sym > 0) ++occ[static_cast<std::size_t>(sym - 1)];
  }
  return occ;
}

int FockBasis::total_occupation(const OccupationWord& word) const {
  int t = 0;
  for (int sym : word.symbols) t += (sym > 0);
  return t;
}

OccupationWord FockBasis::word_from_occupations(std::span<const int> occ) const {
  if (static_cast<int>(occ.size()) != n_vars_)
    throw std::invalid_argument("word_from_occupations: length mismatch");
  int total = 0;
  for (int q : occ) {
    if (q < 0) throw std::invalid_argument("word_from_occupations: negative count");
    total += q;
  }
  if (total > cap_)
    throw std::invalid_argument("word_from_occupations: total occupation exceeds cap");
  OccupationWord w;
  w.symbols.reserve(static_cast<std::size_t>(cap_));
  w.symbols.assign(static_cast<std::size_t>(cap_ - total), 0);
  for (int i = 0; i < n_vars_; ++i)
    w.symbols.insert(w.symbols.end(), static_cast<std::size_t>(occ[i]), i + 1);
  return w;
}

std::uint64_t FockBasis::rank_occupations(std::span<const int> occ) const {
  return rank(word_from_occupations(occ));
}

double StateVector::norm() const {
  double acc = 0.0;
  for (const auto& a : amplitudes) acc += std::norm(a);
  return std::sqrt(acc);
}

void check_observable(const ObservableSpec& obs, int n_vars) {
  if (obs.degree_cap < 0)
    throw std::invalid_argument("observable: negative degree cap");
  if (obs.terms.empty())
    throw std::invalid_argument("observable: needs at least one term");
  for (const auto& term : obs.terms) {
    if (!std::isfinite(term.coeff))
      throw std::invalid_argument("observable: non-finite coefficient");
    int total = 0;
    for (const auto& [var, q] : term.occupations) {
      if (var < 0 || var >= n_vars)
        throw std::invalid_argument("observable: variable index out of range");
      if (q < 1) throw std::invalid_argument("observable: quanta must be >= 1");
      total += q;
    }
    if (total > obs.degree_cap)
      throw std::invalid_argument("observable: term degree " + std::to_string(total) +
                                  " exceeds cap " + std::to_string(obs.degree_cap));
  }
}

std::pair<StateVector, double> encode_position(const FockBasis& basis,
                                               std::span<const double> x0) {
  if (static_cast<int>(x0.size()) != basis.n_vars())
    throw std::invalid_argument("encode_position: x0 dimension mismatch");
  for (double v : x0)
    if (!std::isfinite(v))
      throw std::invalid_argument("encode_position: non-finite coordinate");

  const int n = basis.n_vars();
  const int m = basis.cap();
  // p_k(x0_i) for k = 0..m, one row per variable
  std::vector<std::vector<double>> herm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) herm[static_cast<std::size_t>(i)] = hermite_values(m, x0[i]);

  StateVector psi;
  psi.amplitudes.resize(basis.dimension());
  double l_sum = 0.0;
  for (std::uint64_t idx = 0; idx < basis.dimension(); ++idx) {
    auto occ = basis.occupations(basis.unrank(idx));
    double amp = 1.0;
    for (int i = 0; i < n; ++i) amp *= herm[static_cast<std::size_t>(i)][occ[i]];
    psi.amplitudes[idx] = amp;
    l_sum += amp * amp;
  }
  if (!(l_sum > 0.0) || !std::isfinite(l_sum))
    throw std::runtime_error("encode_position: degenerate normalization sum");
  const double inv = 1.0 / std::sqrt(l_sum);
  for (auto& a : psi.amplitudes) a *= inv;
  return {std::move(psi), l_sum};
}

StateVector encode_observable(const FockBasis& basis, const ObservableSpec& obs) {
  check_observable(obs, basis.n_vars());
  if (obs.degree_cap > basis.cap())
    throw std::invalid_argument("encode_observable: degree cap exceeds basis cap");
  StateVector c;
  c.amplitudes.resize(basis.dimension());
  std::vector<int> occ(static_cast<std::size_t>(basis.n_vars()));
  for (const auto& term : obs.terms) {
    std::fill(occ.begin(), occ.end(), 0);
    for (const auto& [var, q] : term.occupations) occ[static_cast<std::size_t>(var)] = q;
    c.amplitudes[basis.rank_occupations(occ)] += term.coeff;
  }
  return c;
}

}  // namespace kvn
