#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "kvn/binomial.hpp"

namespace kvn {

// Total binomial dimension C(N+m, m); throws std::overflow_error past 2^63.
std::uint64_t fock_dimension(int n_vars, int cap);

// Length-m ascending word over the alphabet {0..N}; symbol 0 pads unused
// slots, symbol s >= 1 stands for one quantum on variable s.
struct OccupationWord {
  std::vector<int> symbols;
};

// Enumerated truncated occupation basis: all words of N variables with
// total occupation at most m, indexed in descending lexicographic order
// (index 0 is the word (N,...,N), the last index is the vacuum).
class FockBasis {
 public:
  FockBasis(int n_vars, int cap);

  int n_vars() const { return n_vars_; }
  int cap() const { return cap_; }
  std::uint64_t dimension() const { return dim_; }

  OccupationWord unrank(std::uint64_t index) const;
  std::uint64_t rank(const OccupationWord& word) const;

  // Per-variable quanta (length N) of a word; total_occupation is their sum.
  std::vector<int> occupations(const OccupationWord& word) const;
  int total_occupation(const OccupationWord& word) const;
  OccupationWord word_from_occupations(std::span<const int> occ) const;

  // rank(word_from_occupations(occ)) without materializing the word.
  std::uint64_t rank_occupations(std::span<const int> occ) const;

 private:
  int leftmost_symbol(std::uint64_t& index, int base, int slots) const;

  int n_vars_;
  int cap_;
  std::uint64_t dim_;
  BinomialTable binom_;
};

struct StateVector {
  std::vector<std::complex<double>> amplitudes;
  double norm() const;
};

struct ObservableTerm {
  std::map<int, int> occupations;  // 0-based variable -> quanta (>= 1)
  double coeff = 0.0;
};

// Finite Hermite expansion sum_n c_n prod_i p_{n_i}(x_i) with every term's
// total degree bounded by degree_cap.
struct ObservableSpec {
  int degree_cap = 0;
  std::vector<ObservableTerm> terms;
};

void check_observable(const ObservableSpec& obs, int n_vars);

// Hermite product-state encoding of a classical point. Amplitude at word n
// is prod_{i=1..N} p_{n_i}(x0_i) (vacuum factors included) scaled by
// 1/sqrt(L); returns the normalized state and L.
std::pair<StateVector, double> encode_position(const FockBasis& basis,
                                               std::span<const double> x0);

// Unnormalized coefficient vector of an observable in the same basis.
StateVector encode_observable(const FockBasis& basis, const ObservableSpec& obs);

}  // namespace kvn
