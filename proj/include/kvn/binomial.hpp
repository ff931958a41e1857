#pragma once

#include <cstdint>
#include <vector>

namespace kvn {

// Exact binomial coefficient C(n, k). Throws std::overflow_error if the
// value exceeds 2^63 - 1; callers that can live with "too big" should
// catch or pre-check with binomial_fits.
std::uint64_t binomial_checked(int n, int k);

bool binomial_fits(int n, int k);

// Pascal triangle cache for the basis ranking code. Entries that would
// overflow 64-bit are saturated; lookups of saturated entries throw.
class BinomialTable {
 public:
  BinomialTable() = default;
  explicit BinomialTable(int n_max, int k_max);

  std::uint64_t operator()(int n, int k) const;

  int n_max() const { return n_max_; }
  int k_max() const { return k_max_; }

 private:
  int n_max_ = -1;
  int k_max_ = -1;
  std::vector<std::uint64_t> cells_;
};

}  // namespace kvn
