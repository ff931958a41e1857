#include "kvn/binomial.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace kvn {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();
constexpr std::uint64_t kLimit = std::uint64_t{1} << 63;

}  // namespace

std::uint64_t binomial_checked(int n, int k) {
  if (n < 0 || k < 0) throw std::invalid_argument("binomial: negative argument");
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (r >= kLimit)
      throw std::overflow_error("binomial: C(" + std::to_string(n) + "," +
                                std::to_string(k) + ") exceeds 2^63");
  }
  return static_cast<std::uint64_t>(r);
}

bool binomial_fits(int n, int k) {
  try {
    binomial_checked(n, k);
    return true;
  } catch (const std::overflow_error&) {
    return false;
  }
}

BinomialTable::BinomialTable(int n_max, int k_max)
    : n_max_(n_max), k_max_(k_max) {
  if (n_max < 0 || k_max < 0)
    throw std::invalid_argument("BinomialTable: negative bound");
  cells_.assign(static_cast<std::size_t>(n_max + 1) * (k_max + 1), 0);
  for (int n = 0; n <= n_max; ++n) {
    auto* row = &cells_[static_cast<std::size_t>(n) * (k_max + 1)];
    row[0] = 1;
    if (n == 0) continue;
    const auto* prev = row - (k_max + 1);
    for (int k = 1; k <= k_max; ++k) {
      std::uint64_t a = prev[k];
      std::uint64_t b = prev[k - 1];
      if (a == kSaturated || b == kSaturated || a + b < a)
        row[k] = kSaturated;
      else
        row[k] = a + b;
    }
  }
}

std::uint64_t BinomialTable::operator()(int n, int k) const {
  if (n < 0) return 0;
  if (k < 0 || k > k_max_ || n > n_max_)
    throw std::out_of_range("BinomialTable: index out of range");
  std::uint64_t v = cells_[static_cast<std::size_t>(n) * (k_max_ + 1) + k];
  if (v == kSaturated) throw std::overflow_error("BinomialTable: saturated entry");
  return v;
}

}  // namespace kvn
