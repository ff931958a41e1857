#include "kvn/random_systems.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace kvn {

int draw_int(std::mt19937_64& rng, int lo, int hi) {
  if (hi < lo) throw std::invalid_argument("draw_int: empty range");
  std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  return lo + static_cast<int>(rng() % span);
}

double draw_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double draw_real(std::mt19937_64& rng, double lo, double hi) {
  return lo + draw_unit(rng) * (hi - lo);
}

namespace {

// Coupling vector with an exactly zero left-to-right sum; at least one entry
// stays nonzero and interior zeros appear occasionally.
std::vector<double> zero_sum_couplings(std::mt19937_64& rng, int size) {
  std::vector<double> alpha(size);
  for (int i = 0; i + 1 < size; ++i) {
    double magnitude = draw_real(rng, 0.1, 1.5);
    alpha[i] = (rng() & 1) ? magnitude : -magnitude;
  }
  if (size >= 3 && draw_int(rng, 0, 3) == 0) alpha[draw_int(rng, 0, size - 2)] = 0.0;
  double running = 0.0;
  for (int i = 0; i + 1 < size; ++i) running += alpha[i];
  alpha[size - 1] = -running;
  bool live = std::any_of(alpha.begin(), alpha.end(), [](double a) { return a != 0.0; });
  if (!live) {
    alpha[0] = 1.0;
    alpha[size - 1] = -1.0;
  }
  return alpha;
}

Interaction make_set(std::mt19937_64& rng, std::vector<int> members) {
  std::sort(members.begin(), members.end());
  Interaction p;
  p.couplings = zero_sum_couplings(rng, static_cast<int>(members.size()));
  p.members = std::move(members);
  return p;
}

}  // namespace

OdeSystem random_valid_system(std::uint64_t seed, int n_max, int d_max) {
  if (n_max < 2 || d_max < 2)
    throw std::invalid_argument("random_valid_system: need n_max >= 2 and d_max >= 2");
  std::mt19937_64 rng(seed);
  const int n = draw_int(rng, 2, n_max);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int i = n - 1; i > 0; --i) std::swap(order[i], order[draw_int(rng, 0, i)]);

  // Covering pass: chop the shuffled variables into contiguous sets; a
  // stranded final variable is paired with a random earlier one.
  std::vector<Interaction> interactions;
  std::size_t next = 0;
  while (next < order.size()) {
    int remaining = static_cast<int>(order.size() - next);
    if (remaining == 1) {
      interactions.push_back(make_set(rng, {order[next], order[0]}));
      ++next;
      continue;
    }
    int size = draw_int(rng, 2, std::min(d_max, remaining));
    if (remaining - size == 1 && size > 2) --size;  // avoid stranding one variable
    std::vector<int> members(order.begin() + next, order.begin() + next + size);
    interactions.push_back(make_set(rng, std::move(members)));
    next += size;
  }

  // memberships must stay distinct (couplings are keyed by the set), so an
  // extra that re-draws an existing set is dropped
  auto membership_taken = [&interactions](const std::vector<int>& members) {
    return std::any_of(interactions.begin(), interactions.end(),
                       [&members](const Interaction& s) { return s.members == members; });
  };
  const int extras = draw_int(rng, 0, 3);
  for (int e = 0; e < extras; ++e) {
    int size = draw_int(rng, 2, std::min(d_max, n));
    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < size; ++i)
      std::swap(pool[i], pool[draw_int(rng, i, n - 1)]);
    pool.resize(size);
    std::sort(pool.begin(), pool.end());
    if (membership_taken(pool)) continue;
    interactions.push_back(make_set(rng, std::move(pool)));
  }

  return OdeSystem(n, std::move(interactions));
}

std::vector<double> random_initial_point(std::uint64_t seed, int n_vars, double radius) {
  if (n_vars < 1 || !(radius > 0.0))
    throw std::invalid_argument("random_initial_point: bad arguments");
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<double> x(n_vars);
  for (double& v : x) v = draw_real(rng, -radius, radius);
  return x;
}

}  // namespace kvn
