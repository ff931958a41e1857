#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "kvn/ode_system.hpp"

namespace kvn {

// Deterministic draws built from raw mt19937_64 output. std::uniform_*
// distributions are implementation-defined, so certificate batches avoid them
// to keep seeded runs byte-identical across standard libraries.
int draw_int(std::mt19937_64& rng, int lo, int hi);
double draw_unit(std::mt19937_64& rng);                      // [0, 1)
double draw_real(std::mt19937_64& rng, double lo, double hi);

// Random system satisfying the structural conditions exactly: member sets of
// size 2..d_max covering every variable, couplings summing to zero in exact
// floating point (the last member absorbs the negated running sum).
OdeSystem random_valid_system(std::uint64_t seed, int n_max, int d_max);

std::vector<double> random_initial_point(std::uint64_t seed, int n_vars, double radius);

}  // namespace kvn
