#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kvn/fock_basis.hpp"
#include "kvn/models.hpp"
#include "kvn/ode_system.hpp"

namespace kvn {

// System files:
//   {"N": int, "interactions": [{"vars": [int,...], "alpha": {"<var>": float}}]}
// Variable indices are 1-based on disk and 0-based in memory. A "x0" array may
// carry an initial point alongside the system (model subcommand emits one).
struct SystemFile {
  OdeSystem system;
  std::vector<double> x0;   // empty when the file has no initial point
};

SystemFile load_system_json(const std::string& path);
void save_system_json(const std::string& path, const OdeSystem& sys,
                      std::span<const double> x0 = {});

// Observable files: {"b": int, "terms": [{"occ": {"<var>": int}, "coeff": float}]}
ObservableSpec load_observable_json(const std::string& path);
void save_observable_json(const std::string& path, const ObservableSpec& obs);

// Model parameter files mirror the *Spec structs; site indices 1-based on disk.
HarmonicSpec load_harmonic_spec(const std::string& path);
DuffingSpec load_duffing_spec(const std::string& path);
KuramotoSpec load_kuramoto_spec(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

// Shortest round-trip decimal, fixed "%.17g" rendering for CSV cells.
std::string format_double(double v);

std::uint64_t fnv1a64(std::string_view data);

}  // namespace kvn
