#include "kvn/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <stdexcept>
#include <utility>

namespace kvn {

namespace {

bool finite(double v) { return std::isfinite(v); }

std::string fmt_name(const char* fmt, int a, int b = 0) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), fmt, a, b);
  return std::string(buf);
}

// Build an interaction from unordered (variable, coupling) pairs.
Interaction make_interaction(std::vector<std::pair<int, double>> entries) {
  std::sort(entries.begin(), entries.end());
  Interaction out;
  out.members.reserve(entries.size());
  out.couplings.reserve(entries.size());
  for (const auto& [var, alpha] : entries) {
    out.members.push_back(var);
    out.couplings.push_back(alpha);
  }
  return out;
}

void require_valid(const OdeSystem& sys, const char* what) {
  ValidationReport report = validate_system(sys);
  if (!report.ok) {
    throw std::invalid_argument(std::string(what) + " construction failed validation: " +
                                report.violations.front().rule + " (" +
                                report.violations.front().detail + ")");
  }
}

}  // namespace

// ---- transform descriptor ---------------------------------------------------

std::vector<double> TransformDescriptor::embed(std::span<const double> x,
                                               std::span<const double> xdot) const {
  std::vector<double> point;
  point.reserve(variables.size());
  auto site = [&](int j, std::span<const double> v) -> double {
    if (j < 0 || j >= static_cast<int>(v.size()))
      throw std::invalid_argument("embed: coordinate vector too short for transform");
    return v[j];
  };
  for (const VariableRole& role : variables) {
    switch (role.kind) {
      case VariableRole::Kind::kPosition:
        point.push_back(role.scale * site(role.site_j, x));
        break;
      case VariableRole::Kind::kPairDifference:
        point.push_back(role.scale * (site(role.site_j, x) - site(role.site_k, x)));
        break;
      case VariableRole::Kind::kSquare: {
        double v = site(role.site_j, x);
        point.push_back(role.scale * v * v);
        break;
      }
      case VariableRole::Kind::kPairSquare: {
        double d = site(role.site_j, x) - site(role.site_k, x);
        point.push_back(role.scale * d * d);
        break;
      }
      case VariableRole::Kind::kVelocity:
        point.push_back(role.scale * site(role.site_j, xdot));
        break;
      case VariableRole::Kind::kCos:
        point.push_back(std::cos(site(role.site_j, x)));
        break;
      case VariableRole::Kind::kSin:
        point.push_back(std::sin(site(role.site_j, x)));
        break;
      case VariableRole::Kind::kCosShift:
        point.push_back(-std::cos(site(role.site_j, x)));
        break;
      case VariableRole::Kind::kSinShift:
        point.push_back(-std::sin(site(role.site_j, x)));
        break;
    }
  }
  return point;
}

std::pair<std::vector<double>, std::vector<double>> TransformDescriptor::unembed(
    std::span<const double> point) const {
  if (point.size() != variables.size())
    throw std::invalid_argument("unembed: point length does not match transform");
  int n_sites = 0;
  for (const VariableRole& role : variables) {
    if (role.kind == VariableRole::Kind::kPosition ||
        role.kind == VariableRole::Kind::kVelocity) {
      n_sites = std::max(n_sites, role.site_j + 1);
    }
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> x(n_sites, nan);
  std::vector<double> xdot(n_sites, nan);
  for (std::size_t v = 0; v < variables.size(); ++v) {
    const VariableRole& role = variables[v];
    if (role.kind == VariableRole::Kind::kPosition) {
      x[role.site_j] = point[v] / role.scale;
    } else if (role.kind == VariableRole::Kind::kVelocity) {
      xdot[role.site_j] = point[v] / role.scale;
    }
  }
  for (int j = 0; j < n_sites; ++j) {
    if (std::isnan(x[j]) || std::isnan(xdot[j]))
      throw std::runtime_error("unembed: transform does not expose position and velocity for every site");
  }
  return {std::move(x), std::move(xdot)};
}

ObservableSpec TransformDescriptor::linear_observable(int variable) const {
  if (variable < 0 || variable >= static_cast<int>(variables.size()))
    throw std::invalid_argument("linear_observable: variable index out of range");
  ObservableSpec obs;
  obs.degree_cap = 1;
  ObservableTerm term;
  term.occupations[variable] = 1;
  term.coeff = 1.0;
  obs.terms.push_back(std::move(term));
  return obs;
}

// ---- coupled harmonic oscillators -------------------------------------------

std::pair<OdeSystem, TransformDescriptor> make_harmonic(const HarmonicSpec& spec) {
  const int n = static_cast<int>(spec.masses.size());
  if (n < 1) throw std::invalid_argument("harmonic spec needs at least one site");
  if (static_cast<int>(spec.kappa.size()) != n)
    throw std::invalid_argument("harmonic spec: spring matrix must be N x N");
  for (int j = 0; j < n; ++j) {
    if (!finite(spec.masses[j]) || spec.masses[j] <= 0.0)
      throw std::invalid_argument("harmonic spec: masses must be positive");
    if (static_cast<int>(spec.kappa[j].size()) != n)
      throw std::invalid_argument("harmonic spec: spring matrix must be N x N");
    if (!finite(spec.kappa[j][j]) || spec.kappa[j][j] <= 0.0)
      throw std::invalid_argument("harmonic spec: diagonal springs must be positive");
  }
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      double a = spec.kappa[j][k];
      double b = spec.kappa[k][j];
      if (!finite(a) || !finite(b) || a < 0.0 || b < 0.0)
        throw std::invalid_argument("harmonic spec: off-diagonal springs must be nonnegative");
      if (std::abs(a - b) > 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}))
        throw std::invalid_argument("harmonic spec: spring matrix must be symmetric");
    }
  }

  struct EdgeRef { int j, k; double kappa; };
  std::vector<EdgeRef> edges;
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k)
      if (spec.kappa[j][k] > 0.0) edges.push_back({j, k, spec.kappa[j][k]});
  const int n_edges = static_cast<int>(edges.size());

  auto idx_x = [&](int j) { return j; };
  auto idx_y = [&](int e) { return n + e; };
  auto idx_v = [&](int j) { return n + n_edges + j; };

  std::vector<Interaction> interactions;
  interactions.reserve(n + 2 * n_edges);
  for (int j = 0; j < n; ++j) {
    double a = std::sqrt(spec.kappa[j][j] / spec.masses[j]);
    interactions.push_back(make_interaction({{idx_x(j), +a}, {idx_v(j), -a}}));
  }
  for (int e = 0; e < n_edges; ++e) {
    const EdgeRef& edge = edges[e];
    double bj = std::sqrt(edge.kappa / spec.masses[edge.j]);
    double bk = std::sqrt(edge.kappa / spec.masses[edge.k]);
    interactions.push_back(make_interaction({{idx_y(e), +bj}, {idx_v(edge.j), -bj}}));
    interactions.push_back(make_interaction({{idx_y(e), -bk}, {idx_v(edge.k), +bk}}));
  }

  TransformDescriptor transform;
  transform.variables.resize(2 * n + n_edges);
  for (int j = 0; j < n; ++j) {
    transform.variables[idx_x(j)] = {VariableRole::Kind::kPosition, j, -1,
                                     std::sqrt(spec.kappa[j][j]), fmt_name("X%d", j + 1)};
    transform.variables[idx_v(j)] = {VariableRole::Kind::kVelocity, j, -1,
                                     std::sqrt(spec.masses[j]), fmt_name("V%d", j + 1)};
  }
  for (int e = 0; e < n_edges; ++e) {
    transform.variables[idx_y(e)] = {VariableRole::Kind::kPairDifference, edges[e].j,
                                     edges[e].k, std::sqrt(edges[e].kappa),
                                     fmt_name("Y%d_%d", edges[e].j + 1, edges[e].k + 1)};
  }

  OdeSystem sys(2 * n + n_edges, std::move(interactions));
  require_valid(sys, "harmonic");
  return {std::move(sys), std::move(transform)};
}

// ---- Duffing lattice ---------------------------------------------------------

std::pair<OdeSystem, TransformDescriptor> make_duffing(const DuffingSpec& spec) {
  const int n = static_cast<int>(spec.masses.size());
  if (n < 1) throw std::invalid_argument("duffing spec needs at least one site");
  if (static_cast<int>(spec.kappa.size()) != n || static_cast<int>(spec.lambda.size()) != n)
    throw std::invalid_argument("duffing spec: masses, kappa, lambda must have equal length");
  for (int j = 0; j < n; ++j) {
    if (!finite(spec.masses[j]) || spec.masses[j] <= 0.0 || !finite(spec.kappa[j]) ||
        spec.kappa[j] <= 0.0 || !finite(spec.lambda[j]) || spec.lambda[j] <= 0.0)
      throw std::invalid_argument("duffing spec: site parameters must be positive");
  }

  std::vector<DuffingSpec::Edge> edges = spec.edges;
  std::set<std::pair<int, int>> seen;
  for (DuffingSpec::Edge& edge : edges) {
    if (edge.j > edge.k) std::swap(edge.j, edge.k);
    if (edge.j < 0 || edge.k >= n || edge.j == edge.k)
      throw std::invalid_argument("duffing spec: edge endpoints out of range");
    if (!seen.insert({edge.j, edge.k}).second)
      throw std::invalid_argument("duffing spec: duplicate edge");
    if (!finite(edge.kappa) || edge.kappa <= 0.0 || !finite(edge.lambda) || edge.lambda <= 0.0)
      throw std::invalid_argument("duffing spec: edge parameters must be positive");
  }
  const int n_edges = static_cast<int>(edges.size());

  auto idx_x = [&](int j) { return j; };
  auto idx_y = [&](int j) { return n + j; };
  auto idx_xe = [&](int e) { return 2 * n + e; };
  auto idx_ye = [&](int e) { return 2 * n + n_edges + e; };
  auto idx_v = [&](int j) { return 2 * n + 2 * n_edges + j; };

  std::vector<Interaction> interactions;
  interactions.reserve(2 * n + 4 * n_edges);
  for (int j = 0; j < n; ++j) {
    double a = std::sqrt(spec.kappa[j] / spec.masses[j]);
    double b = 2.0 * std::sqrt(spec.lambda[j] / (spec.masses[j] * spec.kappa[j]));
    interactions.push_back(make_interaction({{idx_x(j), +a}, {idx_v(j), -a}}));
    interactions.push_back(
        make_interaction({{idx_x(j), 0.0}, {idx_y(j), +b}, {idx_v(j), -b}}));
  }
  for (int e = 0; e < n_edges; ++e) {
    const DuffingSpec::Edge& edge = edges[e];
    double pj = std::sqrt(edge.kappa / spec.masses[edge.j]);
    double pk = std::sqrt(edge.kappa / spec.masses[edge.k]);
    double qj = 2.0 * std::sqrt(edge.lambda / (spec.masses[edge.j] * edge.kappa));
    double qk = 2.0 * std::sqrt(edge.lambda / (spec.masses[edge.k] * edge.kappa));
    interactions.push_back(make_interaction({{idx_xe(e), +pj}, {idx_v(edge.j), -pj}}));
    interactions.push_back(make_interaction({{idx_xe(e), -pk}, {idx_v(edge.k), +pk}}));
    interactions.push_back(
        make_interaction({{idx_xe(e), 0.0}, {idx_ye(e), +qj}, {idx_v(edge.j), -qj}}));
    interactions.push_back(
        make_interaction({{idx_xe(e), 0.0}, {idx_ye(e), -qk}, {idx_v(edge.k), +qk}}));
  }

  TransformDescriptor transform;
  transform.variables.resize(3 * n + 2 * n_edges);
  for (int j = 0; j < n; ++j) {
    transform.variables[idx_x(j)] = {VariableRole::Kind::kPosition, j, -1,
                                     std::sqrt(spec.kappa[j]), fmt_name("X%d", j + 1)};
    transform.variables[idx_y(j)] = {VariableRole::Kind::kSquare, j, -1,
                                     std::sqrt(spec.lambda[j]), fmt_name("Y%d", j + 1)};
    transform.variables[idx_v(j)] = {VariableRole::Kind::kVelocity, j, -1,
                                     std::sqrt(spec.masses[j]), fmt_name("V%d", j + 1)};
  }
  for (int e = 0; e < n_edges; ++e) {
    transform.variables[idx_xe(e)] = {VariableRole::Kind::kPairDifference, edges[e].j,
                                      edges[e].k, std::sqrt(edges[e].kappa),
                                      fmt_name("X%d_%d", edges[e].j + 1, edges[e].k + 1)};
    transform.variables[idx_ye(e)] = {VariableRole::Kind::kPairSquare, edges[e].j,
                                      edges[e].k, std::sqrt(edges[e].lambda),
                                      fmt_name("Y%d_%d", edges[e].j + 1, edges[e].k + 1)};
  }

  OdeSystem sys(3 * n + 2 * n_edges, std::move(interactions));
  require_valid(sys, "duffing");
  return {std::move(sys), std::move(transform)};
}

// ---- Kuramoto ----------------------------------------------------------------

namespace {

void check_kuramoto_spec(const KuramotoSpec& spec) {
  const int n = static_cast<int>(spec.omega.size());
  if (n < 1) throw std::invalid_argument("kuramoto spec needs at least one oscillator");
  if (static_cast<int>(spec.theta0.size()) != n)
    throw std::invalid_argument("kuramoto spec: theta0 must match omega length");
  if (static_cast<int>(spec.neighbors.size()) != n)
    throw std::invalid_argument("kuramoto spec: neighbor list must match omega length");
  if (!finite(spec.coupling))
    throw std::invalid_argument("kuramoto spec: coupling must be finite");
  for (int i = 0; i < n; ++i) {
    if (!finite(spec.omega[i]) || !finite(spec.theta0[i]))
      throw std::invalid_argument("kuramoto spec: frequencies and phases must be finite");
    std::set<int> seen;
    for (int j : spec.neighbors[i]) {
      if (j < 0 || j >= n || j == i)
        throw std::invalid_argument("kuramoto spec: neighbor index out of range or reflexive");
      if (!seen.insert(j).second)
        throw std::invalid_argument("kuramoto spec: duplicate neighbor");
    }
  }
}

}  // namespace

KuramotoEmbedding make_kuramoto(const KuramotoSpec& spec) {
  check_kuramoto_spec(spec);
  const int n = static_cast<int>(spec.omega.size());
  auto vx = [](int i) { return 4 * i; };
  auto vy = [](int i) { return 4 * i + 1; };
  auto vz = [](int i) { return 4 * i + 2; };
  auto vw = [](int i) { return 4 * i + 3; };

  std::vector<Interaction> interactions;
  for (int i = 0; i < n; ++i) {
    double w = spec.omega[i];
    if (w != 0.0) {
      interactions.push_back(make_interaction({{vx(i), -w}, {vy(i), +w}}));
      interactions.push_back(make_interaction({{vz(i), -w}, {vw(i), +w}}));
    }
  }
  const double g = spec.coupling / static_cast<double>(n);
  if (g != 0.0) {
    for (int i = 0; i < n; ++i) {
      for (int j : spec.neighbors[i]) {
        interactions.push_back(make_interaction(
            {{vx(i), +g}, {vy(i), -g}, {vw(i), 0.0}, {vz(j), 0.0}}));
        interactions.push_back(make_interaction(
            {{vx(i), -g}, {vy(i), +g}, {vz(i), 0.0}, {vw(j), 0.0}}));
        interactions.push_back(make_interaction(
            {{vz(i), +g}, {vw(i), -g}, {vy(i), 0.0}, {vx(j), 0.0}}));
        interactions.push_back(make_interaction(
            {{vz(i), -g}, {vw(i), +g}, {vx(i), 0.0}, {vy(j), 0.0}}));
      }
    }
  }

  KuramotoEmbedding out{OdeSystem(4 * n, std::move(interactions)), {}, {}};
  require_valid(out.system, "kuramoto");

  out.transform.variables.resize(4 * n);
  out.x0.resize(4 * n);
  for (int i = 0; i < n; ++i) {
    out.transform.variables[vx(i)] = {VariableRole::Kind::kCos, i, -1, 1.0, fmt_name("x%d", i + 1)};
    out.transform.variables[vy(i)] = {VariableRole::Kind::kSin, i, -1, 1.0, fmt_name("y%d", i + 1)};
    out.transform.variables[vz(i)] = {VariableRole::Kind::kCosShift, i, -1, 1.0, fmt_name("z%d", i + 1)};
    out.transform.variables[vw(i)] = {VariableRole::Kind::kSinShift, i, -1, 1.0, fmt_name("w%d", i + 1)};
    out.x0[vx(i)] = std::cos(spec.theta0[i]);
    out.x0[vy(i)] = std::sin(spec.theta0[i]);
    out.x0[vz(i)] = -out.x0[vx(i)];
    out.x0[vw(i)] = -out.x0[vy(i)];
  }
  return out;
}

std::vector<std::vector<double>> kuramoto_phase_recover(const Trajectory& traj) {
  if (traj.points.empty())
    throw std::invalid_argument("phase recovery needs at least one sample");
  const int n_vars = static_cast<int>(traj.points.front().size());
  if (n_vars == 0 || n_vars % 4 != 0)
    throw std::invalid_argument("phase recovery expects 4N embedded variables");
  const int n = n_vars / 4;
  const double two_pi = 2.0 * M_PI;

  std::vector<std::vector<double>> phases(traj.points.size(), std::vector<double>(n));
  for (std::size_t s = 0; s < traj.points.size(); ++s) {
    const std::vector<double>& p = traj.points[s];
    for (int i = 0; i < n; ++i) {
      double cx = p[4 * i];
      double sy = p[4 * i + 1];
      if (cx * cx + sy * sy < 0.5) {
        throw std::runtime_error("phase recovery degenerate: x^2+y^2 < 0.5 at sample " +
                                 std::to_string(s) + ", oscillator " + std::to_string(i + 1));
      }
      double raw = std::atan2(sy, cx);
      if (s == 0) {
        phases[s][i] = raw;
      } else {
        double prev = phases[s - 1][i];
        phases[s][i] = prev + std::remainder(raw - prev, two_pi);
      }
    }
  }
  return phases;
}

std::vector<std::vector<double>> kuramoto_reference(const KuramotoSpec& spec,
                                                    double t_end, double rel_tol,
                                                    std::span<const double> t_grid) {
  check_kuramoto_spec(spec);
  if (!finite(t_end) || t_end < 0.0)
    throw std::invalid_argument("kuramoto reference: t_end must be nonnegative");
  const int n = static_cast<int>(spec.omega.size());
  const double g = spec.coupling / static_cast<double>(n);

  RhsFn rhs = [&spec, n, g](const std::vector<double>& theta, std::vector<double>& dtheta,
                            double) {
    for (int i = 0; i < n; ++i) {
      double drive = spec.omega[i];
      for (int j : spec.neighbors[i]) drive += g * std::sin(theta[j] - theta[i]);
      dtheta[i] = drive;
    }
  };

  std::vector<double> grid(t_grid.begin(), t_grid.end());
  if (grid.empty()) {
    grid.push_back(0.0);
    if (t_end > 0.0) grid.push_back(t_end);
  } else if (grid.back() > t_end * (1.0 + 1e-12)) {
    throw std::invalid_argument("kuramoto reference: grid extends past t_end");
  }
  Trajectory traj = integrate_adaptive_grid(rhs, spec.theta0, rel_tol, grid);
  return traj.points;
}

}  // namespace kvn
