#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include "kvn/integrate.hpp"
#include "kvn/models.hpp"
#include "kvn/ode_system.hpp"
#include "kvn/random_systems.hpp"

using kvn::Interaction;
using kvn::OdeSystem;

namespace {

OdeSystem rotation() {
  return OdeSystem(2, {Interaction{{0, 1}, {1.0, -1.0}}});
}

bool has_rule(const kvn::ValidationReport& rep, const std::string& rule) {
  for (const auto& v : rep.violations)
    if (v.rule == rule) return true;
  return false;
}

}  // namespace

TEST_CASE("rotation system validates with the expected derived constants") {
  auto rep = kvn::validate_system(rotation());
  REQUIRE(rep.ok);
  CHECK(rep.violations.empty());
  CHECK(rep.degree == 2);
  CHECK(rep.membership == 1);
  CHECK(rep.coupling_max == 1.0);
}

TEST_CASE("zero-sum violations are reported under condition 3") {
  OdeSystem broken(2, {Interaction{{0, 1}, {1.0, -0.5}}});
  auto rep = kvn::validate_system(broken);
  CHECK(!rep.ok);
  CHECK(has_rule(rep, "condition 3"));

  OdeSystem all_zero(2, {Interaction{{0, 1}, {0.0, 0.0}}});
  rep = kvn::validate_system(all_zero);
  CHECK(!rep.ok);
  CHECK(has_rule(rep, "condition 3"));
}

TEST_CASE("coverage and membership structure violations") {
  OdeSystem uncovered(3, {Interaction{{0, 1}, {1.0, -1.0}}});
  auto rep = kvn::validate_system(uncovered);
  CHECK(!rep.ok);
  CHECK(has_rule(rep, "condition 2"));

  OdeSystem empty(2, {});
  rep = kvn::validate_system(empty);
  CHECK(!rep.ok);
  CHECK(has_rule(rep, "structure"));

  // couplings are keyed by the index set, so a repeated membership is
  // unrepresentable in the model even when each copy is zero-sum
  OdeSystem doubled(2, {Interaction{{0, 1}, {1.0, -1.0}},
                        Interaction{{0, 1}, {0.5, -0.5}}});
  rep = kvn::validate_system(doubled);
  CHECK(!rep.ok);
  CHECK(has_rule(rep, "structure"));
  bool mentioned = false;
  for (const auto& v : rep.violations)
    if (v.detail.find("more than once") != std::string::npos) mentioned = true;
  CHECK(mentioned);
}

TEST_CASE("member list structural violations fall under condition 1") {
  auto singleton = kvn::validate_system(OdeSystem(2, {Interaction{{0}, {0.0}},
                                                      Interaction{{0, 1}, {1.0, -1.0}}}));
  CHECK(has_rule(singleton, "condition 1"));

  auto dup = kvn::validate_system(OdeSystem(2, {Interaction{{1, 1}, {1.0, -1.0}},
                                                Interaction{{0, 1}, {1.0, -1.0}}}));
  CHECK(has_rule(dup, "condition 1"));

  auto unsorted = kvn::validate_system(OdeSystem(2, {Interaction{{1, 0}, {1.0, -1.0}}}));
  CHECK(has_rule(unsorted, "condition 1"));

  auto out_of_range = kvn::validate_system(OdeSystem(2, {Interaction{{0, 2}, {1.0, -1.0}},
                                                         Interaction{{0, 1}, {1.0, -1.0}}}));
  CHECK(has_rule(out_of_range, "condition 1"));
}

TEST_CASE("large set sizes only warn") {
  Interaction wide{{0, 1, 2, 3, 4, 5, 6}, {1.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0}};
  auto rep = kvn::validate_system(OdeSystem(7, {wide}));
  CHECK(rep.ok);
  CHECK(!rep.warnings.empty());
}

TEST_CASE("rhs of the rotation system") {
  OdeSystem sys = rotation();
  auto f = kvn::rhs(sys, std::vector<double>{1.0, 0.0});
  CHECK(f[0] == 0.0);
  CHECK(f[1] == -1.0);

  auto zero = kvn::rhs(sys, std::vector<double>{0.0, 0.0});
  CHECK(zero[0] == 0.0);
  CHECK(zero[1] == 0.0);

  CHECK_THROWS_AS(kvn::rhs(sys, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("rhs of the Kuramoto reduction matches the hand-expanded equations") {
  kvn::KuramotoSpec spec;
  spec.omega = {1.0, 1.3};
  spec.coupling = 0.5;
  spec.neighbors = {{1}, {0}};
  spec.theta0 = {0.0, 0.0};
  kvn::KuramotoEmbedding emb = kvn::make_kuramoto(spec);

  std::vector<double> x = emb.x0;
  // perturb so the cross terms are nonzero
  x[0] = 0.9;
  x[1] = 0.3;
  x[6] = -0.7;
  x[7] = -0.6;
  auto f = kvn::rhs(emb.system, x);

  const double g = spec.coupling / 2.0;
  for (int i = 0; i < 2; ++i) {
    int j = 1 - i;
    double xi = x[4 * i], yi = x[4 * i + 1], zi = x[4 * i + 2], wi = x[4 * i + 3];
    double xj = x[4 * j], yj = x[4 * j + 1], zj = x[4 * j + 2], wj = x[4 * j + 3];
    double fx = -spec.omega[i] * yi + g * yi * (wi * zj - zi * wj);
    double fy = spec.omega[i] * xi - g * xi * (wi * zj - zi * wj);
    double fz = -spec.omega[i] * wi + g * wi * (yi * xj - xi * yj);
    double fw = spec.omega[i] * zi - g * zi * (yi * xj - xi * yj);
    CHECK(f[4 * i] == doctest::Approx(fx).epsilon(1e-14));
    CHECK(f[4 * i + 1] == doctest::Approx(fy).epsilon(1e-14));
    CHECK(f[4 * i + 2] == doctest::Approx(fz).epsilon(1e-14));
    CHECK(f[4 * i + 3] == doctest::Approx(fw).epsilon(1e-14));
  }
}

TEST_CASE("weight drift vanishes exactly for zero-sum systems") {
  CHECK(kvn::weight_drift(rotation(), std::vector<double>{3.0, 4.0}) == 0.0);

  OdeSystem broken(2, {Interaction{{0, 1}, {1.0, -0.5}}});
  CHECK(kvn::weight_drift(broken, std::vector<double>{1.0, 1.0}) ==
        doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("seeded random systems validate and keep memberships distinct") {
  for (std::uint64_t seed = 100; seed < 400; ++seed) {
    OdeSystem sys = kvn::random_valid_system(seed, 6, 4);
    REQUIRE(kvn::validate_system(sys).ok);
    std::set<std::vector<int>> seen;
    for (const auto& s : sys.interactions())
      CHECK(seen.insert(s.members).second);
  }
}

TEST_CASE("weight drift stays at rounding level for random valid systems") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    OdeSystem sys = kvn::random_valid_system(seed, 6, 4);
    REQUIRE(kvn::validate_system(sys).ok);
    std::mt19937_64 rng(seed * 977);
    for (int rep = 0; rep < 50; ++rep) {
      std::vector<double> x(sys.n_vars());
      for (double& v : x) v = kvn::draw_real(rng, -2.0, 2.0);
      auto f = kvn::rhs(sys, x);
      double scale = 0.0;
      for (int i = 0; i < sys.n_vars(); ++i) scale += std::abs(x[i] * f[i]);
      double drift = kvn::weight_drift(sys, x);
      CHECK(std::abs(drift) <= 1e-12 * std::max(1.0, scale));
    }
  }
}

TEST_CASE("diagonal Jacobian entries vanish by construction") {
  for (std::uint64_t seed = 3; seed <= 8; ++seed) {
    OdeSystem sys = kvn::random_valid_system(seed, 5, 4);
    std::mt19937_64 rng(seed);
    std::vector<double> x(sys.n_vars());
    for (double& v : x) v = kvn::draw_real(rng, -1.5, 1.5);
    const double h = 1e-5;
    for (int i = 0; i < sys.n_vars(); ++i) {
      std::vector<double> xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      double diff = (kvn::rhs(sys, xp)[i] - kvn::rhs(sys, xm)[i]) / (2.0 * h);
      CHECK(std::abs(diff) <= 1e-8);
    }
  }
}

TEST_CASE("rescale scales couplings by set size and the point by delta") {
  kvn::KuramotoSpec spec;
  spec.omega = {1.0, 1.3};
  spec.coupling = 0.5;
  spec.neighbors = {{1}, {0}};
  spec.theta0 = {0.2, -0.4};
  kvn::KuramotoEmbedding emb = kvn::make_kuramoto(spec);

  auto [scaled, x0s] = kvn::rescale(emb.system, emb.x0, 2.0);
  REQUIRE(kvn::validate_system(scaled).ok);
  for (std::size_t i = 0; i < emb.x0.size(); ++i) CHECK(x0s[i] == 2.0 * emb.x0[i]);
  for (std::size_t p = 0; p < scaled.interactions().size(); ++p) {
    const auto& before = emb.system.interactions()[p];
    const auto& after = scaled.interactions()[p];
    double factor = before.members.size() == 2 ? 1.0 : 4.0;
    for (std::size_t s = 0; s < before.couplings.size(); ++s)
      CHECK(after.couplings[s] == before.couplings[s] / factor);
  }

  auto [back, x0b] = kvn::rescale(scaled, x0s, 0.5);
  for (std::size_t p = 0; p < back.interactions().size(); ++p) {
    const auto& orig = emb.system.interactions()[p];
    const auto& rt = back.interactions()[p];
    for (std::size_t s = 0; s < orig.couplings.size(); ++s)
      CHECK(rt.couplings[s] == doctest::Approx(orig.couplings[s]).epsilon(1e-12));
  }
  for (std::size_t i = 0; i < emb.x0.size(); ++i)
    CHECK(x0b[i] == doctest::Approx(emb.x0[i]).epsilon(1e-12));

  CHECK_THROWS_AS(kvn::rescale(emb.system, emb.x0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(kvn::rescale(emb.system, emb.x0, -1.0), std::invalid_argument);
}

TEST_CASE("rescaled trajectories are delta times the original") {
  kvn::KuramotoSpec spec;
  spec.omega = {1.0, 0.7};
  spec.coupling = 0.8;
  spec.neighbors = {{1}, {0}};
  spec.theta0 = {0.5, -0.1};
  kvn::KuramotoEmbedding emb = kvn::make_kuramoto(spec);

  const double delta = 1.7;
  auto [scaled, x0s] = kvn::rescale(emb.system, emb.x0, delta);
  auto base = kvn::integrate_reference(emb.system, emb.x0, 3.0, 1e-10);
  auto alt = kvn::integrate_reference(scaled, x0s, 3.0, 1e-10);
  REQUIRE(base.points.size() == alt.points.size());
  for (std::size_t k = 0; k < base.points.size(); ++k) {
    for (std::size_t i = 0; i < base.points[k].size(); ++i)
      CHECK(alt.points[k][i] == doctest::Approx(delta * base.points[k][i]).epsilon(1e-8));
  }
}

TEST_CASE("reference integration of the rotation system") {
  auto traj = kvn::integrate_reference(rotation(), std::vector<double>{1.0, 0.0}, M_PI_2,
                                       1e-10, std::vector<double>{0.0, M_PI_4, M_PI_2});
  REQUIRE(traj.points.size() == 3);
  CHECK(std::abs(traj.points[2][0]) <= 1e-9);
  CHECK(traj.points[2][1] == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(traj.conserved_drift <= 10.0 * 1e-10);

  auto still = kvn::integrate_reference(rotation(), std::vector<double>{1.0, 0.0}, 0.0, 1e-9);
  REQUIRE(still.points.size() == 1);
  CHECK(still.points[0][0] == 1.0);
}

TEST_CASE("conserved two-norm drift stays within the tolerance budget") {
  for (std::uint64_t seed = 11; seed <= 16; ++seed) {
    OdeSystem sys = kvn::random_valid_system(seed, 5, 4);
    auto x0 = kvn::random_initial_point(seed, sys.n_vars(), 1.0);
    auto traj = kvn::integrate_reference(sys, x0, 4.0, 1e-10);
    CHECK(traj.conserved_drift <= 10.0 * 1e-10);
  }
}

TEST_CASE("integration argument and failure modes") {
  OdeSystem sys = rotation();
  std::vector<double> x0{1.0, 0.0};
  CHECK_THROWS_AS(kvn::integrate_reference(sys, x0, 1.0, 1e-15), std::invalid_argument);
  CHECK_THROWS_AS(kvn::integrate_reference(sys, x0, 1.0, 1e-2), std::invalid_argument);
  CHECK_THROWS_AS(kvn::integrate_reference(sys, x0, -1.0, 1e-9), std::invalid_argument);
  CHECK_THROWS_AS(
      kvn::integrate_reference(sys, x0, 1.0, 1e-9, std::vector<double>{0.0, 2.0}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      kvn::integrate_reference(sys, x0, 1.0, 1e-9, std::vector<double>{0.5, 1.0}),
      std::invalid_argument);

  // frequency 1e8 over a 1e12 span: the accepted step would underflow the
  // relative floor, which is reported as stiffness
  OdeSystem fast(2, {Interaction{{0, 1}, {1e8, -1e8}}});
  CHECK_THROWS_AS(kvn::integrate_reference(fast, x0, 1e12, 1e-10), std::runtime_error);

  // zero-sum broken on purpose: exponential growth to overflow
  OdeSystem growing(2, {Interaction{{0, 1}, {40.0, 40.0}}});
  CHECK_THROWS_AS(kvn::integrate_reference(growing, std::vector<double>{1e300, 1e300}, 50.0,
                                           1e-8),
                  std::runtime_error);
}

TEST_CASE("constructor rejects malformed shapes outright") {
  CHECK_THROWS_AS(OdeSystem(0, {}), std::invalid_argument);
  CHECK_THROWS_AS(OdeSystem(2, {Interaction{{0, 1}, {1.0}}}), std::invalid_argument);
}
