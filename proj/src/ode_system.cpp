#include "kvn/ode_system.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace kvn {

namespace {

std::string set_label(const Interaction& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.members.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s.members[i] + 1);
  }
  out += "}";
  return out;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

OdeSystem::OdeSystem(int n_vars, std::vector<Interaction> interactions)
    : n_vars_(n_vars), interactions_(std::move(interactions)) {
  if (n_vars_ < 1) throw std::invalid_argument("OdeSystem: need at least one variable");
  std::vector<int> counts(static_cast<std::size_t>(n_vars_), 0);
  for (const auto& s : interactions_) {
    if (s.couplings.size() != s.members.size())
      throw std::invalid_argument("OdeSystem: couplings and members differ in length");
    degree_ = std::max(degree_, static_cast<int>(s.members.size()));
    for (std::size_t t = 0; t < s.members.size(); ++t) {
      int v = s.members[t];
      if (v >= 0 && v < n_vars_) ++counts[static_cast<std::size_t>(v)];
      coupling_max_ = std::max(coupling_max_, std::abs(s.couplings[t]));
    }
  }
  if (!counts.empty())
    membership_ = *std::max_element(counts.begin(), counts.end());
}

ValidationReport validate_system(const OdeSystem& sys) {
  ValidationReport rep;
  auto& bad = rep.violations;

  if (sys.interactions().empty())
    bad.push_back({"structure", "system has no interactions"});

  std::vector<int> coverage(static_cast<std::size_t>(sys.n_vars()), 0);
  for (const auto& s : sys.interactions()) {
    const auto label = set_label(s);
    if (s.members.size() < 2)
      bad.push_back({"condition 1", "interaction " + label + ": fewer than 2 members"});
    bool in_range = true;
    for (int v : s.members) {
      if (v < 0 || v >= sys.n_vars()) {
        bad.push_back({"condition 1", "interaction " + label + ": member " +
                                          std::to_string(v + 1) + " outside [1," +
                                          std::to_string(sys.n_vars()) + "]"});
        in_range = false;
      }
    }
    for (std::size_t t = 1; t < s.members.size(); ++t) {
      if (s.members[t] <= s.members[t - 1]) {
        bad.push_back({"condition 1",
                       "interaction " + label + ": members not strictly ascending"});
        break;
      }
    }
    if (in_range)
      for (int v : s.members) ++coverage[static_cast<std::size_t>(v)];

    double sum = 0.0;
    bool any_nonzero = false;
    for (double a : s.couplings) {
      sum += a;
      if (a != 0.0) any_nonzero = true;
    }
    if (!any_nonzero)
      bad.push_back({"condition 3", "interaction " + label + ": all couplings zero"});
    else if (std::abs(sum) > kCouplingSumTol)
      bad.push_back({"condition 3",
                     "interaction " + label + ": sum(alpha) = " + num(sum) + " != 0"});
  }

  for (int v = 0; v < sys.n_vars(); ++v) {
    if (coverage[static_cast<std::size_t>(v)] == 0)
      bad.push_back({"condition 2",
                     "variable " + std::to_string(v + 1) + " in no interaction"});
  }

  // the family is a set of index sets: couplings are keyed by the set itself,
  // so a membership may appear only once
  {
    std::vector<std::vector<int>> seen;
    for (const auto& s : sys.interactions()) {
      if (std::find(seen.begin(), seen.end(), s.members) != seen.end())
        bad.push_back({"structure",
                       "interaction " + set_label(s) + ": membership appears more than once"});
      else
        seen.push_back(s.members);
    }
  }

  rep.ok = bad.empty();
  rep.degree = sys.degree();
  rep.membership = sys.membership();
  rep.coupling_max = sys.coupling_max();
  if (rep.ok && rep.degree > 6)
    rep.warnings.push_back("degree " + std::to_string(rep.degree) +
                           " exceeds 6; truncation sizes grow very quickly");
  return rep;
}

std::vector<double> rhs(const OdeSystem& sys, std::span<const double> x) {
  if (static_cast<int>(x.size()) != sys.n_vars())
    throw std::invalid_argument("rhs: point dimension mismatch");
  std::vector<double> f(x.size(), 0.0);
  for (const auto& s : sys.interactions()) {
    for (int v : s.members)
      if (v < 0 || v >= sys.n_vars())
        throw std::invalid_argument("rhs: interaction member outside variable range");
    // full product over the set, then divide the slot variable back out;
    // falls back to an explicit partial product when some member is zero
    double full = 1.0;
    int zeros = 0;
    for (int v : s.members) {
      double xv = x[static_cast<std::size_t>(v)];
      if (xv == 0.0)
        ++zeros;
      else
        full *= xv;
    }
    for (std::size_t t = 0; t < s.members.size(); ++t) {
      double a = s.couplings[t];
      if (a == 0.0) continue;
      int vi = s.members[t];
      double xi = x[static_cast<std::size_t>(vi)];
      double prod;
      if (zeros == 0) {
        prod = 1.0;
        for (int v : s.members)
          if (v != vi) prod *= x[static_cast<std::size_t>(v)];
      } else if (zeros == 1 && xi == 0.0) {
        prod = full;
      } else {
        prod = 0.0;
      }
      f[static_cast<std::size_t>(vi)] += a * prod;
    }
  }
  return f;
}

double weight_drift(const OdeSystem& sys, std::span<const double> x) {
  auto f = rhs(sys, x);
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += x[i] * f[i];
  return acc;
}

std::pair<OdeSystem, std::vector<double>> rescale(const OdeSystem& sys,
                                                  std::span<const double> x0,
                                                  double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw std::invalid_argument("rescale: delta must be positive and finite");
  if (static_cast<int>(x0.size()) != sys.n_vars())
    throw std::invalid_argument("rescale: x0 dimension mismatch");
  std::vector<Interaction> scaled = sys.interactions();
  for (auto& s : scaled) {
    int k = static_cast<int>(s.members.size()) - 2;
    if (k <= 0) continue;
    double div = std::pow(delta, k);
    for (auto& a : s.couplings) a /= div;
  }
  std::vector<double> y0(x0.begin(), x0.end());
  for (auto& v : y0) v *= delta;
  return {OdeSystem(sys.n_vars(), std::move(scaled)), std::move(y0)};
}

}  // namespace kvn
