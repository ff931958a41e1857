#include "kvn/json_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <json.hpp>

namespace kvn {

namespace {

using nlohmann::json;

json parse_file(const std::string& path) {
  return json::parse(read_text_file(path));
}

int to_zero_based(const json& value, int n_vars, const char* what) {
  if (!value.is_number_integer())
    throw std::invalid_argument(std::string(what) + ": variable index must be an integer");
  long long v = value.get<long long>();
  if (v < 1 || v > n_vars)
    throw std::invalid_argument(std::string(what) + ": variable index " + std::to_string(v) +
                                " outside 1.." + std::to_string(n_vars));
  return static_cast<int>(v - 1);
}

int key_to_zero_based(const std::string& key, int n_vars, const char* what) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(key, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string(what) + ": key '" + key +
                                "' is not a variable index");
  }
  if (used != key.size())
    throw std::invalid_argument(std::string(what) + ": key '" + key +
                                "' is not a variable index");
  if (v < 1 || v > n_vars)
    throw std::invalid_argument(std::string(what) + ": variable index " + std::to_string(v) +
                                " outside 1.." + std::to_string(n_vars));
  return static_cast<int>(v - 1);
}

std::vector<double> read_double_array(const json& arr, const char* what) {
  if (!arr.is_array())
    throw std::invalid_argument(std::string(what) + ": expected an array of numbers");
  std::vector<double> out;
  out.reserve(arr.size());
  for (const json& v : arr) {
    if (!v.is_number())
      throw std::invalid_argument(std::string(what) + ": expected an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write failed for " + path);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char byte : data) {
    hash ^= byte;
    hash *= 1099511628211ULL;
  }
  return hash;
}

// ---- system files ------------------------------------------------------------

SystemFile load_system_json(const std::string& path) {
  json j = parse_file(path);
  if (!j.is_object() || !j.contains("N") || !j.contains("interactions"))
    throw std::invalid_argument(path + ": system file needs \"N\" and \"interactions\"");
  if (!j["N"].is_number_integer())
    throw std::invalid_argument(path + ": \"N\" must be an integer");
  const int n_vars = j["N"].get<int>();
  if (n_vars < 1) throw std::invalid_argument(path + ": \"N\" must be >= 1");
  if (!j["interactions"].is_array())
    throw std::invalid_argument(path + ": \"interactions\" must be an array");

  std::vector<Interaction> interactions;
  interactions.reserve(j["interactions"].size());
  for (const json& entry : j["interactions"]) {
    if (!entry.is_object() || !entry.contains("vars") || !entry.contains("alpha"))
      throw std::invalid_argument(path + ": interaction needs \"vars\" and \"alpha\"");
    if (!entry["vars"].is_array() || !entry["alpha"].is_object())
      throw std::invalid_argument(path + ": \"vars\" must be an array, \"alpha\" an object");

    std::vector<std::pair<int, double>> members;
    members.reserve(entry["vars"].size());
    for (const json& v : entry["vars"])
      members.emplace_back(to_zero_based(v, n_vars, "interaction vars"), 0.0);
    std::sort(members.begin(), members.end());

    for (const auto& [key, value] : entry["alpha"].items()) {
      int var = key_to_zero_based(key, n_vars, "interaction alpha");
      if (!value.is_number())
        throw std::invalid_argument(path + ": coupling values must be numbers");
      auto it = std::lower_bound(members.begin(), members.end(),
                                 std::make_pair(var, -1.0));
      if (it == members.end() || it->first != var)
        throw std::invalid_argument(path + ": alpha key " + key +
                                    " is not a member of \"vars\"");
      it->second = value.get<double>();
    }

    Interaction p;
    p.members.reserve(members.size());
    p.couplings.reserve(members.size());
    for (const auto& [var, alpha] : members) {
      p.members.push_back(var);
      p.couplings.push_back(alpha);
    }
    interactions.push_back(std::move(p));
  }

  SystemFile out{OdeSystem(n_vars, std::move(interactions)), {}};
  if (j.contains("x0")) {
    out.x0 = read_double_array(j["x0"], "x0");
    if (static_cast<int>(out.x0.size()) != n_vars)
      throw std::invalid_argument(path + ": \"x0\" length must equal N");
  }
  return out;
}

void save_system_json(const std::string& path, const OdeSystem& sys,
                      std::span<const double> x0) {
  json j;
  j["N"] = sys.n_vars();
  json list = json::array();
  for (const Interaction& p : sys.interactions()) {
    json entry;
    json vars = json::array();
    json alpha = json::object();
    for (std::size_t i = 0; i < p.members.size(); ++i) {
      int file_index = p.members[i] + 1;
      vars.push_back(file_index);
      alpha[std::to_string(file_index)] = p.couplings[i];
    }
    entry["vars"] = std::move(vars);
    entry["alpha"] = std::move(alpha);
    list.push_back(std::move(entry));
  }
  j["interactions"] = std::move(list);
  if (!x0.empty()) {
    if (static_cast<int>(x0.size()) != sys.n_vars())
      throw std::invalid_argument("save_system_json: x0 length must equal N");
    j["x0"] = std::vector<double>(x0.begin(), x0.end());
  }
  write_text_file(path, j.dump(2) + "\n");
}

// ---- observable files ----------------------------------------------------------

ObservableSpec load_observable_json(const std::string& path) {
  json j = parse_file(path);
  if (!j.is_object() || !j.contains("b") || !j.contains("terms"))
    throw std::invalid_argument(path + ": observable file needs \"b\" and \"terms\"");
  if (!j["b"].is_number_integer() || j["b"].get<int>() < 1)
    throw std::invalid_argument(path + ": \"b\" must be a positive integer");
  if (!j["terms"].is_array())
    throw std::invalid_argument(path + ": \"terms\" must be an array");

  ObservableSpec obs;
  obs.degree_cap = j["b"].get<int>();
  for (const json& entry : j["terms"]) {
    if (!entry.is_object() || !entry.contains("occ") || !entry.contains("coeff"))
      throw std::invalid_argument(path + ": term needs \"occ\" and \"coeff\"");
    if (!entry["occ"].is_object() || !entry["coeff"].is_number())
      throw std::invalid_argument(path + ": \"occ\" must be an object, \"coeff\" a number");
    ObservableTerm term;
    term.coeff = entry["coeff"].get<double>();
    for (const auto& [key, value] : entry["occ"].items()) {
      // variable count unknown here; accept any positive index and let
      // check_observable enforce the range against a concrete system
      int var = key_to_zero_based(key, std::numeric_limits<int>::max(), "term occ");
      if (!value.is_number_integer() || value.get<int>() < 1)
        throw std::invalid_argument(path + ": occupation counts must be positive integers");
      term.occupations[var] = value.get<int>();
    }
    obs.terms.push_back(std::move(term));
  }
  return obs;
}

void save_observable_json(const std::string& path, const ObservableSpec& obs) {
  json j;
  j["b"] = obs.degree_cap;
  json terms = json::array();
  for (const ObservableTerm& term : obs.terms) {
    json occ = json::object();
    for (const auto& [var, count] : term.occupations)
      occ[std::to_string(var + 1)] = count;
    terms.push_back(json{{"occ", std::move(occ)}, {"coeff", term.coeff}});
  }
  j["terms"] = std::move(terms);
  write_text_file(path, j.dump(2) + "\n");
}

// ---- model parameter files ------------------------------------------------------

HarmonicSpec load_harmonic_spec(const std::string& path) {
  json j = parse_file(path);
  if (!j.is_object() || !j.contains("masses") || !j.contains("kappa"))
    throw std::invalid_argument(path + ": harmonic spec needs \"masses\" and \"kappa\"");
  HarmonicSpec spec;
  spec.masses = read_double_array(j["masses"], "masses");
  if (!j["kappa"].is_array())
    throw std::invalid_argument(path + ": \"kappa\" must be a matrix (array of rows)");
  for (const json& row : j["kappa"])
    spec.kappa.push_back(read_double_array(row, "kappa row"));
  return spec;
}

DuffingSpec load_duffing_spec(const std::string& path) {
  json j = parse_file(path);
  if (!j.is_object() || !j.contains("masses") || !j.contains("kappa") ||
      !j.contains("lambda"))
    throw std::invalid_argument(path +
                                ": duffing spec needs \"masses\", \"kappa\", \"lambda\"");
  DuffingSpec spec;
  spec.masses = read_double_array(j["masses"], "masses");
  spec.kappa = read_double_array(j["kappa"], "kappa");
  spec.lambda = read_double_array(j["lambda"], "lambda");
  if (j.contains("edges")) {
    if (!j["edges"].is_array())
      throw std::invalid_argument(path + ": \"edges\" must be an array");
    const int n = static_cast<int>(spec.masses.size());
    for (const json& e : j["edges"]) {
      if (!e.is_object() || !e.contains("j") || !e.contains("k") || !e.contains("kappa") ||
          !e.contains("lambda"))
        throw std::invalid_argument(path + ": edge needs \"j\", \"k\", \"kappa\", \"lambda\"");
      DuffingSpec::Edge edge;
      edge.j = to_zero_based(e["j"], n, "edge j");
      edge.k = to_zero_based(e["k"], n, "edge k");
      if (!e["kappa"].is_number() || !e["lambda"].is_number())
        throw std::invalid_argument(path + ": edge parameters must be numbers");
      edge.kappa = e["kappa"].get<double>();
      edge.lambda = e["lambda"].get<double>();
      spec.edges.push_back(edge);
    }
  }
  return spec;
}

KuramotoSpec load_kuramoto_spec(const std::string& path) {
  json j = parse_file(path);
  if (!j.is_object() || !j.contains("omega") || !j.contains("K") ||
      !j.contains("neighbors") || !j.contains("theta0"))
    throw std::invalid_argument(
        path + ": kuramoto spec needs \"omega\", \"K\", \"neighbors\", \"theta0\"");
  KuramotoSpec spec;
  spec.omega = read_double_array(j["omega"], "omega");
  if (!j["K"].is_number())
    throw std::invalid_argument(path + ": \"K\" must be a number");
  spec.coupling = j["K"].get<double>();
  spec.theta0 = read_double_array(j["theta0"], "theta0");
  if (!j["neighbors"].is_array())
    throw std::invalid_argument(path + ": \"neighbors\" must be an array of arrays");
  const int n = static_cast<int>(spec.omega.size());
  for (const json& row : j["neighbors"]) {
    if (!row.is_array())
      throw std::invalid_argument(path + ": \"neighbors\" must be an array of arrays");
    std::vector<int> entry;
    for (const json& v : row) entry.push_back(to_zero_based(v, n, "neighbor"));
    spec.neighbors.push_back(std::move(entry));
  }
  return spec;
}

}  // namespace kvn
