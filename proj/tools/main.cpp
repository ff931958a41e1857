// kvnsim: build, evolve, and certify occupation-truncated embeddings of
// zero-divergence polynomial ODE systems.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kvn/binomial.hpp"
#include "kvn/estimator.hpp"
#include "kvn/evolution.hpp"
#include "kvn/fock_basis.hpp"
#include "kvn/hamiltonian.hpp"
#include "kvn/json_io.hpp"
#include "kvn/models.hpp"
#include "kvn/ode_system.hpp"
#include "kvn/random_systems.hpp"

namespace {

constexpr const char* kToolVersion = "0.1.0";

using nlohmann::json;

struct ManifestLog {
  bool enabled = false;
  std::string path;
  std::vector<std::string> command;
  json inputs = json::object();
  json outputs = json::object();

  static std::string digest(std::string_view data) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                  static_cast<unsigned long long>(kvn::fnv1a64(data)));
    return std::string(buf);
  }
  void input_file(const std::string& file) {
    if (enabled) inputs[file] = digest(kvn::read_text_file(file));
  }
  void output_text(const std::string& file, std::string_view content) {
    if (enabled) outputs[file] = digest(content);
  }
  void output_file(const std::string& file) {
    if (enabled) outputs[file] = digest(kvn::read_text_file(file));
  }
  void write() const {
    if (!enabled) return;
    json j;
    j["tool"] = "kvnsim";
    j["version"] = kToolVersion;
    j["command"] = command;
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    kvn::write_text_file(path, j.dump(2) + "\n");
  }
};

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    std::size_t used = 0;
    double v = std::stod(cell, &used);
    while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
    if (used != cell.size()) throw std::invalid_argument("bad number in list: '" + cell + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty numeric list");
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_double_list(text)) {
    int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
      throw std::invalid_argument("expected integers in list");
    out.push_back(i);
  }
  return out;
}

kvn::SystemFile load_system(const std::string& path, ManifestLog& log) {
  kvn::SystemFile file = kvn::load_system_json(path);
  log.input_file(path);
  return file;
}

void require_valid(const kvn::OdeSystem& sys) {
  kvn::ValidationReport report = kvn::validate_system(sys);
  if (!report.ok) {
    throw std::invalid_argument("system fails validation: " + report.violations.front().rule +
                                " (" + report.violations.front().detail + ")");
  }
}

std::vector<double> resolve_x0(const std::string& flag_value, const kvn::SystemFile& file) {
  std::vector<double> x0 = flag_value.empty() ? file.x0 : parse_double_list(flag_value);
  if (x0.empty())
    throw std::invalid_argument(
        "no initial point: pass --x0 or use a system file with an embedded one");
  if (static_cast<int>(x0.size()) != file.system.n_vars())
    throw std::invalid_argument("initial point length does not match N");
  return x0;
}

kvn::ObservableSpec load_observable(const std::string& path, int n_vars, ManifestLog& log) {
  kvn::ObservableSpec obs = kvn::load_observable_json(path);
  log.input_file(path);
  kvn::check_observable(obs, n_vars);
  return obs;
}

// CSV text goes to --out when given, otherwise to stdout; the summary line is
// only printed when the table went to a file.
void deliver(const std::string& out_path, const std::string& csv, const std::string& summary,
             ManifestLog& log) {
  if (out_path.empty()) {
    std::cout << csv;
  } else {
    kvn::write_text_file(out_path, csv);
    log.output_text(out_path, csv);
    if (!summary.empty()) std::cout << summary << "\n";
  }
}

std::string fd(double v) { return kvn::format_double(v); }

// ---- subcommand bodies -------------------------------------------------------

struct ValidateArgs {
  std::string system_path;
};

int run_validate(const ValidateArgs& a, ManifestLog& log) {
  kvn::SystemFile file = load_system(a.system_path, log);
  kvn::ValidationReport report = kvn::validate_system(file.system);
  for (const std::string& w : report.warnings) std::cout << "warning: " << w << "\n";
  if (!report.ok) {
    for (const kvn::ValidationIssue& v : report.violations)
      std::cout << "violation [" << v.rule << "]: " << v.detail << "\n";
    return 1;
  }
  std::cout << "ok N=" << file.system.n_vars() << " interactions="
            << file.system.interactions().size() << " d=" << report.degree
            << " c=" << report.membership << " eta=" << fd(report.coupling_max) << "\n";
  return 0;
}

struct ModelArgs {
  std::string kind;
  std::string spec_path;
  std::string out_path;
};

int run_model(const ModelArgs& a, ManifestLog& log) {
  kvn::OdeSystem sys(1, {});
  std::vector<double> x0;
  if (a.kind == "harmonic") {
    kvn::HarmonicSpec spec = kvn::load_harmonic_spec(a.spec_path);
    sys = kvn::make_harmonic(spec).first;
  } else if (a.kind == "duffing") {
    kvn::DuffingSpec spec = kvn::load_duffing_spec(a.spec_path);
    sys = kvn::make_duffing(spec).first;
  } else {
    kvn::KuramotoSpec spec = kvn::load_kuramoto_spec(a.spec_path);
    kvn::KuramotoEmbedding emb = kvn::make_kuramoto(spec);
    sys = std::move(emb.system);
    x0 = std::move(emb.x0);
  }
  log.input_file(a.spec_path);
  kvn::save_system_json(a.out_path, sys, x0);
  log.output_file(a.out_path);
  kvn::ValidationReport report = kvn::validate_system(sys);
  std::cout << a.kind << ": N=" << sys.n_vars() << " interactions="
            << sys.interactions().size() << " d=" << report.degree << " c="
            << report.membership << " eta=" << fd(report.coupling_max) << " -> "
            << a.out_path << "\n";
  return 0;
}

struct BuildArgs {
  std::string system_path;
  std::string out_path;
  std::string cert_path;
  int m = -1;
  double delta = 0.0;
  std::uint64_t max_entries = 20'000'000;
  int random_batch = 0;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int n_max = 6;
  int d_max = 4;
};

bool certificate_passes(const kvn::NormCertificate& cert) {
  return cert.sparsity_ok && (!cert.max_entry_certified || cert.max_entry_ok) &&
         cert.one_norm_ok && cert.spectral_ok;
}

std::string certificate_text(const kvn::NormCertificate& cert, std::uint64_t dim,
                             std::uint64_t nnz) {
  std::ostringstream out;
  out << "dim=" << dim << " nnz=" << nnz << "\n";
  out << "row_sparsity=" << cert.max_row_nnz << " bound=" << fd(cert.sparsity_bound)
      << " ok=" << cert.sparsity_ok << "\n";
  out << "max_entry=" << fd(cert.max_abs_entry) << " bound=" << fd(cert.max_entry_bound)
      << (cert.max_entry_certified ? " ok=" : " (uncertified for m<2) ok=")
      << cert.max_entry_ok << "\n";
  out << "one_norm=" << fd(cert.one_norm) << " bound=" << fd(cert.one_norm_bound)
      << " ok=" << cert.one_norm_ok << "\n";
  out << "spectral_estimate=" << fd(cert.spectral_estimate)
      << " cross_bound=" << fd(std::sqrt(cert.one_norm * cert.inf_norm))
      << " residual=" << fd(cert.spectral_residual) << " ok=" << cert.spectral_ok << "\n";
  out << "certificate: " << (certificate_passes(cert) ? "PASS" : "FAIL") << "\n";
  return out.str();
}

int run_build_one(const BuildArgs& a, ManifestLog& log) {
  if (a.system_path.empty()) {
    std::cerr << "build: --system is required (or use --random-batch)\n";
    return 2;
  }
  if (a.m < 0) {
    std::cerr << "build: --m is required\n";
    return 2;
  }
  kvn::SystemFile file = load_system(a.system_path, log);
  require_valid(file.system);
  kvn::OdeSystem sys = file.system;
  if (a.delta != 0.0) {
    std::vector<double> x0 = file.x0;
    x0.resize(static_cast<std::size_t>(sys.n_vars()), 0.0);
    sys = kvn::rescale(sys, x0, a.delta).first;
  }
  kvn::FockBasis basis(sys.n_vars(), a.m);
  kvn::BuildOptions opts;
  opts.max_entries = a.max_entries;
  kvn::SparseHermitianMatrix h = kvn::build_hamiltonian(sys, basis, opts);
  kvn::NormCertificate cert = kvn::norm_certificate(h, sys, basis);

  if (!a.out_path.empty()) {
    std::ostringstream csv;
    kvn::write_matrix_csv(csv, h, sys.n_vars(), a.m);
    kvn::write_text_file(a.out_path, csv.str());
    log.output_text(a.out_path, csv.str());
  }
  std::cout << certificate_text(cert, h.dim(), h.nnz());
  return certificate_passes(cert) ? 0 : 1;
}

int run_build_batch(const BuildArgs& a, ManifestLog& log) {
  if (!a.seed_given) {
    std::cerr << "build: --random-batch requires an explicit --seed\n";
    return 2;
  }
  std::mt19937_64 cap_rng(a.seed ^ 0xb10c5eedULL);
  std::ostringstream csv;
  csv << "index,seed,N,d,c,eta,m,dim,nnz,row_sparsity,sparsity_bound,max_entry,"
         "max_entry_bound,one_norm,one_norm_bound,sparsity_ok,max_entry_ok,one_norm_ok,"
         "spectral_ok\n";
  int failures = 0;
  for (int i = 0; i < a.random_batch; ++i) {
    std::uint64_t seed_i = a.seed + static_cast<std::uint64_t>(i);
    kvn::OdeSystem sys = kvn::random_valid_system(seed_i, a.n_max, a.d_max);
    int m = kvn::draw_int(cap_rng, 2, 5);
    kvn::FockBasis basis(sys.n_vars(), m);
    kvn::SparseHermitianMatrix h = kvn::build_hamiltonian(sys, basis);
    kvn::NormCertificate cert = kvn::norm_certificate(h, sys, basis);
    bool pass = certificate_passes(cert);
    failures += pass ? 0 : 1;
    csv << i << "," << seed_i << "," << sys.n_vars() << "," << sys.degree() << ","
        << sys.membership() << "," << fd(sys.coupling_max()) << "," << m << "," << h.dim()
        << "," << h.nnz() << "," << cert.max_row_nnz << "," << fd(cert.sparsity_bound)
        << "," << fd(cert.max_abs_entry) << "," << fd(cert.max_entry_bound) << ","
        << fd(cert.one_norm) << "," << fd(cert.one_norm_bound) << "," << cert.sparsity_ok
        << "," << cert.max_entry_ok << "," << cert.one_norm_ok << "," << cert.spectral_ok
        << "\n";
  }
  std::ostringstream summary;
  summary << "batch: " << a.random_batch << " systems, failures=" << failures;
  deliver(a.out_path, csv.str(), summary.str(), log);
  return failures == 0 ? 0 : 1;
}

int run_build(const BuildArgs& a, ManifestLog& log) {
  return a.random_batch > 0 ? run_build_batch(a, log) : run_build_one(a, log);
}

struct EvolveArgs {
  std::string system_path;
  std::string observable_path;
  std::string x0_text;
  std::string out_path;
  int m = 0;
  double t_final = 0.0;
  int steps = 100;
  double tol = 1e-10;
  int krylov_dim = 30;
};

std::vector<double> uniform_grid(double t_final, int steps) {
  std::vector<double> grid;
  if (t_final == 0.0) {
    grid.push_back(0.0);
    return grid;
  }
  grid.reserve(static_cast<std::size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i)
    grid.push_back(t_final * static_cast<double>(i) / static_cast<double>(steps));
  return grid;
}

int run_evolve(const EvolveArgs& a, ManifestLog& log) {
  kvn::SystemFile file = load_system(a.system_path, log);
  require_valid(file.system);
  std::vector<double> x0 = resolve_x0(a.x0_text, file);

  kvn::FockBasis basis(file.system.n_vars(), a.m);
  kvn::SparseHermitianMatrix h = kvn::build_hamiltonian(file.system, basis);
  auto [psi0, l0] = kvn::encode_position(basis, x0);

  kvn::EvolveOptions opts;
  opts.tol = a.tol;
  opts.krylov_dim = a.krylov_dim;
  std::vector<double> grid = uniform_grid(a.t_final, a.steps);
  kvn::EvolutionResult evo = kvn::evolve(h, psi0, grid, opts);

  std::ostringstream csv;
  std::vector<double> q;
  if (!a.observable_path.empty()) {
    kvn::ObservableSpec obs = load_observable(a.observable_path, file.system.n_vars(), log);
    kvn::StateVector c_state = kvn::encode_observable(basis, obs);
    q = kvn::output_series(evo, c_state, l0).values;
    csv << "t,quantum,norm_drift\n";
  } else {
    csv << "t,norm_drift\n";
  }
  for (std::size_t i = 0; i < evo.times.size(); ++i) {
    csv << fd(evo.times[i]) << ",";
    if (!q.empty()) csv << fd(q[i]) << ",";
    csv << fd(std::abs(evo.norms[i] - 1.0)) << "\n";
  }
  std::ostringstream summary;
  summary << "dim=" << h.dim() << " substeps=" << evo.substeps
          << " max_norm_drift=" << fd(evo.max_norm_drift)
          << " max_imag_amplitude=" << fd(evo.max_imag_amplitude) << " L=" << fd(l0);
  deliver(a.out_path, csv.str(), summary.str(), log);
  return 0;
}

struct CompareArgs {
  std::string system_path;
  std::string observable_path;
  std::string x0_text;
  std::string out_path;
  int m = 0;
  double t_final = 0.0;
  int steps = 40;
  double tol = 1e-10;
};

int run_compare(const CompareArgs& a, ManifestLog& log) {
  kvn::SystemFile file = load_system(a.system_path, log);
  require_valid(file.system);
  std::vector<double> x0 = resolve_x0(a.x0_text, file);
  kvn::ObservableSpec obs = load_observable(a.observable_path, file.system.n_vars(), log);

  kvn::EvolveOptions opts;
  opts.tol = a.tol;
  kvn::ComparisonTable table =
      kvn::compare(file.system, x0, obs, a.m, a.t_final, a.steps, opts);

  std::ostringstream csv;
  csv << "t,quantum,classical,abs_error,norm_drift,L_drift\n";
  for (std::size_t i = 0; i < table.times.size(); ++i) {
    csv << fd(table.times[i]) << "," << fd(table.quantum[i]) << ","
        << fd(table.classical[i]) << "," << fd(table.abs_error[i]) << ","
        << fd(table.norm_drift[i]) << "," << fd(table.l_drift[i]) << "\n";
  }
  std::ostringstream summary;
  summary << "max_abs_error=" << fd(table.max_abs_error)
          << " max_norm_drift=" << fd(table.max_norm_drift)
          << " max_imag_residual=" << fd(table.max_imag_residual)
          << " L=" << fd(table.normalization);
  deliver(a.out_path, csv.str(), summary.str(), log);
  return 0;
}

struct SweepArgs {
  std::string system_path;
  std::string observable_path;
  std::string x0_text;
  std::string out_path;
  std::string m_list_text;
  double t_final = 0.0;
  int steps = 40;
  double tol = 1e-10;
  int jobs = 0;
};

int run_sweep(const SweepArgs& a, ManifestLog& log) {
  kvn::SystemFile file = load_system(a.system_path, log);
  require_valid(file.system);
  std::vector<double> x0 = resolve_x0(a.x0_text, file);
  kvn::ObservableSpec obs = load_observable(a.observable_path, file.system.n_vars(), log);
  std::vector<int> m_list = parse_int_list(a.m_list_text);

  kvn::EvolveOptions opts;
  opts.tol = a.tol;
  std::vector<kvn::SweepRow> rows =
      kvn::convergence_sweep(file.system, x0, obs, a.t_final, m_list, opts, a.steps, a.jobs);

  std::ostringstream csv;
  csv << "m,max_error,dim,build_seconds,evolve_seconds\n";
  for (const kvn::SweepRow& row : rows) {
    csv << row.m << "," << fd(row.max_error) << "," << row.dim << ","
        << fd(row.build_seconds) << "," << fd(row.evolve_seconds) << "\n";
  }
  std::ostringstream summary;
  summary << "levels=" << rows.size();
  if (!rows.empty())
    summary << " first_error=" << fd(rows.front().max_error)
            << " last_error=" << fd(rows.back().max_error);
  deliver(a.out_path, csv.str(), summary.str(), log);
  return 0;
}

struct EstimateArgs {
  std::string system_path;
  std::string out_path;
  int degree_b = 1;
  double eps = 0.0;
  double t_final = 0.0;
  int rk_order = 4;
};

int run_estimate(const EstimateArgs& a, ManifestLog& log) {
  kvn::SystemFile file = load_system(a.system_path, log);
  require_valid(file.system);
  const kvn::OdeSystem& sys = file.system;
  const int n = sys.n_vars();

  kvn::TruncationParams params = kvn::select_truncation(sys, a.degree_b, a.eps, a.t_final);
  kvn::TruncationCheck check = kvn::verify_truncation(sys, params);

  std::vector<double> zeros(static_cast<std::size_t>(n), 0.0);
  kvn::OdeSystem rescaled = kvn::rescale(sys, zeros, params.delta).first;
  kvn::ResourceEstimate block = kvn::block_encoding_cost(rescaled, params.m, n);
  kvn::ResourceEstimate sim =
      kvn::simulation_query_count(rescaled, params.m, a.t_final, a.eps);
  double baseline = kvn::classical_baseline_cost(a.t_final, n, a.eps, a.rk_order);

  std::string dim_text;
  if (kvn::binomial_fits(n + static_cast<int>(params.m),
                         static_cast<int>(std::min<long long>(params.m, n)))) {
    dim_text = std::to_string(kvn::fock_dimension(n, static_cast<int>(params.m)));
  } else {
    dim_text = fd(kvn::fock_dimension_approx(n, params.m));
  }

  std::ostringstream csv;
  csv << "n0,m,delta,series_constant,dim,sparsity,qubits,subnormalization,alpha,"
         "queries,classical_baseline,factorial_margin,coupling_margin,eta_tilde\n";
  csv << params.n0 << "," << params.m << "," << fd(params.delta) << ","
      << fd(params.series_constant) << "," << dim_text << "," << fd(block.sparsity) << ","
      << block.qubits << "," << fd(block.subnormalization) << "," << fd(sim.alpha) << ","
      << fd(sim.queries) << "," << fd(baseline) << "," << fd(check.factorial_margin) << ","
      << fd(check.coupling_margin) << "," << fd(check.eta_tilde) << "\n";

  std::ostringstream text;
  text << "truncation: n0=" << params.n0 << " m=" << params.m
       << " delta=" << fd(params.delta) << " C=" << fd(params.series_constant)
       << " dim=" << dim_text << "\n";
  text << "block encoding: sparsity=" << fd(block.sparsity) << " qubits=" << block.qubits
       << " subnormalization=" << fd(block.subnormalization) << "\n";
  text << "evolution: alpha=" << fd(sim.alpha) << " alpha_T=" << fd(sim.alpha * a.t_final)
       << " queries=" << fd(sim.queries) << " (up to Theta-constants)\n";
  text << "classical baseline (RK order " << a.rk_order << "): " << fd(baseline) << "\n";
  text << "verification: factorial_ok=" << check.factorial_ok
       << " margin=" << fd(check.factorial_margin) << " coupling_ok=" << check.coupling_ok
       << " margin=" << fd(check.coupling_margin) << " eta_tilde=" << fd(check.eta_tilde)
       << "\n";

  if (a.out_path.empty()) {
    std::cout << text.str();
  } else {
    kvn::write_text_file(a.out_path, csv.str());
    log.output_text(a.out_path, csv.str());
    std::cout << text.str();
  }
  return (check.factorial_ok && check.coupling_ok) ? 0 : 1;
}

struct RankArgs {
  int n_vars = 0;
  int cap = 0;
  std::string word_text;
  std::uint64_t index = 0;
};

int run_rank(const RankArgs& a) {
  std::vector<int> symbols = parse_int_list(a.word_text);
  std::sort(symbols.begin(), symbols.end());
  kvn::FockBasis basis(a.n_vars, a.cap);
  kvn::OccupationWord word{std::move(symbols)};
  std::cout << basis.rank(word) << "\n";
  return 0;
}

int run_unrank(const RankArgs& a) {
  kvn::FockBasis basis(a.n_vars, a.cap);
  kvn::OccupationWord word = basis.unrank(a.index);
  for (std::size_t i = 0; i < word.symbols.size(); ++i) {
    if (i) std::cout << ",";
    std::cout << word.symbols[i];
  }
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"classical simulator and verifier for occupation-truncated embeddings of "
               "zero-divergence polynomial ODEs"};
  app.require_subcommand(1);
  app.fallthrough();

  ManifestLog log;
  app.add_option("--emit-manifest", log.path,
                 "write a run manifest (inputs, flags, output hashes) to this JSON file");

  ValidateArgs va;
  CLI::App* validate = app.add_subcommand("validate", "check a system file");
  validate->add_option("--system", va.system_path, "system JSON")->required();

  ModelArgs ma;
  CLI::App* model = app.add_subcommand("model", "emit a generated model system");
  model->add_option("kind", ma.kind, "harmonic|duffing|kuramoto")
      ->required()
      ->check(CLI::IsMember({"harmonic", "duffing", "kuramoto"}));
  model->add_option("--spec", ma.spec_path, "model parameter JSON")->required();
  model->add_option("--out", ma.out_path, "output system JSON")->required();

  BuildArgs ba;
  CLI::App* build = app.add_subcommand("build", "assemble the truncated generator");
  build->add_option("--system", ba.system_path, "system JSON");
  build->add_option("--m", ba.m, "total occupation cap")->check(CLI::NonNegativeNumber);
  build->add_option("--out", ba.out_path, "matrix CSV path");
  build->add_option("--delta", ba.delta, "rescale couplings by delta^(|p|-2) first")
      ->check(CLI::PositiveNumber);
  build->add_option("--max-entries", ba.max_entries, "assembly size cap");
  build->add_option("--random-batch", ba.random_batch,
                    "certify this many seeded random systems instead")
      ->check(CLI::PositiveNumber);
  CLI::Option* seed_opt = build->add_option("--seed", ba.seed, "batch seed");
  build->add_option("--n-max", ba.n_max, "batch: max variables")->check(CLI::PositiveNumber);
  build->add_option("--d-max", ba.d_max, "batch: max set size")->check(CLI::PositiveNumber);

  EvolveArgs ea;
  CLI::App* evolve = app.add_subcommand("evolve", "propagate an encoded point");
  evolve->add_option("--system", ea.system_path, "system JSON")->required();
  evolve->add_option("--m", ea.m, "total occupation cap")
      ->required()
      ->check(CLI::NonNegativeNumber);
  evolve->add_option("--T", ea.t_final, "final time")->required()
      ->check(CLI::NonNegativeNumber);
  evolve->add_option("--steps", ea.steps, "grid intervals")->check(CLI::PositiveNumber);
  evolve->add_option("--x0", ea.x0_text, "comma-separated initial point");
  evolve->add_option("--observable", ea.observable_path, "observable JSON");
  evolve->add_option("--tol", ea.tol, "evolution tolerance");
  evolve->add_option("--krylov-dim", ea.krylov_dim, "subspace size")
      ->check(CLI::PositiveNumber);
  evolve->add_option("--out", ea.out_path, "CSV path");

  CompareArgs ca;
  CLI::App* compare = app.add_subcommand("compare", "quantum vs reference observable");
  compare->add_option("--system", ca.system_path, "system JSON")->required();
  compare->add_option("--m", ca.m, "total occupation cap")
      ->required()
      ->check(CLI::NonNegativeNumber);
  compare->add_option("--T", ca.t_final, "final time")->required()
      ->check(CLI::NonNegativeNumber);
  compare->add_option("--steps", ca.steps, "grid intervals")->check(CLI::PositiveNumber);
  compare->add_option("--observable", ca.observable_path, "observable JSON")->required();
  compare->add_option("--x0", ca.x0_text, "comma-separated initial point");
  compare->add_option("--tol", ca.tol, "evolution tolerance");
  compare->add_option("--out", ca.out_path, "CSV path");

  SweepArgs sa;
  CLI::App* sweep = app.add_subcommand("sweep", "error vs truncation level");
  sweep->add_option("--system", sa.system_path, "system JSON")->required();
  sweep->add_option("--m-list", sa.m_list_text, "comma-separated caps")->required();
  sweep->add_option("--T", sa.t_final, "final time")->required()
      ->check(CLI::NonNegativeNumber);
  sweep->add_option("--steps", sa.steps, "grid intervals")->check(CLI::PositiveNumber);
  sweep->add_option("--observable", sa.observable_path, "observable JSON")->required();
  sweep->add_option("--x0", sa.x0_text, "comma-separated initial point");
  sweep->add_option("--tol", sa.tol, "evolution tolerance");
  sweep->add_option("--jobs", sa.jobs, "parallel levels (0 = hardware)");
  sweep->add_option("--out", sa.out_path, "CSV path");

  EstimateArgs ta;
  CLI::App* estimate = app.add_subcommand("estimate", "closed-form resource arithmetic");
  estimate->add_option("--system", ta.system_path, "system JSON")->required();
  estimate->add_option("--b", ta.degree_b, "output polynomial degree")
      ->check(CLI::PositiveNumber);
  estimate->add_option("--eps", ta.eps, "target accuracy")->required();
  estimate->add_option("--T", ta.t_final, "horizon")->required();
  estimate->add_option("--rk-order", ta.rk_order, "baseline RK order")
      ->check(CLI::PositiveNumber);
  estimate->add_option("--out", ta.out_path, "CSV path");

  RankArgs ra;
  CLI::App* rank = app.add_subcommand("rank", "index of an occupation word");
  rank->add_option("--N", ra.n_vars, "variables")->required()->check(CLI::PositiveNumber);
  rank->add_option("--m", ra.cap, "occupation cap")->required()
      ->check(CLI::NonNegativeNumber);
  rank->add_option("--word", ra.word_text, "comma-separated symbols")->required();

  RankArgs ua;
  CLI::App* unrank = app.add_subcommand("unrank", "occupation word at an index");
  unrank->add_option("--N", ua.n_vars, "variables")->required()->check(CLI::PositiveNumber);
  unrank->add_option("--m", ua.cap, "occupation cap")->required()
      ->check(CLI::NonNegativeNumber);
  unrank->add_option("--index", ua.index, "basis index")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  ba.seed_given = seed_opt->count() > 0;
  log.enabled = !log.path.empty();
  for (int i = 0; i < argc; ++i) log.command.emplace_back(argv[i]);

  int code = 0;
  try {
    if (*validate) code = run_validate(va, log);
    else if (*model) code = run_model(ma, log);
    else if (*build) code = run_build(ba, log);
    else if (*evolve) code = run_evolve(ea, log);
    else if (*compare) code = run_compare(ca, log);
    else if (*sweep) code = run_sweep(sa, log);
    else if (*estimate) code = run_estimate(ta, log);
    else if (*rank) code = run_rank(ra);
    else if (*unrank) code = run_unrank(ua);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  try {
    log.write();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return code;
}
