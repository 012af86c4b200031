// Command-line front end for the coupled Darcy-Stokes WG solver.
//
// Subcommands:
//   solve               one mesh, one rho: solve and report the error norms
//   convergence         refinement study over --n for each --rho
//   infsup-probe        dense inf-sup constant on a sequence of meshes
//   colorability-check  two-color sweep analysis of a mesh
//
// Exit codes: 0 success, 2 configuration error, 3 solver/runtime failure,
// 4 check failure in --check mode.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "wgds/infsup.hpp"
#include "wgds/io.hpp"
#include "wgds/mms.hpp"
#include "wgds/reference.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitCheck = 4;

std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

int env_threads() {
  const char* s = std::getenv("WGDS_THREADS");
  if (!s) return 1;
  int t = std::atoi(s);
  return t > 0 ? t : 1;
}

// Options shared by the solving subcommands; values land in a RunConfig with
// CLI flags overriding any --config file.
struct CommonCli {
  std::string config_path;
  std::vector<int> ns;
  std::vector<double> rhos;
  int alpha_s = 0, alpha_d = 0, beta = 0, gamma_s = 0, gamma_d = 0;
  double nu = 0, mu = 0, kappa = 0, tol = 0;
  int quad_exactness = 0, max_iter = 0, threads = 0;
  unsigned seed = 0;
  std::string solver, bc, error, out, format = "pretty";
  bool check = false;

  CLI::Option* o_ns = nullptr;
  CLI::Option* o_rhos = nullptr;
  CLI::Option* o_alpha_s = nullptr;
  CLI::Option* o_alpha_d = nullptr;
  CLI::Option* o_beta = nullptr;
  CLI::Option* o_gamma_s = nullptr;
  CLI::Option* o_gamma_d = nullptr;
  CLI::Option* o_nu = nullptr;
  CLI::Option* o_mu = nullptr;
  CLI::Option* o_kappa = nullptr;
  CLI::Option* o_quad = nullptr;
  CLI::Option* o_solver = nullptr;
  CLI::Option* o_tol = nullptr;
  CLI::Option* o_max_iter = nullptr;
  CLI::Option* o_bc = nullptr;
  CLI::Option* o_error = nullptr;
  CLI::Option* o_threads = nullptr;
  CLI::Option* o_seed = nullptr;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "JSON config file; flags override it");
    o_ns = app->add_option("--n,--n-list", ns, "mesh resolution(s), comma separated")
               ->delimiter(',');
    o_rhos = app->add_option("--rho", rhos, "stabilization weight(s), comma separated")
                 ->delimiter(',');
    o_alpha_s = app->add_option("--alpha-s", alpha_s, "Stokes interior degree");
    o_alpha_d = app->add_option("--alpha-d", alpha_d, "Darcy interior degree");
    o_beta = app->add_option("--beta", beta, "edge trace degree");
    o_gamma_s = app->add_option("--gamma-s", gamma_s, "Stokes pressure degree");
    o_gamma_d = app->add_option("--gamma-d", gamma_d, "Darcy pressure degree");
    o_nu = app->add_option("--nu", nu, "viscosity");
    o_mu = app->add_option("--mu", mu, "interface slip coefficient");
    o_kappa = app->add_option("--kappa", kappa, "isotropic permeability value");
    o_quad = app->add_option("--quad-exactness", quad_exactness,
                             "quadrature exactness override");
    o_solver = app->add_option("--solver", solver, "direct | minres")
                   ->check(CLI::IsMember({"direct", "minres"}));
    o_tol = app->add_option("--tol", tol, "iterative solver tolerance");
    o_max_iter = app->add_option("--max-iter", max_iter, "iterative solver cap");
    o_bc = app->add_option("--bc", bc, "boundary data: nodal | projection")
               ->check(CLI::IsMember({"nodal", "projection"}));
    o_error = app->add_option("--error", error,
                              "error reference: interpolant | projection")
                  ->check(CLI::IsMember({"interpolant", "projection"}));
    o_threads = app->add_option("--threads", threads,
                                "assembly threads (also env WGDS_THREADS)");
    o_seed = app->add_option("--seed", seed, "seed echoed into artifacts");
    app->add_option("--out", out, "output file (default stdout)");
    app->add_option("--format", format, "csv | json | pretty")
        ->check(CLI::IsMember({"csv", "json", "pretty"}));
    app->add_flag("--check", check, "compare against the built-in reference");
  }

  wgds::RunConfig resolve() const {
    wgds::RunConfig cfg;
    cfg.threads = env_threads();
    if (!config_path.empty()) {
      std::ifstream is(config_path);
      if (!is) throw std::invalid_argument("cannot open config file: " + config_path);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(is);
      } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("config parse error: " + std::string(e.what()));
      }
      cfg = wgds::config_from_json(j);
    }
    if (*o_ns) cfg.ns = ns;
    if (*o_rhos) cfg.rhos = rhos;
    if (*o_alpha_s) cfg.params.alpha_s = alpha_s;
    if (*o_alpha_d) cfg.params.alpha_d = alpha_d;
    if (*o_beta) cfg.params.beta = beta;
    if (*o_gamma_s) cfg.params.gamma_s = gamma_s;
    if (*o_gamma_d) cfg.params.gamma_d = gamma_d;
    if (*o_nu) cfg.params.nu = nu;
    if (*o_mu) cfg.params.mu = mu;
    if (*o_kappa) cfg.params.kappa = kappa * Eigen::Matrix2d::Identity();
    if (*o_quad) cfg.params.quad_exactness = quad_exactness;
    if (*o_solver) cfg.solver = solver;
    if (*o_tol) cfg.tol = tol;
    if (*o_max_iter) cfg.max_iter = max_iter;
    if (*o_bc) cfg.bc = bc;
    if (*o_error) cfg.error = error;
    if (*o_threads) cfg.threads = threads;
    if (*o_seed) cfg.seed = seed;
    if (cfg.ns.empty()) throw std::invalid_argument("at least one --n value is required");
    if (cfg.rhos.empty()) throw std::invalid_argument("at least one --rho value is required");
    for (int n : cfg.ns)
      if (n < 1) throw std::invalid_argument("--n values must be positive");
    for (double r : cfg.rhos)
      if (!(r > 0.0)) throw std::invalid_argument("--rho values must be positive");
    cfg.params.validate();
    return cfg;
  }

  // true when the n list came from a flag or a config file rather than the
  // built-in default
  bool ns_explicit() const { return bool(*o_ns) || !config_path.empty(); }
};

// Writes to --out or stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open for writing: " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void print_pretty(std::ostream& os, const wgds::ConvergenceStudy& study, double rho) {
  char line[160];
  os << "rho = " << rho << "\n";
  std::snprintf(line, sizeof line, "%6s %12s %12s %12s %12s %12s\n", "n",
                "|eu|_1,S", "|eu|_0,S", "|ep|_0,S", "|eu|_0,D", "|ep|_0,D");
  os << line;
  for (const auto& row : study.rows) {
    auto c = row.errors.columns();
    std::snprintf(line, sizeof line, "%6d %12.5e %12.5e %12.5e %12.5e %12.5e\n",
                  row.n, c[0], c[1], c[2], c[3], c[4]);
    os << line;
  }
  if (study.rows.size() >= 2) {
    std::snprintf(line, sizeof line, "%6s %12.4f %12.4f %12.4f %12.4f %12.4f\n",
                  "rate", study.rates_ls[0], study.rates_ls[1], study.rates_ls[2],
                  study.rates_ls[3], study.rates_ls[4]);
    os << line;
  }
}

// 2% row comparison plus a +/-0.2 rate comparison against the built-in
// reference for this rho.  Returns the number of failed comparisons and
// explains each one on stderr.
int check_against_reference(const wgds::ConvergenceStudy& study, double rho) {
  const wgds::ReferenceTable* table = wgds::reference_table(rho);
  if (!table)
    throw std::invalid_argument("--check: no built-in reference for rho = " +
                                std::to_string(rho));
  int failures = 0;
  if (table->rowwise_check) {
    for (const auto& row : study.rows) {
      const wgds::ReferenceRow* ref = table->find(row.n);
      if (!ref) continue;
      auto cols = row.errors.columns();
      for (int j = 0; j < 5; ++j) {
        double rel = std::abs(cols[j] - ref->errors[j]) / ref->errors[j];
        if (rel > 0.02) {
          std::fprintf(stderr,
                       "check failed: rho=%g n=%d column %d: got %.5f, reference "
                       "%.5f (%.2f%% off)\n",
                       rho, row.n, j + 1, cols[j], ref->errors[j], 100.0 * rel);
          ++failures;
        }
      }
    }
  }

  // Refit the rates over the rows the reference caption uses.  Short
  // prefixes fit genuinely different rates, so require at least three rows.
  std::vector<const wgds::StudyRow*> fit_rows;
  for (const auto& row : study.rows)
    if (row.n >= table->rate_fit_from) fit_rows.push_back(&row);
  if (fit_rows.size() >= 3) {
    for (int j = 0; j < 5; ++j) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (const auto* row : fit_rows) {
        double lx = std::log(row->h), ly = std::log(row->errors.columns()[j]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
      }
      int m = static_cast<int>(fit_rows.size());
      double rate = (m * sxy - sx * sy) / (m * sxx - sx * sx);
      if (std::abs(rate - table->rates[j]) > 0.2) {
        std::fprintf(stderr,
                     "check failed: rho=%g column %d rate: got %.4f, reference "
                     "%.4f\n",
                     rho, j + 1, rate, table->rates[j]);
        ++failures;
      }
    }
  }
  return failures;
}

int run_convergence(const CommonCli& cli, bool single_row) {
  wgds::RunConfig cfg = cli.resolve();
  if (single_row) {
    if (!cli.ns_explicit()) cfg.ns = {8};
    if (cfg.ns.size() != 1)
      throw std::invalid_argument("solve takes exactly one --n value");
  }

  std::vector<std::pair<double, wgds::ConvergenceStudy>> studies;
  int check_failures = 0;
  for (double rho : cfg.rhos) {
    wgds::RunConfig run = cfg;
    run.params.rho_s = rho;
    run.params.rho_d = rho;
    wgds::ConvergenceStudy study =
        wgds::convergence_study(run.ns, run.params, run.study_options());
    // timings never go into artifacts (they would break byte determinism)
    for (const auto& row : study.rows)
      std::fprintf(stderr, "timing: rho=%g n=%d solve %.3fs (%d unknowns)\n", rho,
                   row.n, row.report.solve_seconds, row.report.n_unknowns);
    if (cli.check) check_failures += check_against_reference(study, rho);
    studies.emplace_back(rho, study);
  }

  Sink sink(cli.out);
  if (cli.format == "csv") {
    for (const auto& [rho, study] : studies)
      wgds::write_study_csv(sink.stream(), study, rho);
  } else if (cli.format == "json") {
    sink.stream() << wgds::report_to_json(studies, cfg, utc_timestamp()).dump(2) << "\n";
  } else {
    for (const auto& [rho, study] : studies) {
      print_pretty(sink.stream(), study, rho);
      sink.stream() << "\n";
    }
  }
  if (check_failures > 0) {
    std::fprintf(stderr, "--check: %d comparison(s) failed\n", check_failures);
    return kExitCheck;
  }
  if (cli.check) std::fprintf(stderr, "--check: all comparisons passed\n");
  return 0;
}

int run_solve(const CommonCli& cli, const std::string& mesh_path) {
  if (!mesh_path.empty()) {
    // external mesh: one solve, report norms and residuals
    wgds::RunConfig cfg = cli.resolve();
    if (cfg.rhos.size() != 1)
      throw std::invalid_argument("solve takes exactly one --rho value");
    cfg.params.rho_s = cfg.rhos[0];
    cfg.params.rho_d = cfg.rhos[0];
    wgds::PolyMesh mesh = wgds::read_mesh(mesh_path);
    wgds::ManufacturedSolution exact;
    wgds::WgDofMap dm = wgds::WgDofMap::build(mesh, cfg.params);
    wgds::WgSolution sol =
        wgds::solve_manufactured(mesh, cfg.params, exact, cfg.study_options());
    if (!sol.report.success) {
      std::fprintf(stderr, "solver failed: %s\n", sol.report.message.c_str());
      return kExitSolver;
    }
    wgds::ErrorNorms err =
        wgds::error_norms(dm, sol.velocity, sol.pressure, exact, cfg.error_mode());
    Sink sink(cli.out);
    auto c = err.columns();
    char line[256];
    std::snprintf(line, sizeof line,
                  "errors: %.5e %.5e %.5e %.5e %.5e (unknowns %d, residual %.2e)\n",
                  c[0], c[1], c[2], c[3], c[4], sol.report.n_unknowns,
                  sol.report.rel_residual);
    sink.stream() << line;
    return 0;
  }
  return run_convergence(cli, /*single_row=*/true);
}

int run_infsup(const CommonCli& cli) {
  wgds::RunConfig cfg = cli.resolve();
  if (!cli.ns_explicit()) cfg.ns = {2, 4, 8};
  if (cfg.rhos.size() != 1)
    throw std::invalid_argument("infsup-probe takes exactly one --rho value");
  cfg.params.rho_s = cfg.rhos[0];
  cfg.params.rho_d = cfg.rhos[0];

  Sink sink(cli.out);
  std::vector<double> betas;
  for (int n : cfg.ns) {
    wgds::PolyMesh mesh = wgds::build_rect_mesh(n);
    wgds::WgDofMap dm = wgds::WgDofMap::build(mesh, cfg.params);
    wgds::InfSupProbe probe = wgds::infsup_probe(dm, cfg.threads);
    betas.push_back(probe.beta_h);
    char line[160];
    std::snprintf(line, sizeof line,
                  "n=%d beta_h=%.6f zero_mode=%.3e pressures=%d\n", n, probe.beta_h,
                  probe.zero_mode, probe.n_pressure);
    sink.stream() << line;
  }
  if (cli.check) {
    for (std::size_t i = 1; i < betas.size(); ++i)
      if (betas[i] < 0.5 * betas[i - 1]) {
        std::fprintf(stderr,
                     "check failed: inf-sup constant dropped by more than a factor "
                     "of 2 between consecutive meshes (%.6f -> %.6f)\n",
                     betas[i - 1], betas[i]);
        return kExitCheck;
      }
    std::fprintf(stderr, "--check: inf-sup constants stay bounded\n");
  }
  return 0;
}

int run_colorability(const CommonCli& cli, const std::string& mesh_path) {
  wgds::PolyMesh mesh;
  if (!mesh_path.empty()) {
    mesh = wgds::read_mesh(mesh_path);
  } else {
    wgds::RunConfig cfg = cli.resolve();
    if (!cli.ns_explicit()) cfg.ns = {8};
    if (cfg.ns.size() != 1)
      throw std::invalid_argument("colorability-check takes exactly one --n value");
    mesh = wgds::build_rect_mesh(cfg.ns[0]);
  }
  wgds::ColorabilityReport result = wgds::check_colorable(mesh);
  int n_stokes = 0, n_white = 0;
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
    if (mesh.cells[c].region == wgds::Region::Stokes) ++n_stokes;
    if (result.white[c]) ++n_white;
  }
  Sink sink(cli.out);
  sink.stream() << (result.colorable ? "colorable" : "not colorable") << " (sweeps "
                << result.sweeps << ", white cells " << n_white << " of " << n_stokes
                << " in the free-flow region)\n";
  if (cli.check && (!result.colorable || result.sweeps > n_stokes)) return kExitCheck;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weak Galerkin solver for coupled Darcy-Stokes flow"};
  app.require_subcommand(1);
  app.set_version_flag("--version", wgds::library_version);

  CLI::App* solve = app.add_subcommand("solve", "solve one mesh and print error norms");
  CLI::App* conv = app.add_subcommand("convergence", "run a refinement study");
  CLI::App* infsup = app.add_subcommand("infsup-probe",
                                        "dense inf-sup constants over a mesh sequence");
  CLI::App* color =
      app.add_subcommand("colorability-check", "two-color sweep analysis of a mesh");

  CommonCli c_solve, c_conv, c_infsup, c_color;
  std::string solve_mesh, color_mesh;
  c_solve.attach(solve);
  solve->add_option("--mesh", solve_mesh, "wgmesh file instead of the built-in grid");
  c_conv.attach(conv);
  c_infsup.attach(infsup);
  c_color.attach(color);
  color->add_option("--mesh", color_mesh, "wgmesh file instead of the built-in grid");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (solve->parsed()) return run_solve(c_solve, solve_mesh);
    if (conv->parsed()) return run_convergence(c_conv, /*single_row=*/false);
    if (infsup->parsed()) return run_infsup(c_infsup);
    if (color->parsed()) return run_colorability(c_color, color_mesh);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitSolver;
  }
  return 0;
}
