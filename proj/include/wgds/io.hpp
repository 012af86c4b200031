#pragma once

// File formats: the wgmesh text format for polygonal two-region meshes,
// COO export of sparse matrices, and CSV/JSON writers for convergence
// studies.  All writers emit deterministic bytes for fixed inputs (full
// precision via %.17g, no timestamps or timings).

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wgds/assembly.hpp"
#include "wgds/mesh.hpp"
#include "wgds/mms.hpp"
#include "wgds/params.hpp"

namespace wgds {

inline constexpr const char* library_version = "0.1.0";

namespace detail {

inline std::string fmt_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

//// wgmesh format ///////////////////////////////////////////////////////////
//
//   wgmesh 1
//   <n_vertices>
//   <x> <y>          (one per vertex)
//   <n_cells>
//   <S|D> <k> <v0> ... <v{k-1}>   (0-based vertex indices, CCW)

inline void write_mesh(std::ostream& os, const PolyMesh& mesh) {
  os << "wgmesh 1\n" << mesh.n_vertices() << "\n";
  for (const auto& p : mesh.vertices)
    os << detail::fmt_g17(p.x()) << " " << detail::fmt_g17(p.y()) << "\n";
  os << mesh.n_cells() << "\n";
  for (const auto& cell : mesh.cells) {
    os << (cell.region == Region::Stokes ? 'S' : 'D') << " " << cell.verts.size();
    for (int v : cell.verts) os << " " << v;
    os << "\n";
  }
}

inline void write_mesh(const std::string& path, const PolyMesh& mesh) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  write_mesh(os, mesh);
}

inline PolyMesh read_mesh(std::istream& is) {
  std::string magic;
  int version = 0;
  if (!(is >> magic >> version) || magic != "wgmesh" || version != 1)
    throw std::runtime_error("not a wgmesh file (expected header 'wgmesh 1')");
  int nv = 0;
  if (!(is >> nv) || nv < 3) throw std::runtime_error("wgmesh: bad vertex count");
  PolyMesh mesh;
  mesh.vertices.resize(nv);
  for (int i = 0; i < nv; ++i)
    if (!(is >> mesh.vertices[i].x() >> mesh.vertices[i].y()))
      throw std::runtime_error("wgmesh: truncated vertex list");
  int nc = 0;
  if (!(is >> nc) || nc < 1) throw std::runtime_error("wgmesh: bad cell count");
  mesh.cells.resize(nc);
  for (int c = 0; c < nc; ++c) {
    char tag;
    int k = 0;
    if (!(is >> tag >> k) || (tag != 'S' && tag != 'D') || k < 3)
      throw std::runtime_error("wgmesh: bad cell line");
    mesh.cells[c].region = (tag == 'S') ? Region::Stokes : Region::Darcy;
    mesh.cells[c].verts.resize(k);
    for (int j = 0; j < k; ++j) {
      if (!(is >> mesh.cells[c].verts[j]))
        throw std::runtime_error("wgmesh: truncated cell line");
      if (mesh.cells[c].verts[j] < 0 || mesh.cells[c].verts[j] >= nv)
        throw std::runtime_error("wgmesh: vertex index out of range");
    }
  }
  finalize_mesh(mesh);
  return mesh;
}

inline PolyMesh read_mesh(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open mesh file: " + path);
  return read_mesh(is);
}

//// sparse matrix export ////////////////////////////////////////////////////

// One "row col value" triplet per line, sorted by (row, col), zero-based.
inline void write_coo(std::ostream& os, const SparseMat& M) {
  os << M.rows() << " " << M.cols() << " " << M.nonZeros() << "\n";
  for (int k = 0; k < M.outerSize(); ++k)
    for (SparseMat::InnerIterator it(M, k); it; ++it)
      os << it.row() << " " << it.col() << " " << detail::fmt_g17(it.value()) << "\n";
}

//// run configuration ///////////////////////////////////////////////////////

struct RunConfig {
  WgParams params;
  std::vector<double> rhos = {1.0};  // each value sets rho_s = rho_d = rho
  std::vector<int> ns = {8, 16, 32, 64, 128};
  std::string bc = "nodal";           // nodal | projection
  std::string error = "interpolant";  // interpolant | projection
  std::string solver = "direct";      // direct | minres
  double tol = 1e-12;
  int max_iter = 0;
  int threads = 1;
  unsigned seed = 0;  // echoed into artifacts; used by randomized probes

  BcMode bc_mode() const {
    if (bc == "nodal") return BcMode::Nodal;
    if (bc == "projection") return BcMode::Projection;
    throw std::invalid_argument("unknown bc mode: " + bc);
  }
  ErrorMode error_mode() const {
    if (error == "interpolant") return ErrorMode::Interpolant;
    if (error == "projection") return ErrorMode::Projection;
    throw std::invalid_argument("unknown error mode: " + error);
  }
  SolverKind solver_kind() const {
    if (solver == "direct") return SolverKind::Direct;
    if (solver == "minres") return SolverKind::Minres;
    throw std::invalid_argument("unknown solver: " + solver);
  }
  StudyOptions study_options() const {
    StudyOptions opt;
    opt.bc = bc_mode();
    opt.error = error_mode();
    opt.solver = solver_kind();
    opt.tol = tol;
    opt.max_iter = max_iter;
    opt.threads = threads;
    return opt;
  }
};

inline nlohmann::json to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["degrees"] = {{"alpha_s", cfg.params.alpha_s},
                  {"alpha_d", cfg.params.alpha_d},
                  {"beta", cfg.params.beta},
                  {"gamma_s", cfg.params.gamma_s},
                  {"gamma_d", cfg.params.gamma_d}};
  j["nu"] = cfg.params.nu;
  j["mu"] = cfg.params.mu;
  j["kappa"] = {{cfg.params.kappa(0, 0), cfg.params.kappa(0, 1)},
                {cfg.params.kappa(1, 0), cfg.params.kappa(1, 1)}};
  j["rho"] = cfg.rhos;
  j["quad_exactness"] = cfg.params.quad_exactness;
  j["ns"] = cfg.ns;
  j["bc"] = cfg.bc;
  j["error"] = cfg.error;
  j["solver"] = cfg.solver;
  j["tol"] = cfg.tol;
  j["max_iter"] = cfg.max_iter;
  j["threads"] = cfg.threads;
  j["seed"] = cfg.seed;
  return j;
}

inline RunConfig config_from_json(const nlohmann::json& j) {
  static const std::vector<std::string> known = {
      "degrees", "nu",  "mu",    "kappa", "rho",     "quad_exactness",
      "ns",      "bc",  "error", "solver", "tol",    "max_iter",
      "threads", "seed"};
  static const std::vector<std::string> known_degrees = {"alpha_s", "alpha_d", "beta",
                                                         "gamma_s", "gamma_d"};
  for (const auto& item : j.items())
    if (std::find(known.begin(), known.end(), item.key()) == known.end())
      throw std::invalid_argument("unknown config key: " + item.key());

  RunConfig cfg;
  if (j.contains("rho")) {
    const auto& r = j.at("rho");
    if (r.is_number())
      cfg.rhos = {r.get<double>()};
    else
      cfg.rhos = r.get<std::vector<double>>();
    if (cfg.rhos.empty()) throw std::invalid_argument("config: rho list is empty");
    cfg.params.rho_s = cfg.rhos.front();
    cfg.params.rho_d = cfg.rhos.front();
  }
  if (j.contains("degrees")) {
    const auto& d = j.at("degrees");
    for (const auto& item : d.items())
      if (std::find(known_degrees.begin(), known_degrees.end(), item.key()) ==
          known_degrees.end())
        throw std::invalid_argument("unknown config key: degrees." + item.key());
    if (d.contains("alpha_s")) cfg.params.alpha_s = d.at("alpha_s").get<int>();
    if (d.contains("alpha_d")) cfg.params.alpha_d = d.at("alpha_d").get<int>();
    if (d.contains("beta")) cfg.params.beta = d.at("beta").get<int>();
    if (d.contains("gamma_s")) cfg.params.gamma_s = d.at("gamma_s").get<int>();
    if (d.contains("gamma_d")) cfg.params.gamma_d = d.at("gamma_d").get<int>();
  }
  if (j.contains("nu")) cfg.params.nu = j.at("nu").get<double>();
  if (j.contains("mu")) cfg.params.mu = j.at("mu").get<double>();
  if (j.contains("kappa")) {
    const auto& k = j.at("kappa");
    if (k.is_number()) {
      cfg.params.kappa = k.get<double>() * Eigen::Matrix2d::Identity();
    } else {
      for (int i = 0; i < 2; ++i)
        for (int jj = 0; jj < 2; ++jj)
          cfg.params.kappa(i, jj) = k.at(i).at(jj).get<double>();
    }
  }
  if (j.contains("quad_exactness"))
    cfg.params.quad_exactness = j.at("quad_exactness").get<int>();
  if (j.contains("ns")) cfg.ns = j.at("ns").get<std::vector<int>>();
  if (j.contains("bc")) cfg.bc = j.at("bc").get<std::string>();
  if (j.contains("error")) cfg.error = j.at("error").get<std::string>();
  if (j.contains("solver")) cfg.solver = j.at("solver").get<std::string>();
  if (j.contains("tol")) cfg.tol = j.at("tol").get<double>();
  if (j.contains("max_iter")) cfg.max_iter = j.at("max_iter").get<int>();
  if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<unsigned>();
  return cfg;
}

//// study writers ///////////////////////////////////////////////////////////

inline void write_study_csv(std::ostream& os, const ConvergenceStudy& study,
                            double rho = 0.0) {
  if (rho > 0.0) os << "# rho = " << detail::fmt_g17(rho) << "\n";
  os << "n,h,err_strain_s,err_l2_s,err_p_s,err_l2_d,err_p_d\n";
  for (const auto& row : study.rows) {
    os << row.n << "," << detail::fmt_g17(row.h);
    for (double e : row.errors.columns()) os << "," << detail::fmt_g17(e);
    os << "\n";
  }
  if (study.rows.size() >= 2) {
    os << "# rates_ls";
    for (double r : study.rates_ls) os << "," << detail::fmt_g17(r);
    os << "\n# rates_pairwise";
    for (double r : study.rates_pairwise) os << "," << detail::fmt_g17(r);
    os << "\n";
  }
}

inline nlohmann::json study_to_json(const ConvergenceStudy& study, double rho) {
  nlohmann::json j;
  j["rho"] = rho;
  j["rows"] = nlohmann::json::array();
  for (const auto& row : study.rows) {
    nlohmann::json r;
    r["n"] = row.n;
    r["h"] = row.h;
    r["errors"] = {{"strain_s", row.errors.strain_s},
                   {"l2_s", row.errors.l2_s},
                   {"p_s", row.errors.p_s},
                   {"l2_d", row.errors.l2_d},
                   {"p_d", row.errors.p_d}};
    r["unknowns"] = row.report.n_unknowns;
    j["rows"].push_back(r);
  }
  if (study.rows.size() >= 2) {
    j["rates_ls"] = study.rates_ls;
    j["rates_pairwise"] = study.rates_pairwise;
  }
  return j;
}

// Full JSON artifact for a multi-rho run.  Deterministic for fixed config
// apart from the timestamp the caller passes in.
inline nlohmann::json report_to_json(const std::vector<std::pair<double, ConvergenceStudy>>& studies,
                                     const RunConfig& cfg, const std::string& timestamp) {
  nlohmann::json j;
  j["timestamp"] = timestamp;
  j["version"] = library_version;
  j["config"] = to_json(cfg);
  j["studies"] = nlohmann::json::array();
  for (const auto& [rho, study] : studies) j["studies"].push_back(study_to_json(study, rho));
  return j;
}

}  // namespace wgds
