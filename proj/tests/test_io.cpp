#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "wgds/assembly.hpp"
#include "wgds/io.hpp"
#include "wgds/mms.hpp"

using namespace wgds;

TEST_CASE("meshes survive a text round trip") {
  PolyMesh mesh = build_rect_mesh(2);
  std::stringstream buf;
  write_mesh(buf, mesh);
  PolyMesh back = read_mesh(buf);
  REQUIRE(back.n_vertices() == mesh.n_vertices());
  REQUIRE(back.n_cells() == mesh.n_cells());
  REQUIRE(back.n_edges() == mesh.n_edges());
  for (int i = 0; i < mesh.n_vertices(); ++i)
    REQUIRE((back.vertices[i] - mesh.vertices[i]).norm() == 0.0);  // %.17g is lossless
  for (int c = 0; c < mesh.n_cells(); ++c) {
    REQUIRE(back.cells[c].region == mesh.cells[c].region);
    REQUIRE(back.cells[c].area == Catch::Approx(mesh.cells[c].area).epsilon(1e-15));
  }
  for (int t = 0; t < 5; ++t) {
    EdgeType type = static_cast<EdgeType>(t);
    REQUIRE(back.count_edges(type) == mesh.count_edges(type));
  }
}

TEST_CASE("malformed mesh files are rejected") {
  {
    std::stringstream buf("wgmsh 1\n4\n");
    REQUIRE_THROWS_AS(read_mesh(buf), std::runtime_error);
  }
  {
    std::stringstream buf("wgmesh 2\n4\n");
    REQUIRE_THROWS_AS(read_mesh(buf), std::runtime_error);
  }
  {
    // vertex index out of range
    std::stringstream buf("wgmesh 1\n3\n0 0\n1 0\n0 1\n1\nS 3 0 1 7\n");
    REQUIRE_THROWS_AS(read_mesh(buf), std::runtime_error);
  }
  {
    // truncated cell line
    std::stringstream buf("wgmesh 1\n3\n0 0\n1 0\n0 1\n1\nS 3 0 1\n");
    REQUIRE_THROWS_AS(read_mesh(buf), std::runtime_error);
  }
}

TEST_CASE("triplet export is shaped and ordered") {
  PolyMesh mesh = build_rect_mesh(1);
  WgDofMap dm = WgDofMap::build(mesh, WgParams{});
  SparseMat A = assemble_velocity_matrix(dm);
  std::ostringstream os;
  write_coo(os, A);
  std::istringstream is(os.str());
  long long rows, cols, nnz;
  is >> rows >> cols >> nnz;
  REQUIRE(rows == dm.n_velocity);
  REQUIRE(cols == dm.n_velocity);
  REQUIRE(nnz == A.nonZeros());
  long long count = 0;
  long long prev_r = -1, prev_c = -1;
  long long r, c;
  double v;
  while (is >> r >> c >> v) {
    ++count;
    // column-major storage: ordered by (col, row)
    bool advanced = (c > prev_c) || (c == prev_c && r > prev_r);
    REQUIRE(advanced);
    prev_r = r;
    prev_c = c;
  }
  REQUIRE(count == nnz);
}

TEST_CASE("configuration JSON round-trips") {
  RunConfig cfg;
  cfg.params.nu = 1.0;
  cfg.rhos = {0.01, 1.0, 100.0};
  cfg.ns = {8, 16};
  cfg.threads = 2;
  cfg.seed = 42;
  nlohmann::json j = to_json(cfg);
  RunConfig back = config_from_json(j);
  REQUIRE(to_json(back).dump() == j.dump());
  REQUIRE(back.rhos == cfg.rhos);
  REQUIRE(back.ns == cfg.ns);
  REQUIRE(back.params.rho_s == cfg.rhos.front());
}

TEST_CASE("unknown configuration keys are fatal") {
  nlohmann::json j = {{"nu", 1.0}, {"viscosity", 2.0}};
  try {
    config_from_json(j);
    FAIL("expected a throw");
  } catch (const std::invalid_argument& err) {
    REQUIRE(std::string(err.what()).find("unknown config key") != std::string::npos);
    REQUIRE(std::string(err.what()).find("viscosity") != std::string::npos);
  }
  nlohmann::json nested = {{"degrees", {{"alpha_s", 1}, {"alfa_d", 1}}}};
  REQUIRE_THROWS_AS(config_from_json(nested), std::invalid_argument);
}

TEST_CASE("scalar shorthands expand in the config") {
  nlohmann::json j1 = {{"rho", 2.5}};
  RunConfig c1 = config_from_json(j1);
  REQUIRE(c1.rhos == std::vector<double>{2.5});
  REQUIRE(c1.params.rho_s == 2.5);
  REQUIRE(c1.params.rho_d == 2.5);

  nlohmann::json j2 = {{"rho", {0.5, 2.0}}};
  RunConfig c2 = config_from_json(j2);
  REQUIRE(c2.rhos == std::vector<double>{0.5, 2.0});

  nlohmann::json j3 = {{"kappa", 0.25}};
  RunConfig c3 = config_from_json(j3);
  REQUIRE(c3.params.kappa(0, 0) == 0.25);
  REQUIRE(c3.params.kappa(1, 1) == 0.25);
  REQUIRE(c3.params.kappa(0, 1) == 0.0);

  nlohmann::json j4 = {{"kappa", {{1.0, 0.5}, {0.5, 2.0}}}};
  RunConfig c4 = config_from_json(j4);
  REQUIRE(c4.params.kappa(0, 1) == 0.5);
  REQUIRE(c4.params.kappa(1, 1) == 2.0);

  REQUIRE_THROWS_AS(config_from_json(nlohmann::json{{"bc", "midpoint"}}).bc_mode(),
                    std::invalid_argument);
}

TEST_CASE("study serialization carries rows and rates") {
  ConvergenceStudy study;
  for (int n : {2, 4}) {
    StudyRow row;
    row.n = n;
    row.h = M_PI / n;
    row.errors.strain_s = 1.0 / n;
    row.errors.l2_s = 1.0 / (n * n);
    row.errors.p_s = 2.0 / n;
    row.errors.l2_d = 3.0 / n;
    row.errors.p_d = 4.0 / n;
    study.rows.push_back(row);
  }
  study.rates_ls = {1.0, 2.0, 1.0, 1.0, 1.0};
  study.rates_pairwise = {1.0, 2.0, 1.0, 1.0, 1.0};

  std::ostringstream csv;
  write_study_csv(csv, study, 1.0);
  std::string text = csv.str();
  REQUIRE(text.find("# rho = 1") != std::string::npos);
  REQUIRE(text.find("n,h,err_strain_s,err_l2_s,err_p_s,err_l2_d,err_p_d") != std::string::npos);
  REQUIRE(text.find("# rates_ls") != std::string::npos);
  REQUIRE(text.find("# rates_pairwise") != std::string::npos);

  nlohmann::json js = study_to_json(study, 1.0);
  REQUIRE(js["rho"] == 1.0);
  REQUIRE(js["rows"].size() == 2);
  REQUIRE(js["rows"][0]["n"] == 2);

  RunConfig cfg;
  nlohmann::json r1 = report_to_json({{1.0, study}}, cfg, "2026-01-01T00:00:00Z");
  nlohmann::json r2 = report_to_json({{1.0, study}}, cfg, "2026-01-01T00:00:00Z");
  REQUIRE(r1.dump() == r2.dump());  // deterministic apart from the timestamp
  REQUIRE(r1["version"] == library_version);
  REQUIRE(r1["timestamp"] == "2026-01-01T00:00:00Z");
}
