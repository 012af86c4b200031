#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "wgds/io.hpp"

namespace fs = std::filesystem;

namespace {

struct CmdResult {
  int code = -1;
  std::string out;
  std::string err;
};

fs::path work_dir() {
  fs::path dir = fs::temp_directory_path() / "wgds_cli_tests";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

CmdResult run_cli(const std::string& args, const std::string& env = "") {
  static int counter = 0;
  fs::path dir = work_dir();
  fs::path outp = dir / ("stdout" + std::to_string(++counter) + ".txt");
  fs::path errp = dir / ("stderr" + std::to_string(counter) + ".txt");
  std::string cmd = env + (env.empty() ? "" : " ") + "\"" + WGDS_CLI_PATH + "\" " + args +
                    " > " + outp.string() + " 2> " + errp.string();
  int rc = std::system(cmd.c_str());
  CmdResult res;
  res.code = (rc != -1 && WIFEXITED(rc)) ? WEXITSTATUS(rc) : -1;
  res.out = slurp(outp);
  res.err = slurp(errp);
  return res;
}

}  // namespace

TEST_CASE("version flag") {
  CmdResult r = run_cli("--version");
  REQUIRE(r.code == 0);
  REQUIRE(r.out.find("0.1.0") != std::string::npos);
}

TEST_CASE("a subcommand is required") {
  CmdResult r = run_cli("");
  REQUIRE(r.code == 2);
}

TEST_CASE("solve on the default grid passes the reference check") {
  CmdResult r = run_cli("solve --rho 1 --check");
  REQUIRE(r.code == 0);
  REQUIRE(r.err.find("all comparisons passed") != std::string::npos);
  REQUIRE(r.out.find("rho = 1") != std::string::npos);
}

TEST_CASE("short refinement study prints a table and checks clean") {
  // n = 4 has no reference row and is skipped; n = 8 is compared
  CmdResult r = run_cli("convergence --n 4,8 --rho 1 --check");
  REQUIRE(r.code == 0);
  REQUIRE(r.out.find("|eu|_1,S") != std::string::npos);
  REQUIRE(r.out.find("rate") != std::string::npos);
  REQUIRE(r.err.find("all comparisons passed") != std::string::npos);
  REQUIRE(r.err.find("timing:") != std::string::npos);
}

TEST_CASE("csv output carries the study") {
  CmdResult r = run_cli("convergence --n 2,4 --rho 1 --format csv");
  REQUIRE(r.code == 0);
  REQUIRE(r.out.find("# rho = 1") != std::string::npos);
  REQUIRE(r.out.find("n,h,err_strain_s,err_l2_s,err_p_s,err_l2_d,err_p_d") !=
          std::string::npos);
  REQUIRE(r.out.find("# rates_ls") != std::string::npos);
  REQUIRE(r.out.find("\n2,") != std::string::npos);
  REQUIRE(r.out.find("\n4,") != std::string::npos);
}

TEST_CASE("json artifacts are deterministic apart from the timestamp") {
  fs::path f1 = work_dir() / "report1.json";
  fs::path f2 = work_dir() / "report2.json";
  CmdResult r1 = run_cli("convergence --n 2 --rho 1 --format json --out " + f1.string());
  CmdResult r2 = run_cli("convergence --n 2 --rho 1 --format json --out " + f2.string());
  REQUIRE(r1.code == 0);
  REQUIRE(r2.code == 0);
  nlohmann::json j1 = nlohmann::json::parse(slurp(f1));
  nlohmann::json j2 = nlohmann::json::parse(slurp(f2));
  REQUIRE(j1.contains("timestamp"));
  REQUIRE(j1["version"] == "0.1.0");
  REQUIRE(j1["studies"][0]["rho"] == 1.0);
  j1.erase("timestamp");
  j2.erase("timestamp");
  REQUIRE(j1.dump() == j2.dump());
}

TEST_CASE("flags override the config file") {
  fs::path cfg = work_dir() / "run.json";
  {
    std::ofstream os(cfg);
    os << R"({"ns": [2], "rho": 2.0, "solver": "direct"})";
  }
  CmdResult r = run_cli("convergence --config " + cfg.string() + " --rho 1");
  REQUIRE(r.code == 0);
  REQUIRE(r.out.find("rho = 1") != std::string::npos);

  fs::path bad = work_dir() / "bad.json";
  {
    std::ofstream os(bad);
    os << R"({"viscosity": 2.0})";
  }
  CmdResult rb = run_cli("convergence --config " + bad.string());
  REQUIRE(rb.code == 2);
  REQUIRE(rb.err.find("unknown config key") != std::string::npos);
}

TEST_CASE("invalid parameters exit with the configuration code") {
  CmdResult deg = run_cli("convergence --n 2 --alpha-s 3");
  REQUIRE(deg.code == 2);
  REQUIRE(deg.err.find("configuration error") != std::string::npos);

  // the built-in problem pins the material data
  CmdResult nu = run_cli("convergence --n 2 --nu 2");
  REQUIRE(nu.code == 2);

  CmdResult flag = run_cli("convergence --bogus 1");
  REQUIRE(flag.code == 2);
}

TEST_CASE("a failed solve exits with the solver code") {
  CmdResult r = run_cli("solve --n 2 --solver minres --max-iter 1 --tol 1e-30");
  REQUIRE(r.code == 3);
  REQUIRE(r.err.find("error:") != std::string::npos);
}

TEST_CASE("external meshes feed the single solve") {
  fs::path meshfile = work_dir() / "grid2.wgmesh";
  wgds::write_mesh(meshfile.string(), wgds::build_rect_mesh(2));
  CmdResult r = run_cli("solve --mesh " + meshfile.string());
  REQUIRE(r.code == 0);
  REQUIRE(r.out.find("errors:") != std::string::npos);
}

TEST_CASE("colorability subcommand reports and gates") {
  CmdResult ok = run_cli("colorability-check --n 4 --check");
  REQUIRE(ok.code == 0);
  REQUIRE(ok.out.find("colorable (sweeps") != std::string::npos);

  // pinwheel square: four all-Stokes triangles, never colorable
  wgds::PolyMesh pin;
  pin.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}};
  for (int k = 0; k < 4; ++k) {
    wgds::MeshCell c;
    c.verts = {k, (k + 1) % 4, 4};
    c.region = wgds::Region::Stokes;
    pin.cells.push_back(c);
  }
  wgds::finalize_mesh(pin);
  fs::path pinfile = work_dir() / "pinwheel.wgmesh";
  wgds::write_mesh(pinfile.string(), pin);
  CmdResult bad = run_cli("colorability-check --mesh " + pinfile.string() + " --check");
  REQUIRE(bad.code == 4);
  REQUIRE(bad.out.find("not colorable") != std::string::npos);
}

TEST_CASE("inf-sup probe prints constants that stay bounded") {
  CmdResult r = run_cli("infsup-probe --n 2,4 --check");
  REQUIRE(r.code == 0);
  REQUIRE(r.out.find("n=2 beta_h=0.5464") != std::string::npos);
  REQUIRE(r.out.find("n=4 beta_h=") != std::string::npos);
  REQUIRE(r.err.find("inf-sup constants stay bounded") != std::string::npos);
}

TEST_CASE("thread count can come from the environment") {
  CmdResult r = run_cli("convergence --n 2 --rho 1", "WGDS_THREADS=4");
  REQUIRE(r.code == 0);
  REQUIRE(r.out.find("rho = 1") != std::string::npos);
}
