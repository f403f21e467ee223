#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "core/runner.hpp"

using namespace mlswe;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path &p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path tmpdir(const std::string &tag) {
  fs::path p = fs::temp_directory_path() / ("mlswe_test_" + tag);
  fs::remove_all(p);
  return p;
}

} // namespace

TEST_SUITE_BEGIN("runner");

TEST_CASE("configuration parsing and validation") {
  RunConfig cfg;
  CHECK_THROWS_AS(cfg.set("no_such_key", "1"), UsageError);
  cfg.set("case", "wb-1d-smooth");
  cfg.set("n1", "50");
  cfg.set("mesh", "moving");
  CHECK(cfg.moving);
  CHECK_THROWS_AS(cfg.set("mesh", "wobbly"), UsageError);
  CHECK_THROWS_AS(cfg.set("n1", "12abc"), UsageError);

  RunConfig bad = cfg;
  bad.cfl = 1.5;
  CHECK_THROWS_AS(bad.validate(), UsageError);
  bad = cfg;
  bad.p = 4;
  CHECK_THROWS_AS(bad.validate(), UsageError);
  bad = cfg;
  bad.gamma = 0.4; // rho_M = 1 for the WB cases: needs gamma > 0.5
  CHECK_THROWS_AS(bad.validate(), UsageError);
  bad = cfg;
  bad.n1 = 8; // below the WENO stencil bound 2p+5
  CHECK_THROWS_AS(bad.validate(), UsageError);
  bad.dissipation = false;
  bad.n1 = 9;
  CHECK_NOTHROW(bad.validate());
  cfg.validate();
}

TEST_CASE("config file with flag override") {
  const fs::path dir = tmpdir("cfgfile");
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "run.cfg");
    f << "# sample\n"
      << "case = wb-1d-step\n"
      << "n1 = 50\n"
      << "cfl = 0.3\n";
  }
  RunConfig cfg;
  cfg.load_file((dir / "run.cfg").string());
  CHECK(cfg.case_name == "wb-1d-step");
  CHECK(cfg.cfl == 0.3);
  cfg.set("cfl", "0.4"); // later settings win
  CHECK(cfg.cfl == 0.4);
  {
    std::ofstream f(dir / "bad.cfg");
    f << "gamma 0.4\n";
  }
  RunConfig bad;
  CHECK_THROWS_AS(bad.load_file((dir / "bad.cfg").string()), UsageError);
}

TEST_CASE("convergence orders") {
  CHECK(convergence_orders({25, 50}, {1e-2, 3.125e-4})[0] ==
        doctest::Approx(5.0).epsilon(0.02));
  CHECK(convergence_orders({25, 50}, {1e-3, 1e-3})[0] == 0.0);
  const auto o = convergence_orders({25, 50, 100}, {1e-2, 3.125e-4, 1e-5});
  CHECK(o.size() == 2);
  // non-doubling sequences use the spacing log-ratio
  const auto o2 = convergence_orders({31, 91}, {1e-2, 1e-4});
  CHECK(o2[0] == doctest::Approx(std::log(1e2) / std::log(3.0)));
}

TEST_CASE("WB run writes the report, snapshots, and passes its checks") {
  RunConfig cfg;
  cfg.case_name = "wb-1d-smooth";
  cfg.n1 = 50;
  cfg.outdir = tmpdir("wbrun").string();
  RunResult r = run(cfg);
  CHECK(r.status == 0);
  CHECK(r.metrics.at("max_surface_err") <= 1e-12);
  CHECK(r.metrics.at("max_velocity") <= 1e-12);
  CHECK(r.summary.find("status=ok") != std::string::npos);
  CHECK(fs::exists(fs::path(cfg.outdir) / "report.txt"));
  CHECK(fs::exists(fs::path(cfg.outdir) / "energy.txt"));
  // snapshot format: header plus one row per node with 4 + 3M columns
  const std::string snap = slurp(fs::path(cfg.outdir) / "snap_0000.txt");
  CHECK(snap.find("# columns: x1 x2 b J h1 u1 v1 h2 u2 v2") !=
        std::string::npos);
  std::istringstream ss(snap);
  std::string line;
  int rows = 0, cols = 0;
  while (std::getline(ss, line)) {
    if (line.empty() || line[0] == '#')
      continue;
    ++rows;
    if (rows == 1) {
      std::istringstream ls(line);
      double v;
      while (ls >> v)
        ++cols;
    }
  }
  CHECK(rows == 50);
  CHECK(cols == 10);
}

TEST_CASE("identical configurations give bitwise-identical outputs") {
  for (const char *mesh : {"fixed", "moving"}) {
    RunConfig cfg;
    cfg.case_name = "dambreak-1d";
    cfg.n1 = 60;
    cfg.t_end = 0.05;
    cfg.set("mesh", mesh);
    cfg.outdir = tmpdir(std::string("det_a_") + mesh).string();
    run(cfg);
    RunConfig cfg2 = cfg;
    cfg2.outdir = tmpdir(std::string("det_b_") + mesh).string();
    run(cfg2);
    for (const char *f : {"snap_0001.txt", "energy.txt"}) {
      const std::string a = slurp(fs::path(cfg.outdir) / f);
      const std::string b = slurp(fs::path(cfg2.outdir) / f);
      CHECK(!a.empty());
      CHECK(a == b);
    }
  }
}

TEST_CASE("reference comparison distances shrink with resolution") {
  const fs::path dir = tmpdir("refcmp");
  double last = 1e30;
  for (int n : {60, 120}) {
    RunConfig cfg;
    cfg.case_name = "dambreak-1d";
    cfg.n1 = n;
    cfg.t_end = 0.3;
    cfg.compare_reference = true;
    cfg.reference_n = 600;
    cfg.outdir = dir.string(); // shared cache across resolutions
    RunResult r = run(cfg);
    const double d = r.metrics.at("ref_l1_dist_surface");
    CHECK(d < last);
    last = d;
  }
  CHECK(fs::exists(dir / "refcache" / "ref_dambreak-1d_2L_UM-ES_N600_t0.3.txt"));
}

TEST_SUITE_END();
