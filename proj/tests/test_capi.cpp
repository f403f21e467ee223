#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "mlswe/mlswe.h"

namespace fs = std::filesystem;

TEST_SUITE_BEGIN("capi");

TEST_CASE("catalogue listing") {
  CHECK(mlswe_case_count() >= 10);
  bool found = false;
  for (int i = 0; i < mlswe_case_count(); ++i)
    if (std::string(mlswe_case_name(i)) == "wb-1d-smooth")
      found = true;
  CHECK(found);
  CHECK(mlswe_case_name(-1) == nullptr);
  CHECK(mlswe_case_name(mlswe_case_count()) == nullptr);
  CHECK(std::string(mlswe_version()) == "1.0.0");
}

TEST_CASE("configuration errors surface through status codes") {
  mlswe_config *cfg = mlswe_config_new();
  CHECK(mlswe_config_set(cfg, "case", "wb-1d-smooth") == MLSWE_OK);
  CHECK(mlswe_config_set(cfg, "bogus", "1") == MLSWE_ERR_USAGE);
  CHECK(std::string(mlswe_last_error()).find("bogus") != std::string::npos);
  CHECK(mlswe_config_set(cfg, "cfl", "1.5") == MLSWE_OK); // checked at run
  mlswe_result *res = nullptr;
  CHECK(mlswe_run(cfg, &res) == MLSWE_ERR_USAGE);
  CHECK(res == nullptr);
  CHECK(mlswe_config_set(nullptr, "a", "b") == MLSWE_ERR_USAGE);
  mlswe_config_free(cfg);
}

TEST_CASE("a full run through the shared-library surface") {
  const fs::path dir = fs::temp_directory_path() / "mlswe_capi_run";
  fs::remove_all(dir);
  mlswe_config *cfg = mlswe_config_new();
  REQUIRE(mlswe_config_set(cfg, "case", "wb-1d-step") == MLSWE_OK);
  REQUIRE(mlswe_config_set(cfg, "n1", "50") == MLSWE_OK);
  REQUIRE(mlswe_config_set(cfg, "outdir", dir.string().c_str()) == MLSWE_OK);
  mlswe_result *res = nullptr;
  REQUIRE(mlswe_run(cfg, &res) == MLSWE_OK);
  REQUIRE(res != nullptr);
  double err = 1.0, vel = 1.0, mono = 0.0;
  CHECK(mlswe_result_metric(res, "max_surface_err", &err) == MLSWE_OK);
  CHECK(mlswe_result_metric(res, "max_velocity", &vel) == MLSWE_OK);
  CHECK(mlswe_result_metric(res, "energy_monotone", &mono) == MLSWE_OK);
  CHECK(err <= 1e-12);
  CHECK(vel <= 1e-12);
  CHECK(mlswe_result_metric(res, "no_such_metric", &err) == MLSWE_ERR_USAGE);
  CHECK(std::string(mlswe_result_summary(res)).find("status=ok") !=
        std::string::npos);
  mlswe_result_free(res);
  mlswe_config_free(cfg);
  CHECK(fs::exists(dir / "report.txt"));
}

TEST_CASE("config files load through the C surface") {
  const fs::path dir = fs::temp_directory_path() / "mlswe_capi_cfg";
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "a.cfg");
    f << "case = wb-1d-smooth\nn1 = 50\n";
  }
  mlswe_config *cfg = mlswe_config_new();
  CHECK(mlswe_config_load_file(cfg, (dir / "a.cfg").string().c_str()) ==
        MLSWE_OK);
  CHECK(mlswe_config_load_file(cfg, "/no/such/file.cfg") == MLSWE_ERR_USAGE);
  mlswe_config_free(cfg);
}

TEST_SUITE_END();
