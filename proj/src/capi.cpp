#include "mlswe/mlswe.h"

#include <string>
#include <vector>

#include "core/runner.hpp"

using mlswe::RunConfig;
using mlswe::RunResult;

struct mlswe_config {
  RunConfig cfg;
};

struct mlswe_result {
  RunResult res;
};

namespace {

thread_local std::string g_last_error;

mlswe_status fail(mlswe_status code, const std::string &msg) {
  g_last_error = msg;
  return code;
}

} // namespace

extern "C" {

const char *mlswe_version(void) { return "1.0.0"; }

const char *mlswe_last_error(void) { return g_last_error.c_str(); }

mlswe_config *mlswe_config_new(void) { return new mlswe_config(); }

void mlswe_config_free(mlswe_config *cfg) { delete cfg; }

mlswe_status mlswe_config_set(mlswe_config *cfg, const char *key,
                              const char *value) {
  if (!cfg || !key || !value)
    return fail(MLSWE_ERR_USAGE, "null argument");
  try {
    cfg->cfg.set(key, value);
    return MLSWE_OK;
  } catch (const std::exception &e) {
    return fail(MLSWE_ERR_USAGE, e.what());
  }
}

mlswe_status mlswe_config_load_file(mlswe_config *cfg, const char *path) {
  if (!cfg || !path)
    return fail(MLSWE_ERR_USAGE, "null argument");
  try {
    cfg->cfg.load_file(path);
    return MLSWE_OK;
  } catch (const std::exception &e) {
    return fail(MLSWE_ERR_USAGE, e.what());
  }
}

mlswe_status mlswe_run(const mlswe_config *cfg, mlswe_result **out) {
  if (!cfg || !out)
    return fail(MLSWE_ERR_USAGE, "null argument");
  *out = nullptr;
  try {
    RunResult r = mlswe::run(cfg->cfg);
    *out = new mlswe_result{std::move(r)};
    return (*out)->res.status == 0 ? MLSWE_OK : MLSWE_CHECK_FAILED;
  } catch (const mlswe::UsageError &e) {
    return fail(MLSWE_ERR_USAGE, e.what());
  } catch (const std::invalid_argument &e) {
    return fail(MLSWE_ERR_USAGE, e.what());
  } catch (const std::exception &e) {
    return fail(MLSWE_ERR_RUNTIME, e.what());
  }
}

void mlswe_result_free(mlswe_result *res) { delete res; }

const char *mlswe_result_summary(const mlswe_result *res) {
  return res ? res->res.summary.c_str() : "";
}

mlswe_status mlswe_result_metric(const mlswe_result *res, const char *name,
                                 double *value) {
  if (!res || !name || !value)
    return fail(MLSWE_ERR_USAGE, "null argument");
  const auto it = res->res.metrics.find(name);
  if (it == res->res.metrics.end())
    return fail(MLSWE_ERR_USAGE, std::string("unknown metric '") + name + "'");
  *value = it->second;
  return MLSWE_OK;
}

int mlswe_case_count(void) {
  return static_cast<int>(mlswe::case_names().size());
}

const char *mlswe_case_name(int index) {
  static thread_local std::string buf;
  const auto names = mlswe::case_names();
  if (index < 0 || index >= static_cast<int>(names.size()))
    return nullptr;
  buf = names[static_cast<std::size_t>(index)];
  return buf.c_str();
}

} // extern "C"
