// Command-line front end; drives the solver library through its C API.
//
// Subcommands:
//   run          one configured case (snapshots, energy series, report)
//   convergence  a resolution sweep with the observed orders
//   list-cases   the benchmark catalogue
//
// Exit codes: 0 ok, 1 case-declared acceptance checks failed, 2 usage or
// runtime error.

#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mlswe/mlswe.h"

namespace {

struct ConfigHandle {
  mlswe_config *cfg = mlswe_config_new();
  ~ConfigHandle() { mlswe_config_free(cfg); }
};

struct CommonOpts {
  std::string case_name, config_file;
  int layers = 0, n1 = 0, n2 = 0;
  std::string mesh, dt_policy, wave_speed, rho, outdir;
  double cfl = -1, t_end = -1, gamma_v = std::nan(""), theta = -1;
  int p = 0, snapshot_stride = -1, reference_n = 0, mesh_sweeps = 0;
  std::string dissipation, energy_ledger;
  bool compare_reference = false;
};

void add_common(CLI::App *cmd, CommonOpts &o) {
  cmd->add_option("--case", o.case_name, "benchmark case name");
  cmd->add_option("--config", o.config_file, "key=value config file");
  cmd->add_option("--layers,-m", o.layers, "layer count override");
  cmd->add_option("--rho", o.rho, "comma-separated densities");
  cmd->add_option("--n1", o.n1, "nodes in x1");
  cmd->add_option("--n2", o.n2, "nodes in x2");
  cmd->add_option("--cfl", o.cfl, "CFL number in (0,1]");
  cmd->add_option("--t-end", o.t_end, "end time override");
  cmd->add_option("--mesh", o.mesh, "fixed | moving");
  cmd->add_option("--dissipation", o.dissipation, "on | off (off: EC scheme)");
  cmd->add_option("--p", o.p, "half order (1..3, default 3)");
  cmd->add_option("--gamma", o.gamma_v, "modified-energy constant");
  cmd->add_option("--theta", o.theta, "monitor strength override");
  cmd->add_option("--mesh-sweeps", o.mesh_sweeps, "mesh relaxation sweeps");
  cmd->add_option("--dt-policy", o.dt_policy, "standard | accuracy");
  cmd->add_option("--wave-speed", o.wave_speed, "auto | numeric");
  cmd->add_option("--outdir", o.outdir, "output directory");
  cmd->add_option("--snapshot-stride", o.snapshot_stride,
                  "steps between snapshots");
  cmd->add_option("--energy-ledger", o.energy_ledger,
                  "assemble numerical energy fluxes (on | off)");
  cmd->add_flag("--compare-reference", o.compare_reference,
                "compare against the cached fine-grid reference");
  cmd->add_option("--reference-n", o.reference_n, "reference resolution");
}

int apply(mlswe_config *cfg, const char *key, const std::string &value) {
  if (mlswe_config_set(cfg, key, value.c_str()) != MLSWE_OK) {
    std::fprintf(stderr, "error: %s\n", mlswe_last_error());
    return 2;
  }
  return 0;
}

int fill_config(mlswe_config *cfg, const CommonOpts &o) {
  // Config file first; explicit flags override its settings.
  if (!o.config_file.empty() &&
      mlswe_config_load_file(cfg, o.config_file.c_str()) != MLSWE_OK) {
    std::fprintf(stderr, "error: %s\n", mlswe_last_error());
    return 2;
  }
  int rc = 0;
  auto set_if = [&](const char *key, const std::string &v) {
    if (rc == 0 && !v.empty())
      rc = apply(cfg, key, v);
  };
  set_if("case", o.case_name);
  if (rc == 0 && o.layers > 0)
    rc = apply(cfg, "layers", std::to_string(o.layers));
  set_if("rho", o.rho);
  if (rc == 0 && o.n1 > 0)
    rc = apply(cfg, "n1", std::to_string(o.n1));
  if (rc == 0 && o.n2 > 0)
    rc = apply(cfg, "n2", std::to_string(o.n2));
  if (rc == 0 && o.cfl >= 0)
    rc = apply(cfg, "cfl", std::to_string(o.cfl));
  if (rc == 0 && o.t_end >= 0)
    rc = apply(cfg, "t_end", std::to_string(o.t_end));
  set_if("mesh", o.mesh);
  set_if("dissipation", o.dissipation);
  if (rc == 0 && o.p > 0)
    rc = apply(cfg, "p", std::to_string(o.p));
  if (rc == 0 && !std::isnan(o.gamma_v))
    rc = apply(cfg, "gamma", std::to_string(o.gamma_v));
  if (rc == 0 && o.theta >= 0)
    rc = apply(cfg, "theta", std::to_string(o.theta));
  if (rc == 0 && o.mesh_sweeps > 0)
    rc = apply(cfg, "mesh_sweeps", std::to_string(o.mesh_sweeps));
  set_if("dt_policy", o.dt_policy);
  set_if("wave_speed", o.wave_speed);
  set_if("outdir", o.outdir);
  if (rc == 0 && o.snapshot_stride >= 0)
    rc = apply(cfg, "snapshot_stride", std::to_string(o.snapshot_stride));
  set_if("energy_ledger", o.energy_ledger);
  if (rc == 0 && o.compare_reference)
    rc = apply(cfg, "compare_reference", "on");
  if (rc == 0 && o.reference_n > 0)
    rc = apply(cfg, "reference_n", std::to_string(o.reference_n));
  return rc;
}

int cmd_run(const CommonOpts &o) {
  ConfigHandle h;
  if (int rc = fill_config(h.cfg, o))
    return rc;
  mlswe_result *res = nullptr;
  const mlswe_status st = mlswe_run(h.cfg, &res);
  if (st == MLSWE_ERR_USAGE || st == MLSWE_ERR_RUNTIME) {
    std::fprintf(stderr, "error: %s\n", mlswe_last_error());
    return 2;
  }
  std::printf("%s\n", mlswe_result_summary(res));
  const int rc = (st == MLSWE_OK) ? 0 : 1;
  mlswe_result_free(res);
  return rc;
}

int cmd_convergence(const CommonOpts &o, std::vector<int> resolutions,
                    bool two_dim_sweep) {
  if (resolutions.size() < 2) {
    std::fprintf(stderr, "error: need at least two resolutions\n");
    return 2;
  }
  std::vector<double> errs;
  for (int n : resolutions) {
    CommonOpts ro = o;
    ro.n1 = n;
    if (two_dim_sweep)
      ro.n2 = n;
    if (ro.dt_policy.empty())
      ro.dt_policy = "accuracy";
    if (!o.outdir.empty())
      ro.outdir = o.outdir + "/n" + std::to_string(n);
    ConfigHandle h;
    if (int rc = fill_config(h.cfg, ro))
      return rc;
    mlswe_result *res = nullptr;
    const mlswe_status st = mlswe_run(h.cfg, &res);
    if (st == MLSWE_ERR_USAGE || st == MLSWE_ERR_RUNTIME) {
      std::fprintf(stderr, "error: %s\n", mlswe_last_error());
      return 2;
    }
    double e = 0.0;
    if (mlswe_result_metric(res, "l1_err_u2", &e) != MLSWE_OK) {
      std::fprintf(stderr, "error: case has no exact solution to compare\n");
      mlswe_result_free(res);
      return 2;
    }
    errs.push_back(e);
    std::printf("n=%d l1_err_u2=%.6e\n", n, e);
    mlswe_result_free(res);
  }
  std::printf("# n      l1_err_u2      order\n");
  for (std::size_t k = 0; k < errs.size(); ++k) {
    if (k == 0) {
      std::printf("%6d  %.6e      -\n", resolutions[k], errs[k]);
    } else {
      const double order =
          std::log(errs[k - 1] / errs[k]) /
          std::log(double(resolutions[k] - 1) / (resolutions[k - 1] - 1));
      std::printf("%6d  %.6e  %6.3f\n", resolutions[k], errs[k], order);
    }
  }
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"multi-layer shallow water solver"};
  app.require_subcommand(1);

  CommonOpts run_opts, conv_opts;
  std::vector<int> resolutions;
  bool sweep_2d = false;

  CLI::App *run_cmd = app.add_subcommand("run", "run one case");
  add_common(run_cmd, run_opts);

  CLI::App *conv_cmd =
      app.add_subcommand("convergence", "resolution sweep with orders");
  add_common(conv_cmd, conv_opts);
  conv_cmd->add_option("--resolutions", resolutions, "node counts")
      ->required();
  conv_cmd->add_flag("--square", sweep_2d, "apply the count to n2 as well");

  CLI::App *list_cmd = app.add_subcommand("list-cases", "print the catalogue");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (list_cmd->parsed()) {
    for (int i = 0; i < mlswe_case_count(); ++i)
      std::printf("%s\n", mlswe_case_name(i));
    return 0;
  }
  if (run_cmd->parsed())
    return cmd_run(run_opts);
  return cmd_convergence(conv_opts, resolutions, sweep_2d);
}
