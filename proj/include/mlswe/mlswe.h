/* C interface of the multi-layer shallow water solver library.
 *
 * Usage: create a config, apply key=value settings (the same keys the
 * config-file format uses), execute the run, then query result metrics.
 * All functions return an mlswe_status unless documented otherwise; the
 * last error message of the calling thread is available through
 * mlswe_last_error().
 */
#ifndef MLSWE_H
#define MLSWE_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mlswe_status {
  MLSWE_OK = 0,
  MLSWE_ERR_USAGE = 1,   /* bad key, value, or configuration */
  MLSWE_ERR_RUNTIME = 2, /* solver failure (dry state, tangled mesh, ...) */
  MLSWE_CHECK_FAILED = 3 /* run finished but a case-declared check failed */
} mlswe_status;

typedef struct mlswe_config mlswe_config;
typedef struct mlswe_result mlswe_result;

const char *mlswe_version(void);

/* Message describing the most recent failure on this thread. */
const char *mlswe_last_error(void);

mlswe_config *mlswe_config_new(void);
void mlswe_config_free(mlswe_config *cfg);

/* Applies one key=value setting (keys: case, layers, rho, n1, n2, cfl,
 * t_end, mesh, dissipation, p, gamma, theta, mesh_sweeps, dt_policy,
 * wave_speed, outdir, snapshot_stride, energy_ledger, compare_reference,
 * reference_n). */
mlswe_status mlswe_config_set(mlswe_config *cfg, const char *key,
                              const char *value);

/* Reads a key=value config file; '#' starts a comment. */
mlswe_status mlswe_config_load_file(mlswe_config *cfg, const char *path);

/* Executes the configured run, writing snapshots/energy/report files into
 * the configured output directory.  On MLSWE_OK or MLSWE_CHECK_FAILED a
 * result handle is stored into *out (caller frees). */
mlswe_status mlswe_run(const mlswe_config *cfg, mlswe_result **out);

void mlswe_result_free(mlswe_result *res);

/* One-line run summary (owned by the result). */
const char *mlswe_result_summary(const mlswe_result *res);

/* Numeric metric lookup (e.g. "max_surface_err", "max_velocity",
 * "l1_err_u2", "linf_err_u2", "total_energy_final", "energy_monotone",
 * "steps").  Returns MLSWE_ERR_USAGE when the metric is absent. */
mlswe_status mlswe_result_metric(const mlswe_result *res, const char *name,
                                 double *value);

/* Benchmark catalogue. */
int mlswe_case_count(void);
const char *mlswe_case_name(int index);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* MLSWE_H */
