#pragma once

#include <map>
#include <string>
#include <vector>

#include "core/cases.hpp"

namespace mlswe {

class UsageError : public std::runtime_error {
public:
  explicit UsageError(const std::string &what) : std::runtime_error(what) {}
};

/// Run configuration; parsed from key=value pairs (config file lines and CLI
/// flags share the same keys, flags win).  Unknown keys are rejected.
struct RunConfig {
  std::string case_name;
  int layers = 0; // 0 = case default
  std::vector<double> rho;
  int n1 = 0, n2 = 0;
  double cfl = 0.4;
  double t_end = -1.0;
  bool moving = false;
  bool dissipation = true;
  int p = 3;
  double gamma = -1.0; // < 0: rho_M
  double theta = -1.0; // < 0: case default
  int mesh_sweeps = -1;
  std::string dt_policy = "standard"; // standard | accuracy
  std::string wave_speed = "auto";    // auto | numeric
  std::string outdir = "mlswe_out";
  int snapshot_stride = 0; // steps between snapshots; 0 = events only
  bool energy_ledger = false;
  bool compare_reference = false;
  int reference_n = 3000;

  /// Applies one key=value setting; throws UsageError on unknown keys or
  /// malformed values.
  void set(const std::string &key, const std::string &value);

  /// Reads a key=value config file ('#' comments allowed).
  void load_file(const std::string &path);

  /// Validates cross-field constraints against the resolved case (grid large
  /// enough for the stencil, cfl in (0,1], gamma above rho_M/2, ...);
  /// malformed configurations surface as UsageError.
  void validate() const;

private:
  void validate_resolved() const;
public:
};

struct RunResult {
  int status = 0; // 0 ok, 1 case-declared checks failed
  std::map<std::string, double> metrics;
  std::string summary;
};

/// Executes a configured run: writes snapshots, the energy series, and the
/// per-case report into outdir; returns metrics and the one-line summary.
RunResult run(const RunConfig &cfg);

/// log-ratio convergence orders from errors at increasing resolutions.
std::vector<double> convergence_orders(const std::vector<int> &n,
                                       const std::vector<double> &err);

} // namespace mlswe
