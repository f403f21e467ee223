#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "core/dissipation.hpp"
#include "core/ec_flux.hpp"
#include "core/energy.hpp"
#include "core/grid.hpp"
#include "core/state.hpp"
#include "core/wave_speed.hpp"

namespace mlswe {

/// Scheme parameters shared by the fixed- and moving-mesh solvers.
struct SchemeConfig {
  OrderCoeffs oc = order_coeffs(3);
  bool dissipation = true;   // off: the energy-conservative scheme
  bool energy_ledger = false; // assemble numerical energy fluxes alongside
  WaveSpeedMode wave_speed = WaveSpeedMode::automatic;
  double cfl = 0.4;
  bool accuracy_dt = false; // dt = cfl * (min dx)^(5/3), for convergence runs
};

/// Pointwise extra source (manufactured-solution runs); fills S[0..3M).
using SourceFn =
    std::function<void(double x1, double x2, double t, double *S)>;

/// Numerical energy fluxes at interfaces; entry (i, j) of q1 is the flux at
/// interface (i-1/2, j), valid for i = 0..n1 (q2 analogous in j).
struct EnergyFluxes {
  Field q1, q2;
};

class FixedSolver {
public:
  FixedSolver(LayerSystem sys, Grid grid, SchemeConfig scheme);
  ~FixedSolver();

  const LayerSystem &system() const { return sys_; }
  const Grid &grid() const { return grid_; }
  const SchemeConfig &scheme() const { return scheme_; }
  State &state() { return state_; }
  const State &state() const { return state_; }

  void set_source(SourceFn s) { source_ = std::move(s); }
  void set_time(double t) { time_ = t; }
  double time() const { return time_; }
  int step_count() const { return steps_; }

  /// CFL time step of the fully-discrete scheme; caches the per-direction
  /// maximal wave speeds.
  double suggest_dt();
  double cached_alpha(int dir) const { return dir == 1 ? alpha1_ : alpha2_; }

  /// One SSP-RK3 step (three tendency evaluations at t, t+dt, t+dt/2).
  void step(double dt);

  /// Semi-discrete tendency of the conserved variables; dudt.b is untouched.
  /// Fills the numerical energy fluxes when the ledger is enabled and qes is
  /// non-null.
  void compute_rhs(const State &s, double t, State &dudt,
                   EnergyFluxes *qes = nullptr);

  /// Fixed-order compensated sum of eta over nodes times the cell measure.
  double total_energy() const;

  /// Nodal energy-inequality residual V^T dU/dt + div(Q_es); nonpositive up
  /// to roundoff for the ES scheme, zero for the EC scheme.
  void energy_residual(const State &s, double t, Field &res);

  int hyperbolicity_warnings() const { return hyperbolic_warnings_; }

private:
  struct LineWS;

  void assemble_direction(const State &s, int dir, State &dudt,
                          EnergyFluxes *qes);
  void run_line(const State &s, int dir, int fixed, State &dudt,
                EnergyFluxes *qes, LineWS &ws);
  void check_admissible(const State &s) const;

  LayerSystem sys_;
  Grid grid_;
  SchemeConfig scheme_;
  State state_;
  State stage_, rhs_;
  SourceFn source_;
  double time_ = 0.0;
  int steps_ = 0;
  double alpha1_ = 0.0, alpha2_ = 0.0;
  int hyperbolic_warnings_ = 0;
  std::vector<std::unique_ptr<LineWS>> ws_; // one per worker
};

/// Worker count used for line-parallel loops (MLSWE_THREADS, default 1 for
/// small grids and the hardware count for large ones).  Partitioning is by
/// contiguous line ranges with disjoint writes, so results are bitwise
/// independent of the thread count.
int worker_count(std::size_t work_items);

void parallel_lines(int nlines, const std::function<void(int, int, int)> &fn);

} // namespace mlswe
