#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "core/dissipation.hpp"
#include "core/fixed_solver.hpp"
#include "core/mesh.hpp"

namespace mlswe {

/// Curvilinear two-point EC flux (3M+1 components):
///   mean(J xi_t) Utilde + mean(J xi_x1) Fhat_1 + mean(J xi_x2) Fhat_2,
/// with Utilde = (<h_m>, <h_m><u_m>, <h_m><v_m>, ..., <b>) and Fhat_k the
/// fixed-mesh EC fluxes padded with a zero last entry.
void curvilinear_two_point_flux(const LayerSystem &sys, const NodeState &L,
                                const NodeState &R, double mtL, double mtR,
                                double m1L, double m1R, double m2L, double m2R,
                                double *F);

/// Solver for the reformulated system (b evolved as a conserved component)
/// on an adaptive moving mesh: evolves Ucal = J * (U, b) and J through the
/// coupled SSP-RK3 update with the mesh velocity held fixed over the stages.
class MovingSolver {
public:
  MovingSolver(LayerSystem sys, Grid grid, SchemeConfig scheme, double gamma);
  ~MovingSolver();

  const LayerSystem &system() const { return sys_; }
  const Grid &grid() const { return grid_; }
  const SchemeConfig &scheme() const { return scheme_; }
  double gamma() const { return gamma_; }

  State &phys() { return phys_; }
  const State &phys() const { return phys_; }
  MovingMesh &mesh() { return mesh_; }
  const MovingMesh &mesh() const { return mesh_; }

  void set_source(SourceFn s) { source_ = std::move(s); }
  void set_time(double t) { time_ = t; }
  double time() const { return time_; }
  int step_count() const { return steps_; }

  /// Call once after the physical state and mesh coordinates are set:
  /// fills ghosts, computes metrics, initializes J and Ucal = J (U, b).
  void sync_from_phys();

  /// Moving-mesh CFL step using alpha_hat = |J xi_t + Ltilde alpha(TU)| at
  /// nodes; recomputes metrics for the current coordinates and velocities.
  /// with_mesh_motion = false evaluates the frozen-mesh part only (used to
  /// size the mesh velocity before the step).
  double suggest_dt(bool with_mesh_motion = true);

  /// One coupled SSP-RK3 step of (Ucal, J, x); mesh velocities stay fixed.
  void step(double dt);

  /// sum_ij J eta(U) dxi1 dxi2 (physical energy, compensated fixed order).
  double total_energy() const;

  /// Nodal rate Vhat^T dUcal/dt - phi_hat dJ/dt + div(Q_es); nonpositive up
  /// to roundoff (zero in EC mode).
  void energy_residual(Field &res);

  /// Discrete surface-conservation-law residuals of the current metrics
  /// (max-norm over the interior); zero to roundoff by construction.
  double scl_residual();

  int hyperbolicity_warnings() const { return hyperbolic_warnings_; }

private:
  struct LineWS;

  void compute_rhs(std::vector<Field> &dUc, Field &dJ, EnergyFluxes *qes);
  void add_source(double t);
  void assemble_direction(int dir, std::vector<Field> &dUc, Field &dJ,
                          EnergyFluxes *qes);
  void run_line(int dir, int fixed, std::vector<Field> &dUc, Field &dJ,
                EnergyFluxes *qes, LineWS &ws);
  void recover_phys();
  void after_stage();

  LayerSystem sys_;
  Grid grid_;
  SchemeConfig scheme_;
  double gamma_;
  State phys_;
  MovingMesh mesh_;
  std::vector<Field> Uc_, Uc0_, dUc_;
  Field J0_, dJ_, x10_, x20_;
  SourceFn source_;
  double time_ = 0.0;
  int steps_ = 0;
  int hyperbolic_warnings_ = 0;
  std::vector<std::unique_ptr<LineWS>> ws_;
};

} // namespace mlswe
