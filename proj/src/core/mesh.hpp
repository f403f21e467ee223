#pragma once

#include "core/ec_flux.hpp"
#include "core/grid.hpp"
#include "core/state.hpp"

namespace mlswe {

/// Monitor-function configuration for the variational mesh redistribution.
/// sigma selects the adapted field: a single layer depth h_m or a plain
/// surface level sum_{k>=m} h_k + b.
struct MonitorConfig {
  enum class Sigma { layer_depth, surface_level, depth_plus_b };
  Sigma sigma = Sigma::surface_level;
  int sigma_layer = 1;          // m in the selector above (1-based)
  double theta = 100.0;         // gradient concentration strength
  double theta_laplacian = 0.0; // extra curvature term (vortex-type runs)
  int smoothing_passes = 3;     // 3x3 low-pass sweeps applied to omega
  int sweeps = 10;              // damped Jacobi relaxation sweeps
  double damping = 0.7;
};

/// Mesh geometry of the moving-mesh scheme: physical coordinates on the
/// fixed computational lattice, mesh velocities, the evolved Jacobian, and
/// the six metric terms.  Coordinates live on a twice-padded lattice so the
/// metric stencils can be evaluated throughout the solver's ghost margin.
class MovingMesh {
public:
  explicit MovingMesh(const Grid &grid);

  const Grid &grid() const { return grid_; }
  const Grid &coord_grid() const { return wide_; }

  Field x1, x2;       // on coord_grid()
  Field xdot1, xdot2; // on coord_grid()
  Field J;            // on grid(), evolved through the discrete VCL
  Field m11, m12, m21, m22; // (J dxi_l / dx_k) on grid(), ghosts included
  Field mt1, mt2;           // (J dxi_l / dt)

  /// Resets coordinates to the identity map x = xi and zero velocities.
  void reset_identity();

  /// Mirror (outflow) or offset-periodic extension of coordinates and mesh
  /// velocities into the wide ghost margin.
  void fill_coordinate_ghosts();

  /// Spatial metric terms by the alpha-weighted central differences of the
  /// coordinates, then the temporal ones from the mesh velocities.  1D runs
  /// use (m11, m12, m21) = (1, 0, 0) and m22 = dx/dxi.
  void compute_metrics(const OrderCoeffs &oc);

  /// Discrete Jacobian determinant m11 m22 - m12 m21 from current metrics.
  double jacobian_from_metrics(int i, int j) const;

  /// Initializes the evolved J from the coordinate determinant; throws on
  /// nonpositive values (tangled mesh).
  void init_jacobian();

private:
  Grid grid_;
  Grid wide_;
};

/// omega = sqrt(1 + theta (|grad sigma| / max)^2 [+ theta_lap (|lap| /
/// max)^2]), smoothed; identically 1 when sigma is flat.
void compute_monitor(const Grid &g, const LayerSystem &sys, const State &s,
                     const MonitorConfig &mc, Field &omega);

/// Damped Jacobi relaxation of sum_l d/dxi_l (omega dx/dxi_l) = 0 with
/// edge-harmonic-mean weights.  Endpoints stay pinned; 2D boundary nodes
/// slide along their edge.  Coordinates are updated in place (interior of
/// the wide lattice).
void relax_mesh(const MovingMesh &mesh, const Field &omega,
                const MonitorConfig &mc, Field &x1, Field &x2);

} // namespace mlswe
