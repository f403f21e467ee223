#pragma once

#include <array>

#include "core/layer_system.hpp"
#include "core/state.hpp"

namespace mlswe {

/// Coefficients alpha_{p,q} of the 2p-th order flux combinations.  They
/// satisfy sum_q q alpha_{p,q} = 1 and sum_q q^{2s-1} alpha_{p,q} = 0 for
/// s = 2..p.
struct OrderCoeffs {
  int p = 3;
  std::array<double, 3> a{1.5, -0.3, 1.0 / 30.0};
};

OrderCoeffs order_coeffs(int p);

/// Two-point energy-conservative flux, per layer
///   (<h><un>, <h><un>^2 + g/2 <h^2> + g(<h z> - <h><z>), <h><un><ut>)
/// arranged into the conserved slot order; un is u for dir 1 and v for dir 2.
/// <h^2> is the mean of squares, not the squared mean.
void ec_two_point_flux(const LayerSystem &sys, int dir, const double *hL,
                       const double *uL, const double *vL, const double *zL,
                       const double *hR, const double *uR, const double *vR,
                       const double *zR, double *F);

/// Single-layer kernel of the flux above, shared with the solver hot loops.
inline void ec_layer_flux(double g, int dir, double hL, double uL, double vL,
                          double zL, double hR, double uR, double vR,
                          double zR, double *F3) {
  const double hm = 0.5 * (hL + hR);
  const double um = 0.5 * (uL + uR);
  const double vm = 0.5 * (vL + vR);
  const double h2m = 0.5 * (hL * hL + hR * hR);
  const double hzm = 0.5 * (hL * zL + hR * zR);
  const double zm = 0.5 * (zL + zR);
  const double pm = 0.5 * g * h2m + g * (hzm - hm * zm);
  if (dir == 1) {
    F3[0] = hm * um;
    F3[1] = hm * um * um + pm;
    F3[2] = hm * um * vm;
  } else {
    F3[0] = hm * vm;
    F3[1] = hm * um * vm;
    F3[2] = hm * vm * vm + pm;
  }
}

void ec_two_point_flux(const LayerSystem &sys, int dir, const NodeState &L,
                       const NodeState &R, double *F);

/// Signed residual of the per-layer jump identity for layer m (1-based):
///   (V_m(R) - V_m(L)) . F_m - [psi_m] - rho_m g [h z u]
///   + (rho_m/2) g [h u] (z_L + z_R)
double ec_condition_residual_layer(const LayerSystem &sys, int dir,
                                   const NodeState &L, const NodeState &R,
                                   const double *F, int m);

/// |sum of the M per-layer residuals|; zero (to roundoff) for the EC flux.
double ec_condition_residual(const LayerSystem &sys, int dir,
                             const NodeState &L, const NodeState &R,
                             const double *F);

/// Two-point numerical energy flux consistent with q_dir:
///   1/2 (V_L + V_R)^T F - 1/2 (psi_L + psi_R)
///   + sum_m g rho_m/4 ((h un)_L + (h un)_R)(z_L + z_R)
///   - sum_m g rho_m/2 ((h un z)_L + (h un z)_R).
double ec_two_point_energy_flux(const LayerSystem &sys, int dir,
                                const double *hL, const double *uL,
                                const double *vL, const double *zL, double bL,
                                const double *hR, const double *uR,
                                const double *vR, const double *zR, double bR,
                                const double *F);

/// 2p-th order interface flux from the window U_{i-p+1}..U_{i+p} around the
/// interface i+1/2 (window[p-1] is node i):
///   sum_q alpha_{p,q} sum_{s=0}^{q-1} Ftilde(U_{i-s}, U_{i-s+q}).
void high_order_flux(const LayerSystem &sys, int dir, const OrderCoeffs &oc,
                     const NodeState *window, double *F);

/// Matching source-term combination for layer m: the alpha-weighted two-point
/// means of z_m over the same pairs.
double high_order_source(const LayerSystem &sys, const OrderCoeffs &oc,
                         const NodeState *window, int m);

} // namespace mlswe
