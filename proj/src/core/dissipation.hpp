#pragma once

#include <vector>

#include "core/energy.hpp"
#include "core/layer_system.hpp"

namespace mlswe {

/// WENO-based, sign-stable dissipation operators shared by the fixed- and
/// moving-mesh schemes.  All operators act on one interface at a time from a
/// six-node window (nodes I-2 .. I+3 around interface I+1/2).

/// Scratch buffers reused across interfaces.
struct DissipationScratch {
  std::vector<double> vt;   // scaled variables, 6 nodes x 3M
  std::vector<double> jump; // WENO jump per component
  std::vector<double> yw;   // Y * jump
  void resize(int M);
};

/// D = 1/2 alpha R(Ubar) Y <<Vtilde>> for one interface.
/// Vnodes holds the six nodal entropy-variable vectors contiguously
/// (Vnodes[r * 3M + c], r = 0..5 for nodes I-2..I+3).  coeffs/ubar/vbar are
/// frozen at the interface state used to build R.  The raw jump entering the
/// sign matrix Y is R^T (V_{I+1} - V_I).
/// Returns the entropy-dissipation rate <<V>>^T Y <<Vtilde>> >= 0 by the sign
/// property; callers use it for the energy-flux ledger via D itself.
void scaled_weno_dissipation(const LayerSystem &sys, const ScalingCoeffs &coeffs,
                             const double *ubar, const double *vbar,
                             double alpha, const double *Vnodes, double *D,
                             DissipationScratch &ws);

/// Interface rotation aligning the dissipation frame with the direction's
/// metric vector; phi = atan2(m12, m11) for dir 1 and atan2(-m21, m22) for
/// dir 2, so Cartesian metrics give the identity exactly.
struct Rotation {
  double c = 1.0, s = 0.0;
};

Rotation interface_rotation(int dir, double ma, double mb);

/// The sign matrix of the bathymetry-transport dissipation: entries for Uhat
/// components, with slots 3M-2 and 3M+1 (depth of layer M and b) sharing one
/// flag that requires both conditions.  jmpU is the WENO jump of Uhat, jmpV
/// the raw jump of Vhat (both 3M+1 entries).
void ring_sign_matrix(int M, const double *jmpU, const double *jmpV,
                      double *Y);

} // namespace mlswe
