#include "core/ec_flux.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "core/energy.hpp"

namespace mlswe {

OrderCoeffs order_coeffs(int p) {
  OrderCoeffs oc;
  oc.p = p;
  switch (p) {
  case 1:
    oc.a = {1.0, 0.0, 0.0};
    break;
  case 2:
    oc.a = {4.0 / 3.0, -1.0 / 6.0, 0.0};
    break;
  case 3:
    oc.a = {1.5, -0.3, 1.0 / 30.0};
    break;
  default:
    throw std::invalid_argument("order_coeffs: p must be 1, 2 or 3");
  }
  return oc;
}

void ec_two_point_flux(const LayerSystem &sys, int dir, const double *hL,
                       const double *uL, const double *vL, const double *zL,
                       const double *hR, const double *uR, const double *vR,
                       const double *zR, double *F) {
  const int M = sys.layers();
  const double g = sys.g();
  for (int m = 0; m < M; ++m)
    ec_layer_flux(g, dir, hL[m], uL[m], vL[m], zL[m], hR[m], uR[m], vR[m],
                  zR[m], F + 3 * m);
}

namespace {

void node_z(const LayerSystem &sys, const NodeState &n, double *z) {
  for (int m = 1; m <= sys.layers(); ++m)
    z[m - 1] = layer_z(sys, n.h.data(), n.b, m);
}

} // namespace

void ec_two_point_flux(const LayerSystem &sys, int dir, const NodeState &L,
                       const NodeState &R, double *F) {
  const int M = sys.layers();
  std::vector<double> zL(M), zR(M);
  node_z(sys, L, zL.data());
  node_z(sys, R, zR.data());
  ec_two_point_flux(sys, dir, L.h.data(), L.u.data(), L.v.data(), zL.data(),
                    R.h.data(), R.u.data(), R.v.data(), zR.data(), F);
}

double ec_condition_residual_layer(const LayerSystem &sys, int dir,
                                   const NodeState &L, const NodeState &R,
                                   const double *F, int m) {
  const int M = sys.layers();
  const double g = sys.g();
  std::vector<double> VL(3 * M), VR(3 * M);
  entropy_variables(sys, L, VL.data());
  entropy_variables(sys, R, VR.data());
  const int s = 3 * (m - 1);
  double lhs = 0.0;
  for (int c = 0; c < 3; ++c)
    lhs += (VR[s + c] - VL[s + c]) * F[s + c];

  const double zLm = layer_z(sys, L, m), zRm = layer_z(sys, R, m);
  const double unL = (dir == 1) ? L.u[m - 1] : L.v[m - 1];
  const double unR = (dir == 1) ? R.u[m - 1] : R.v[m - 1];
  const double rho = sys.rho(m);
  const double psiL = 0.5 * g * rho * L.h[m - 1] * L.h[m - 1] * unL;
  const double psiR = 0.5 * g * rho * R.h[m - 1] * R.h[m - 1] * unR;
  double rhs = psiR - psiL;
  rhs += rho * g * (R.h[m - 1] * zRm * unR - L.h[m - 1] * zLm * unL);
  rhs -= 0.5 * rho * g * (R.h[m - 1] * unR - L.h[m - 1] * unL) * (zLm + zRm);
  return lhs - rhs;
}

double ec_condition_residual(const LayerSystem &sys, int dir,
                             const NodeState &L, const NodeState &R,
                             const double *F) {
  double r = 0.0;
  for (int m = 1; m <= sys.layers(); ++m)
    r += ec_condition_residual_layer(sys, dir, L, R, F, m);
  return std::abs(r);
}

double ec_two_point_energy_flux(const LayerSystem &sys, int dir,
                                const double *hL, const double *uL,
                                const double *vL, const double *zL, double bL,
                                const double *hR, const double *uR,
                                const double *vR, const double *zR, double bR,
                                const double *F) {
  const int M = sys.layers();
  const double g = sys.g();
  std::vector<double> VL(3 * M), VR(3 * M);
  entropy_variables(sys, hL, uL, vL, bL, VL.data());
  entropy_variables(sys, hR, uR, vR, bR, VR.data());
  double q = 0.0;
  for (int c = 0; c < 3 * M; ++c)
    q += 0.5 * (VL[c] + VR[c]) * F[c];
  const Potentials pL = potentials(sys, hL, uL, vL, bL);
  const Potentials pR = potentials(sys, hR, uR, vR, bR);
  q -= 0.5 * ((dir == 1) ? pL.psi1 + pR.psi1 : pL.psi2 + pR.psi2);
  for (int m = 0; m < M; ++m) {
    const double unL = (dir == 1) ? uL[m] : vL[m];
    const double unR = (dir == 1) ? uR[m] : vR[m];
    const double rho = sys.rho(m + 1);
    q += 0.25 * g * rho * (hL[m] * unL + hR[m] * unR) * (zL[m] + zR[m]);
    q -= 0.5 * g * rho * (hL[m] * unL * zL[m] + hR[m] * unR * zR[m]);
  }
  return q;
}

void high_order_flux(const LayerSystem &sys, int dir, const OrderCoeffs &oc,
                     const NodeState *window, double *F) {
  const int M = sys.layers();
  const int p = oc.p;
  std::vector<double> pair(3 * M);
  for (int c = 0; c < 3 * M; ++c)
    F[c] = 0.0;
  // window[k] holds U_{i-p+1+k}; node i sits at window[p-1].
  for (int q = 1; q <= p; ++q) {
    for (int s = 0; s <= q - 1; ++s) {
      const NodeState &L = window[p - 1 - s];
      const NodeState &R = window[p - 1 - s + q];
      ec_two_point_flux(sys, dir, L, R, pair.data());
      for (int c = 0; c < 3 * M; ++c)
        F[c] += oc.a[q - 1] * pair[c];
    }
  }
}

double high_order_source(const LayerSystem &sys, const OrderCoeffs &oc,
                         const NodeState *window, int m) {
  const int p = oc.p;
  double acc = 0.0;
  for (int q = 1; q <= p; ++q) {
    for (int s = 0; s <= q - 1; ++s) {
      const double zL = layer_z(sys, window[p - 1 - s], m);
      const double zR = layer_z(sys, window[p - 1 - s + q], m);
      acc += oc.a[q - 1] * 0.5 * (zL + zR);
    }
  }
  return acc;
}

} // namespace mlswe
