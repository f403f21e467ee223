#include "core/dissipation.hpp"

#include <cmath>
#include <stdexcept>

#include "core/weno.hpp"

namespace mlswe {

void DissipationScratch::resize(int M) {
  vt.assign(6 * 3 * M, 0.0);
  jump.assign(3 * M, 0.0);
  yw.assign(3 * M, 0.0);
}

void scaled_weno_dissipation(const LayerSystem &sys, const ScalingCoeffs &coeffs,
                             const double *ubar, const double *vbar,
                             double alpha, const double *Vnodes, double *D,
                             DissipationScratch &ws) {
  const int n = 3 * sys.layers();
  for (int r = 0; r < 6; ++r)
    apply_rt(sys, coeffs, ubar, vbar, Vnodes + r * n, ws.vt.data() + r * n);

  for (int c = 0; c < n; ++c) {
    double s[5];
    for (int r = 0; r < 5; ++r)
      s[r] = ws.vt[r * n + c]; // nodes I-2..I+2
    const double left = weno::left_limit(s);
    for (int r = 0; r < 5; ++r)
      s[r] = ws.vt[(r + 1) * n + c]; // nodes I-1..I+3
    const double right = weno::right_limit(s);
    const double jw = right - left;
    const double raw = ws.vt[3 * n + c] - ws.vt[2 * n + c];
    const bool keep = jw * raw >= 0.0;
    ws.jump[c] = jw;
    ws.yw[c] = keep ? jw : 0.0;
  }
  apply_r(sys, coeffs, ubar, vbar, ws.yw.data(), D);
  for (int c = 0; c < n; ++c)
    D[c] *= 0.5 * alpha;
}

Rotation interface_rotation(int dir, double ma, double mb) {
  // (ma, mb) = (m11, m12) for dir 1 and (m21, m22) for dir 2.
  if (ma == 0.0 && mb == 0.0)
    throw std::runtime_error("degenerate mesh metrics at an interface");
  Rotation r;
  const double phi = (dir == 1) ? std::atan2(mb, ma) : std::atan2(-ma, mb);
  r.c = std::cos(phi);
  r.s = std::sin(phi);
  return r;
}

void ring_sign_matrix(int M, const double *jmpU, const double *jmpV,
                      double *Y) {
  const int n = 3 * M + 1;
  const int hM = 3 * M - 3; // 0-based slot of h_M
  const int bs = 3 * M;     // 0-based slot of b
  for (int c = 0; c < n; ++c)
    Y[c] = (jmpU[c] * jmpV[c] >= 0.0) ? 1.0 : 0.0;
  const bool pair = (jmpU[hM] * jmpV[hM] >= 0.0) && (jmpU[bs] * jmpV[bs] >= 0.0);
  Y[hM] = Y[bs] = pair ? 1.0 : 0.0;
}

} // namespace mlswe
