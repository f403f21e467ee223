#include "core/weno.hpp"

#include <cmath>

namespace mlswe::weno {

void smoothness(const double *v, double *beta) {
  const double c0 = 13.0 / 12.0, c1 = 0.25;
  beta[0] = c0 * (v[0] - 2.0 * v[1] + v[2]) * (v[0] - 2.0 * v[1] + v[2]) +
            c1 * (v[0] - 4.0 * v[1] + 3.0 * v[2]) * (v[0] - 4.0 * v[1] + 3.0 * v[2]);
  beta[1] = c0 * (v[1] - 2.0 * v[2] + v[3]) * (v[1] - 2.0 * v[2] + v[3]) +
            c1 * (v[1] - v[3]) * (v[1] - v[3]);
  beta[2] = c0 * (v[2] - 2.0 * v[3] + v[4]) * (v[2] - 2.0 * v[3] + v[4]) +
            c1 * (3.0 * v[2] - 4.0 * v[3] + v[4]) * (3.0 * v[2] - 4.0 * v[3] + v[4]);
}

Weights z_weights(const double *beta) {
  const double tau5 = std::abs(beta[0] - beta[2]);
  const double r0 = tau5 / (beta[0] + kEps);
  const double r1 = tau5 / (beta[1] + kEps);
  const double r2 = tau5 / (beta[2] + kEps);
  double a0 = 0.1 * (1.0 + r0 * r0);
  double a1 = 0.6 * (1.0 + r1 * r1);
  double a2 = 0.3 * (1.0 + r2 * r2);
  const double inv = 1.0 / (a0 + a1 + a2);
  return Weights{a0 * inv, a1 * inv, a2 * inv};
}

double apply_left(const double *v, const Weights &w) {
  const double f0 = (2.0 * v[0] - 7.0 * v[1] + 11.0 * v[2]) / 6.0;
  const double f1 = (-v[1] + 5.0 * v[2] + 2.0 * v[3]) / 6.0;
  const double f2 = (2.0 * v[2] + 5.0 * v[3] - v[4]) / 6.0;
  return w.w0 * f0 + w.w1 * f1 + w.w2 * f2;
}

double left_limit(const double *v5) {
  double beta[3];
  smoothness(v5, beta);
  return apply_left(v5, z_weights(beta));
}

double right_limit(const double *v5) {
  const double r[5] = {v5[4], v5[3], v5[2], v5[1], v5[0]};
  return left_limit(r);
}

} // namespace mlswe::weno
