#include "core/wave_speed.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "core/energy.hpp"

namespace mlswe {

CharPolyCoeffs charpoly_m2(double h1, double h2, double u1, double u2,
                           double r12, double g) {
  CharPolyCoeffs cp;
  cp.degree = 4;
  cp.c[0] = -2.0 * (u1 + u2);
  cp.c[1] = (u1 + u2) * (u1 + u2) + 2.0 * u1 * u2 - g * (h1 + h2);
  cp.c[2] = -2.0 * u1 * u1 * u2 - 2.0 * u1 * u2 * u2 + 2.0 * g * h2 * u1 +
            2.0 * g * h1 * u2;
  cp.c[3] = u1 * u1 * u2 * u2 - g * h1 * u2 * u2 - g * h2 * u1 * u1 +
            g * g * h1 * h2 * (1.0 - r12);
  return cp;
}

CharPolyCoeffs charpoly_m3(const double *h, const double *u, double r12,
                           double r13, double r23, double g) {
  const double h1 = h[0], h2 = h[1], h3 = h[2];
  const double u1 = u[0], u2 = u[1], u3 = u[2];
  CharPolyCoeffs cp;
  cp.degree = 6;
  cp.c[0] = -2.0 * (u1 + u2 + u3);
  const double usum = u1 + u2 + u3;
  cp.c[1] = usum * usum + 2.0 * (u1 * u2 + u1 * u3 + u2 * u3) -
            g * (h1 + h2 + h3);
  cp.c[2] = 2.0 * g *
                (h1 * (u2 + u3) + h2 * (u1 + u3) + h3 * (u1 + u2)) -
            2.0 * (u1 * u1 * (u2 + u3) +
                   u1 * (u2 * u2 + 4.0 * u2 * u3 + u3 * u3) +
                   u2 * u3 * (u2 + u3));
  // The pairwise interface couplings h_i h_k (1 - r_ik) drive the quadratic
  // term; the kinetic parts mirror the two-layer pattern layer by layer.
  cp.c[3] = g * g *
                (h1 * h2 * (1.0 - r12) + h1 * h3 * (1.0 - r13) +
                 h2 * h3 * (1.0 - r23)) -
            g * (h1 * (u2 * u2 + 4.0 * u2 * u3 + u3 * u3) +
                 h2 * (u1 * u1 + 4.0 * u1 * u3 + u3 * u3) +
                 h3 * (u1 * u1 + 4.0 * u1 * u2 + u2 * u2)) +
            u1 * u1 * (u2 * u2 + 4.0 * u2 * u3 + u3 * u3) +
            4.0 * u1 * u2 * u3 * (u2 + u3) + u2 * u2 * u3 * u3;
  cp.c[4] = 2.0 * (g * g *
                       (h1 * h2 * (r12 - 1.0) * u3 + h1 * h3 * (r13 - 1.0) * u2 +
                        h2 * h3 * (r23 - 1.0) * u1) +
                   g * (h1 * u2 * u3 * (u2 + u3) + h2 * u1 * u3 * (u1 + u3) +
                        h3 * u1 * u2 * (u1 + u2)) -
                   u1 * u2 * u3 * (u1 * (u2 + u3) + u2 * u3));
  cp.c[5] = g * g * g * h1 * h2 * h3 * (r12 + r23 - r12 * r23 - 1.0) +
            g * g *
                (-h1 * h2 * (r12 - 1.0) * u3 * u3 -
                 h1 * h3 * (r13 - 1.0) * u2 * u2 -
                 h2 * h3 * (r23 - 1.0) * u1 * u1) -
            g * (u3 * u3 * (h1 * u2 * u2 + h2 * u1 * u1) +
                 h3 * u1 * u1 * u2 * u2) +
            u1 * u1 * u2 * u2 * u3 * u3;
  return cp;
}

namespace {

// Sum of the two largest |c_j|^(1/j) over negative coefficients; one element
// gives that element, none gives zero.  Roots via exp(log|c|/j) so c = 0
// never enters a pow edge case.
double lagrange_upper(const double *c, int degree) {
  double best = 0.0, second = 0.0;
  for (int j = 1; j <= degree; ++j) {
    const double cj = c[j - 1];
    if (!std::isfinite(cj))
      throw std::runtime_error("lagrange_bounds: non-finite coefficient");
    if (cj < 0.0) {
      const double r = std::exp(std::log(-cj) / j);
      if (r > best) {
        second = best;
        best = r;
      } else if (r > second) {
        second = r;
      }
    }
  }
  return best + second;
}

} // namespace

RootBounds lagrange_bounds(const CharPolyCoeffs &cp) {
  RootBounds b;
  b.upper = lagrange_upper(cp.c, cp.degree);
  double d[6];
  for (int j = 1; j <= cp.degree; ++j)
    d[j - 1] = (j % 2 == 0) ? cp.c[j - 1] : -cp.c[j - 1];
  b.lower = -lagrange_upper(d, cp.degree);
  return b;
}

namespace {

double numeric_wave_speed(const LayerSystem &sys, int dir, const double *h,
                          const double *u, const double *v,
                          bool *complex_flag) {
  const Eigen::MatrixXd A = quasilinear_matrix(sys, h, u, v, dir);
  Eigen::EigenSolver<Eigen::MatrixXd> es(A, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("wave speed: eigen-solve failed");
  const auto lam = es.eigenvalues();
  double scale = 0.0;
  for (int i = 0; i < lam.size(); ++i)
    scale = std::max(scale, std::abs(lam[i]));
  double alpha = 0.0;
  bool complex = false;
  for (int i = 0; i < lam.size(); ++i) {
    const double re = std::abs(lam[i].real());
    const double im = std::abs(lam[i].imag());
    if (im > 1e-8 * std::max(1.0, scale)) {
      complex = true;
      alpha = std::max(alpha, re + im);
    } else {
      alpha = std::max(alpha, re);
    }
  }
  if (complex && complex_flag)
    *complex_flag = true;
  return alpha;
}

} // namespace

double max_wave_speed(const LayerSystem &sys, int dir, const double *h,
                      const double *u, const double *v, WaveSpeedMode mode,
                      bool *complex_flag) {
  const int M = sys.layers();
  const double *un = (dir == 1) ? u : v;
  if (mode == WaveSpeedMode::automatic) {
    if (M == 1)
      return std::abs(un[0]) + std::sqrt(sys.g() * h[0]);
    if (M == 2 || M == 3) {
      const CharPolyCoeffs cp =
          (M == 2) ? charpoly_m2(h[0], h[1], un[0], un[1],
                                 sys.density_ratio(1, 2), sys.g())
                   : charpoly_m3(h, un, sys.density_ratio(1, 2),
                                 sys.density_ratio(1, 3),
                                 sys.density_ratio(2, 3), sys.g());
      const RootBounds b = lagrange_bounds(cp);
      double a = std::max(b.upper, -b.lower);
      for (int m = 0; m < M; ++m)
        a = std::max(a, std::abs(un[m]));
      return a;
    }
  }
  return numeric_wave_speed(sys, dir, h, u, v, complex_flag);
}

} // namespace mlswe
