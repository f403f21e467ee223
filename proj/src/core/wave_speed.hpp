#pragma once

#include "core/layer_system.hpp"

namespace mlswe {

/// Coefficients of the reduced monic characteristic polynomial
/// P(lambda) = lambda^d + c[0] lambda^{d-1} + ... + c[d-1]
/// (d = 4 for two layers, 6 for three).
struct CharPolyCoeffs {
  int degree = 0;
  double c[6] = {0, 0, 0, 0, 0, 0};
};

CharPolyCoeffs charpoly_m2(double h1, double h2, double u1, double u2,
                           double r12, double g);

/// h and u hold three entries.  Ratios r12 = rho1/rho2 etc.
CharPolyCoeffs charpoly_m3(const double *h, const double *u, double r12,
                           double r13, double r23, double g);

struct RootBounds {
  double lower = 0.0; // <= every real root
  double upper = 0.0; // >= every real root
};

/// Lagrange bound: the largest positive root is at most the sum of the two
/// largest values of |c_j|^{1/j} over the negative coefficients (one element:
/// that element; none: 0), and symmetrically for the lower bound via
/// d_j = (-1)^j c_j.
RootBounds lagrange_bounds(const CharPolyCoeffs &cp);

enum class WaveSpeedMode {
  automatic, // closed-form coefficients for M <= 3, eigen-solve otherwise
  numeric    // always the eigen-solve of the quasi-linear matrix
};

/// Maximal wave speed in direction dir at one node:
/// max{lambda_max, |lambda_min|, |u_m|}.  The numeric fallback diagonalizes
/// dF/dU + N; states with genuinely complex speeds (loss of hyperbolicity)
/// use max |Re| + |Im| and set *complex_flag.
double max_wave_speed(const LayerSystem &sys, int dir, const double *h,
                      const double *u, const double *v,
                      WaveSpeedMode mode = WaveSpeedMode::automatic,
                      bool *complex_flag = nullptr);

} // namespace mlswe
