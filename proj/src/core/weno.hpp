#pragma once

namespace mlswe::weno {

/// 5th-order WENO-Z reconstruction (Borges et al., JCP 2008) with the
/// Jiang-Shu smoothness indicators, tau5 = |beta0 - beta2|, eps = 1e-12 and
/// ideal weights (1/10, 6/10, 3/10) for the left limit.

inline constexpr double kEps = 1e-12;

struct Weights {
  double w0 = 0.1, w1 = 0.6, w2 = 0.3;
};

/// Jiang-Shu indicators of the three quadratic substencils of v[0..4].
void smoothness(const double *v, double *beta);

/// WENO-Z nonlinear weights from the indicators.
Weights z_weights(const double *beta);

/// Substencil combination for the left limit at the interface between v[2]
/// and v[3], with externally supplied weights.
double apply_left(const double *v, const Weights &w);

/// Left limit at interface I+1/2 from nodes I-2..I+2.
double left_limit(const double *v5);

/// Right limit at interface I+1/2 from nodes I-1..I+3 (mirrored stencil).
double right_limit(const double *v5);

} // namespace mlswe::weno
