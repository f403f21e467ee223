#pragma once

#include <complex>
#include <memory>

#include "core/layer_system.hpp"

namespace mlswe {

/// Analytic solution of a manufactured run, evaluable on complex arguments
/// so the matching source terms come from complex-step differentiation
/// (first derivatives exact to machine precision, no cancellation).
class ExactSolution {
public:
  using C = std::complex<double>;

  virtual ~ExactSolution() = default;
  virtual int layers() const = 0;

  /// Fills per-layer depth/velocities and the bathymetry at (x1, x2, t).
  virtual void eval(C x1, C x2, C t, C *h, C *u, C *v, C &b) const = 0;

  void eval_real(double x1, double x2, double t, double *h, double *u,
                 double *v, double &b) const;
};

/// Residual source of the layered system for the given exact solution:
///   S = dU/dt + dF1/dx1 + dF2/dx2 + g h_m dz_m/dx_l (momentum slots),
/// layer slots per the conserved ordering.  two_dim = false drops the
/// x2-derivatives.
void manufactured_source(const LayerSystem &sys, const ExactSolution &exact,
                         bool two_dim, double x1, double x2, double t,
                         double *S);

/// Trigonometric column solutions of the accuracy runs: per layer,
/// h_m = cos(pi t) cos(pi x1) [+ cos(pi t) cos(pi x2)] + offs[m] and
/// velocities sin(pi t) sin(pi x_l)/h_m over b = sin(pi x1) [+ sin(pi x2)]
/// + 3/2.
std::shared_ptr<const ExactSolution>
make_trig_solution(std::vector<double> depth_offsets, bool two_dim);

/// Steadily translating vortex in the lower layer under a constant upper
/// layer (flat bottom).
std::shared_ptr<const ExactSolution> make_vortex_solution(double u_max,
                                                          double g);

} // namespace mlswe
