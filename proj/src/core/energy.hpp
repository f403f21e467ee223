#pragma once

#include <Eigen/Dense>

#include "core/layer_system.hpp"
#include "core/state.hpp"

namespace mlswe {

/// Energy algebra for the layered system: the energy/energy-flux pair, the
/// entropy variables V = d(eta)/dU and their moving-mesh extension, the
/// potentials phi/psi, the Hessian of the energy, and the lower-triangular
/// scaling matrix R with R R^T = dU/dV.
///
/// Conserved component ordering used throughout: per layer m (1-based) the
/// slots 3(m-1) + {0,1,2} hold (h_m, h_m u_m, h_m v_m); the moving-mesh
/// extension appends b at slot 3M.

double energy_density(const LayerSystem &sys, const double *h, const double *u,
                      const double *v, double b);

void energy_flux(const LayerSystem &sys, const double *h, const double *u,
                 const double *v, double b, double &q1, double &q2);

/// V blocks (g rho_m (h_m + z_m) - rho_m/2 (u_m^2 + v_m^2), rho_m u_m,
/// rho_m v_m) into V[0..3M).
void entropy_variables(const LayerSystem &sys, const double *h,
                       const double *u, const double *v, double b, double *V);

/// Extended vector of 3M+1 entries; the last one is
/// g sum_m rho_m h_m + 2 gamma g b.  Requires gamma > rho_M / 2.
void entropy_variables_extended(const LayerSystem &sys, const double *h,
                                const double *u, const double *v, double b,
                                double gamma, double *Vhat);

/// Throws std::invalid_argument unless gamma > rho_M / 2 (convexity of the
/// modified energy).
void check_gamma(const LayerSystem &sys, double gamma);
inline double default_gamma(const LayerSystem &sys) {
  return sys.rho(sys.layers());
}

struct Potentials {
  double phi = 0, psi1 = 0, psi2 = 0;
};
Potentials potentials(const LayerSystem &sys, const double *h, const double *u,
                      const double *v, double b);

/// phi_hat = Vhat^T Uhat - eta_hat, in closed form
/// phi + g sum_m rho_m h_m b + gamma g b^2.
double potential_phi_hat(const LayerSystem &sys, const double *h,
                         const double *u, const double *v, double b,
                         double gamma);

double modified_energy(const LayerSystem &sys, const double *h,
                       const double *u, const double *v, double b,
                       double gamma);

/// Physical flux F_dir(U) into F[0..3M) (dir is 1 or 2).
void physical_flux(const LayerSystem &sys, int dir, const double *h,
                   const double *u, const double *v, double *F);

/// Hessian d^2 eta / dU^2, assembled from the per-layer diagonal blocks plus
/// the g rho_min(k,m) couplings between depth slots.
Eigen::MatrixXd hessian(const LayerSystem &sys, const double *h,
                        const double *u, const double *v);

/// Hessian of the modified energy w.r.t. (U, b): the 3M x 3M core bordered by
/// (g rho_1, 0, 0, ..., g rho_M, 0, 0) with corner 2 gamma g.
Eigen::MatrixXd hessian_extended(const LayerSystem &sys, const double *h,
                                 const double *u, const double *v,
                                 double gamma);

/// Closed-form quadratic form beta^T Hessian beta (telescoped
/// density-difference squares plus kinetic squares).
double quadratic_form(const LayerSystem &sys, const double *h, const double *u,
                      const double *v, const double *beta);
double quadratic_form_extended(const LayerSystem &sys, const double *h,
                               const double *u, const double *v, double gamma,
                               const double *beta);

/// det(Hessian) = g^M rho_1^3 prod_{m>=2} rho_m^2 (rho_m - rho_{m-1})
///                / prod_m h_m^2, and the extended variant carrying the
/// factor (2 gamma - rho_M).
double hessian_determinant_formula(const LayerSystem &sys, const double *h);
double hessian_extended_determinant_formula(const LayerSystem &sys,
                                            const double *h, double gamma);

/// Non-conservative coupling N_dir = g sum_m h_m dB_{dir,m}/dU.
Eigen::MatrixXd nonconservative_matrix(const LayerSystem &sys, const double *h,
                                       int dir);

/// Quasi-linear matrix dF_dir/dU + N_dir whose eigenvalues are the
/// characteristic speeds.
Eigen::MatrixXd quasilinear_matrix(const LayerSystem &sys, const double *h,
                                   const double *u, const double *v, int dir);

/// Scaling matrix R: nonzeros on the diagonal and in the (3m-2)th columns.
/// The per-layer coefficients are precomputed once per state so the hot path
/// can apply R and R^T in O(M) without materializing the matrix.
struct ScalingCoeffs {
  // s[m-1]: leading coefficient of column 3m-2 (m < M) or 1/sqrt(g rho_M)
  // for m = M; t[m-1]: magnitude of the subdiagonal block of column 3m-2;
  // d[m-1] = sqrt(h_m / rho_m).
  std::vector<double> s, t, d;
};

ScalingCoeffs scaling_coeffs(const LayerSystem &sys, const double *h);

/// Allocation-free refill of an existing coefficient set (hot loops).
void scaling_coeffs_into(const LayerSystem &sys, const double *h,
                         ScalingCoeffs &c);

Eigen::MatrixXd scaling_r_dense(const LayerSystem &sys, const double *h,
                                const double *u, const double *v);

/// out = R^T x (x has 3M entries).
void apply_rt(const LayerSystem &sys, const ScalingCoeffs &c, const double *u,
              const double *v, const double *x, double *out);

/// out = R x.
void apply_r(const LayerSystem &sys, const ScalingCoeffs &c, const double *u,
             const double *v, const double *x, double *out);

// Convenience overloads on NodeState for tests and diagnostics.
double energy_density(const LayerSystem &sys, const NodeState &n);
void entropy_variables(const LayerSystem &sys, const NodeState &n, double *V);
Potentials potentials(const LayerSystem &sys, const NodeState &n);

} // namespace mlswe
