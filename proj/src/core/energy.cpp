#include "core/energy.hpp"

#include <cmath>
#include <stdexcept>

namespace mlswe {

double energy_density(const LayerSystem &sys, const double *h, const double *u,
                      const double *v, double b) {
  const int M = sys.layers();
  const double g = sys.g();
  double e = 0.0;
  for (int m = 1; m <= M; ++m) {
    const double hm = h[m - 1];
    e += 0.5 * sys.rho(m) *
         (hm * u[m - 1] * u[m - 1] + hm * v[m - 1] * v[m - 1] + g * hm * hm);
    e += g * sys.rho(m) * hm * b;
    for (int k = 1; k < m; ++k)
      e += g * sys.rho(k) * h[k - 1] * hm;
  }
  return e;
}

void energy_flux(const LayerSystem &sys, const double *h, const double *u,
                 const double *v, double b, double &q1, double &q2) {
  const int M = sys.layers();
  const double g = sys.g();
  q1 = 0.0;
  q2 = 0.0;
  for (int m = 1; m <= M; ++m) {
    const double hm = h[m - 1], um = u[m - 1], vm = v[m - 1];
    const double ke = hm * um * um + hm * vm * vm;
    const double zm = layer_z(sys, h, b, m);
    q1 += sys.rho(m) * (0.5 * um * ke + g * hm * hm * um + g * hm * um * zm);
    q2 += sys.rho(m) * (0.5 * vm * ke + g * hm * hm * vm + g * hm * vm * zm);
  }
}

void entropy_variables(const LayerSystem &sys, const double *h,
                       const double *u, const double *v, double b, double *V) {
  const int M = sys.layers();
  const double g = sys.g();
  for (int m = 1; m <= M; ++m) {
    const double zm = layer_z(sys, h, b, m);
    const double um = u[m - 1], vm = v[m - 1];
    V[3 * (m - 1)] =
        g * sys.rho(m) * (h[m - 1] + zm) - 0.5 * sys.rho(m) * (um * um + vm * vm);
    V[3 * (m - 1) + 1] = sys.rho(m) * um;
    V[3 * (m - 1) + 2] = sys.rho(m) * vm;
  }
}

void check_gamma(const LayerSystem &sys, double gamma) {
  if (!(gamma > 0.5 * sys.rho(sys.layers())))
    throw std::invalid_argument(
        "gamma must exceed rho_M / 2 to keep the modified energy convex");
}

void entropy_variables_extended(const LayerSystem &sys, const double *h,
                                const double *u, const double *v, double b,
                                double gamma, double *Vhat) {
  check_gamma(sys, gamma);
  const int M = sys.layers();
  entropy_variables(sys, h, u, v, b, Vhat);
  double s = 0.0;
  for (int m = 1; m <= M; ++m)
    s += sys.rho(m) * h[m - 1];
  Vhat[3 * M] = sys.g() * s + 2.0 * gamma * sys.g() * b;
}

Potentials potentials(const LayerSystem &sys, const double *h, const double *u,
                      const double *v, double b) {
  (void)b;
  const int M = sys.layers();
  const double g = sys.g();
  Potentials p;
  for (int m = 1; m <= M; ++m) {
    double above = 0.0;
    for (int k = m + 1; k <= M; ++k)
      above += h[k - 1];
    p.phi += 0.5 * g * sys.rho(m) * h[m - 1] * (h[m - 1] + 2.0 * above);
    p.psi1 += 0.5 * g * sys.rho(m) * h[m - 1] * h[m - 1] * u[m - 1];
    p.psi2 += 0.5 * g * sys.rho(m) * h[m - 1] * h[m - 1] * v[m - 1];
  }
  return p;
}

double potential_phi_hat(const LayerSystem &sys, const double *h,
                         const double *u, const double *v, double b,
                         double gamma) {
  const int M = sys.layers();
  double coupling = 0.0;
  for (int m = 1; m <= M; ++m)
    coupling += sys.rho(m) * h[m - 1];
  return potentials(sys, h, u, v, b).phi + sys.g() * coupling * b +
         gamma * sys.g() * b * b;
}

double modified_energy(const LayerSystem &sys, const double *h,
                       const double *u, const double *v, double b,
                       double gamma) {
  check_gamma(sys, gamma);
  return energy_density(sys, h, u, v, b) + gamma * sys.g() * b * b;
}

void physical_flux(const LayerSystem &sys, int dir, const double *h,
                   const double *u, const double *v, double *F) {
  const int M = sys.layers();
  const double g = sys.g();
  for (int m = 0; m < M; ++m) {
    const double hm = h[m], um = u[m], vm = v[m];
    const double p = 0.5 * g * hm * hm;
    if (dir == 1) {
      F[3 * m] = hm * um;
      F[3 * m + 1] = hm * um * um + p;
      F[3 * m + 2] = hm * um * vm;
    } else {
      F[3 * m] = hm * vm;
      F[3 * m + 1] = hm * um * vm;
      F[3 * m + 2] = hm * vm * vm + p;
    }
  }
}

Eigen::MatrixXd hessian(const LayerSystem &sys, const double *h,
                        const double *u, const double *v) {
  const int M = sys.layers();
  const double g = sys.g();
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(3 * M, 3 * M);
  for (int m = 1; m <= M; ++m) {
    const int r = 3 * (m - 1);
    const double rho = sys.rho(m), hm = h[m - 1], um = u[m - 1], vm = v[m - 1];
    H(r, r) = rho * (um * um + vm * vm + g * hm) / hm;
    H(r, r + 1) = H(r + 1, r) = -rho * um / hm;
    H(r, r + 2) = H(r + 2, r) = -rho * vm / hm;
    H(r + 1, r + 1) = rho / hm;
    H(r + 2, r + 2) = rho / hm;
    for (int k = 1; k < m; ++k) {
      H(3 * (k - 1), r) = H(r, 3 * (k - 1)) = g * sys.rho(k);
    }
  }
  return H;
}

Eigen::MatrixXd hessian_extended(const LayerSystem &sys, const double *h,
                                 const double *u, const double *v,
                                 double gamma) {
  check_gamma(sys, gamma);
  const int M = sys.layers();
  const double g = sys.g();
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(3 * M + 1, 3 * M + 1);
  H.topLeftCorner(3 * M, 3 * M) = hessian(sys, h, u, v);
  for (int m = 1; m <= M; ++m) {
    H(3 * M, 3 * (m - 1)) = H(3 * (m - 1), 3 * M) = g * sys.rho(m);
  }
  H(3 * M, 3 * M) = 2.0 * gamma * g;
  return H;
}

namespace {

double quadratic_form_impl(const LayerSystem &sys, const double *h,
                           const double *u, const double *v,
                           const double *beta, double beta_b, double gamma,
                           bool extended) {
  const int M = sys.layers();
  const double g = sys.g();
  double depth_tail = extended ? beta_b : 0.0; // sum_{l >= m} beta_{3l-2}
  double q = 0.0;
  // Telescoped density-difference squares, accumulated from layer M down.
  for (int m = M; m >= 2; --m) {
    depth_tail += beta[3 * (m - 1)];
    q += g * (sys.rho(m) - sys.rho(m - 1)) * depth_tail * depth_tail;
  }
  depth_tail += beta[0];
  q += g * sys.rho(1) * depth_tail * depth_tail;
  for (int m = 1; m <= M; ++m) {
    const double bm = beta[3 * (m - 1)];
    const double a = u[m - 1] * bm - beta[3 * (m - 1) + 1];
    const double c = v[m - 1] * bm - beta[3 * (m - 1) + 2];
    q += sys.rho(m) / h[m - 1] * (a * a + c * c);
  }
  if (extended)
    q += g * (2.0 * gamma - sys.rho(M)) * beta_b * beta_b;
  return q;
}

} // namespace

double quadratic_form(const LayerSystem &sys, const double *h, const double *u,
                      const double *v, const double *beta) {
  return quadratic_form_impl(sys, h, u, v, beta, 0.0, 0.0, false);
}

double quadratic_form_extended(const LayerSystem &sys, const double *h,
                               const double *u, const double *v, double gamma,
                               const double *beta) {
  check_gamma(sys, gamma);
  const int M = sys.layers();
  return quadratic_form_impl(sys, h, u, v, beta, beta[3 * M], gamma, true);
}

double hessian_determinant_formula(const LayerSystem &sys, const double *h) {
  const int M = sys.layers();
  double det = std::pow(sys.g(), M) * std::pow(sys.rho(1), 3);
  for (int m = 2; m <= M; ++m)
    det *= sys.rho(m) * sys.rho(m) * (sys.rho(m) - sys.rho(m - 1));
  for (int m = 1; m <= M; ++m)
    det /= h[m - 1] * h[m - 1];
  return det;
}

double hessian_extended_determinant_formula(const LayerSystem &sys,
                                            const double *h, double gamma) {
  const int M = sys.layers();
  return hessian_determinant_formula(sys, h) * sys.g() *
         (2.0 * gamma - sys.rho(M));
}

Eigen::MatrixXd nonconservative_matrix(const LayerSystem &sys, const double *h,
                                       int dir) {
  const int M = sys.layers();
  const double g = sys.g();
  Eigen::MatrixXd N = Eigen::MatrixXd::Zero(3 * M, 3 * M);
  for (int m = 1; m <= M; ++m) {
    const int row = 3 * (m - 1) + dir; // momentum slot receiving z_m
    for (int k = 1; k <= M; ++k) {
      if (k == m)
        continue;
      const double dz = (k > m) ? 1.0 : sys.density_ratio(k, m);
      N(row, 3 * (k - 1)) = g * h[m - 1] * dz;
    }
  }
  return N;
}

Eigen::MatrixXd quasilinear_matrix(const LayerSystem &sys, const double *h,
                                   const double *u, const double *v, int dir) {
  const int M = sys.layers();
  const double g = sys.g();
  Eigen::MatrixXd A = nonconservative_matrix(sys, h, dir);
  for (int m = 0; m < M; ++m) {
    const int r = 3 * m;
    const double hm = h[m], um = u[m], vm = v[m];
    if (dir == 1) {
      A(r, r + 1) += 1.0;
      A(r + 1, r) += -um * um + g * hm;
      A(r + 1, r + 1) += 2.0 * um;
      A(r + 2, r) += -um * vm;
      A(r + 2, r + 1) += vm;
      A(r + 2, r + 2) += um;
    } else {
      A(r, r + 2) += 1.0;
      A(r + 1, r) += -um * vm;
      A(r + 1, r + 1) += vm;
      A(r + 1, r + 2) += um;
      A(r + 2, r) += -vm * vm + g * hm;
      A(r + 2, r + 2) += 2.0 * vm;
    }
  }
  return A;
}

void scaling_coeffs_into(const LayerSystem &sys, const double *h,
                         ScalingCoeffs &c) {
  const int M = sys.layers();
  const double g = sys.g();
  c.s.resize(M);
  c.t.assign(M, 0.0);
  c.d.resize(M);
  for (int m = 1; m < M; ++m) {
    const double drho = sys.rho(m + 1) - sys.rho(m);
    c.s[m - 1] = std::sqrt(sys.rho(m + 1) / (g * drho * sys.rho(m)));
    c.t[m - 1] = std::sqrt(sys.rho(m) / (g * drho * sys.rho(m + 1)));
  }
  c.s[M - 1] = 1.0 / std::sqrt(g * sys.rho(M));
  for (int m = 1; m <= M; ++m)
    c.d[m - 1] = std::sqrt(h[m - 1] / sys.rho(m));
}

ScalingCoeffs scaling_coeffs(const LayerSystem &sys, const double *h) {
  ScalingCoeffs c;
  scaling_coeffs_into(sys, h, c);
  return c;
}

Eigen::MatrixXd scaling_r_dense(const LayerSystem &sys, const double *h,
                                const double *u, const double *v) {
  const int M = sys.layers();
  const ScalingCoeffs c = scaling_coeffs(sys, h);
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(3 * M, 3 * M);
  for (int m = 1; m <= M; ++m) {
    const int col = 3 * (m - 1);
    R(col, col) = c.s[m - 1];
    R(col + 1, col) = c.s[m - 1] * u[m - 1];
    R(col + 2, col) = c.s[m - 1] * v[m - 1];
    if (m < M) {
      R(col + 3, col) = -c.t[m - 1];
      R(col + 4, col) = -c.t[m - 1] * u[m];
      R(col + 5, col) = -c.t[m - 1] * v[m];
    }
    R(col + 1, col + 1) = c.d[m - 1];
    R(col + 2, col + 2) = c.d[m - 1];
  }
  return R;
}

void apply_rt(const LayerSystem &sys, const ScalingCoeffs &c, const double *u,
              const double *v, const double *x, double *out) {
  const int M = sys.layers();
  for (int m = 0; m < M; ++m) {
    const int s = 3 * m;
    double acc = c.s[m] * (x[s] + u[m] * x[s + 1] + v[m] * x[s + 2]);
    if (m + 1 < M)
      acc -= c.t[m] * (x[s + 3] + u[m + 1] * x[s + 4] + v[m + 1] * x[s + 5]);
    out[s] = acc;
    out[s + 1] = c.d[m] * x[s + 1];
    out[s + 2] = c.d[m] * x[s + 2];
  }
}

void apply_r(const LayerSystem &sys, const ScalingCoeffs &c, const double *u,
             const double *v, const double *x, double *out) {
  const int M = sys.layers();
  for (int m = 0; m < M; ++m) {
    const int s = 3 * m;
    double gm = c.s[m] * x[s];
    if (m > 0)
      gm -= c.t[m - 1] * x[s - 3];
    out[s] = gm;
    out[s + 1] = u[m] * gm + c.d[m] * x[s + 1];
    out[s + 2] = v[m] * gm + c.d[m] * x[s + 2];
  }
}

double energy_density(const LayerSystem &sys, const NodeState &n) {
  return energy_density(sys, n.h.data(), n.u.data(), n.v.data(), n.b);
}

void entropy_variables(const LayerSystem &sys, const NodeState &n, double *V) {
  entropy_variables(sys, n.h.data(), n.u.data(), n.v.data(), n.b, V);
}

Potentials potentials(const LayerSystem &sys, const NodeState &n) {
  return potentials(sys, n.h.data(), n.u.data(), n.v.data(), n.b);
}

} // namespace mlswe
