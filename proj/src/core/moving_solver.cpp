#include "core/moving_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "core/weno.hpp"

namespace mlswe {

void curvilinear_two_point_flux(const LayerSystem &sys, const NodeState &L,
                                const NodeState &R, double mtL, double mtR,
                                double m1L, double m1R, double m2L, double m2R,
                                double *F) {
  const int M = sys.layers();
  const int n = 3 * M + 1;
  std::vector<double> F1(3 * M), F2(3 * M);
  ec_two_point_flux(sys, 1, L, R, F1.data());
  ec_two_point_flux(sys, 2, L, R, F2.data());
  const double mt = 0.5 * (mtL + mtR);
  const double m1 = 0.5 * (m1L + m1R);
  const double m2 = 0.5 * (m2L + m2R);
  for (int m = 0; m < M; ++m) {
    const double hm = 0.5 * (L.h[m] + R.h[m]);
    const double um = 0.5 * (L.u[m] + R.u[m]);
    const double vm = 0.5 * (L.v[m] + R.v[m]);
    F[3 * m] = mt * hm + m1 * F1[3 * m] + m2 * F2[3 * m];
    F[3 * m + 1] = mt * hm * um + m1 * F1[3 * m + 1] + m2 * F2[3 * m + 1];
    F[3 * m + 2] = mt * hm * vm + m1 * F1[3 * m + 2] + m2 * F2[3 * m + 2];
  }
  F[n - 1] = mt * 0.5 * (L.b + R.b);
}

/// Per-worker scratch for one moving-mesh line.
struct MovingSolver::LineWS {
  int M = 0, L = 0, n = 0, G = 0, nc = 0;
  std::vector<std::vector<double>> h, u, v, z; // [M][L]
  std::vector<double> b;                       // [L]
  std::vector<double> mt, ma, mb;              // metric rows along the line
  std::vector<double> Vh;                      // [L*(3M+1)] Vhat, node-major
  std::vector<std::vector<double>> Uraw;       // [3M+1][L] conserved rows
  std::vector<double> phihat, psi1, psi2;      // [L]
  std::vector<std::vector<double>> pairF;      // [q][L*(3M+1)]
  std::vector<std::vector<double>> pairJ;      // [q][L]
  std::vector<std::vector<double>> pairQ;      // [q][L]
  std::vector<double> Fes;                     // [(n+1)*(3M+1)]
  std::vector<std::vector<double>> Bsrc1, Bsrc2; // [M][n+1]
  std::vector<double> Jtil;                    // [n+1]
  std::vector<double> qes;                     // [n+1]
  // interface scratch
  ScalingCoeffs sc;
  std::vector<double> hbar, ubar, vbar;
  std::vector<double> Vrot; // [6*3M]
  std::vector<double> D, Dring, jmpU, jmpV, Yring;
  std::vector<double> nbuf_h, nbuf_u, nbuf_v;
  std::vector<double> F1buf, F2buf;
  DissipationScratch diss;

  void resize(int M_, int n_, int G_, int p, bool ledger) {
    M = M_;
    n = n_;
    G = G_;
    L = n + 2 * G;
    nc = 3 * M + 1;
    auto mat = [&](std::vector<std::vector<double>> &a, int rows, int cols) {
      a.resize(rows);
      for (auto &r : a)
        r.assign(cols, 0.0);
    };
    mat(h, M, L);
    mat(u, M, L);
    mat(v, M, L);
    mat(z, M, L);
    b.assign(L, 0.0);
    mt.assign(L, 0.0);
    ma.assign(L, 0.0);
    mb.assign(L, 0.0);
    Vh.assign(static_cast<std::size_t>(L) * nc, 0.0);
    mat(Uraw, nc, L);
    pairF.resize(p);
    for (auto &a : pairF)
      a.assign(static_cast<std::size_t>(L) * nc, 0.0);
    pairJ.resize(p);
    for (auto &a : pairJ)
      a.assign(L, 0.0);
    Fes.assign(static_cast<std::size_t>(n + 1) * nc, 0.0);
    mat(Bsrc1, M, n + 1);
    mat(Bsrc2, M, n + 1);
    Jtil.assign(n + 1, 0.0);
    if (ledger) {
      phihat.assign(L, 0.0);
      psi1.assign(L, 0.0);
      psi2.assign(L, 0.0);
      pairQ.resize(p);
      for (auto &a : pairQ)
        a.assign(L, 0.0);
      qes.assign(n + 1, 0.0);
    }
    hbar.assign(M, 0.0);
    ubar.assign(M, 0.0);
    vbar.assign(M, 0.0);
    Vrot.assign(6 * 3 * M, 0.0);
    D.assign(3 * M, 0.0);
    Dring.assign(nc, 0.0);
    jmpU.assign(nc, 0.0);
    jmpV.assign(nc, 0.0);
    Yring.assign(nc, 0.0);
    nbuf_h.assign(M, 0.0);
    nbuf_u.assign(M, 0.0);
    nbuf_v.assign(M, 0.0);
    diss.resize(M);
  }
};

MovingSolver::MovingSolver(LayerSystem sys, Grid grid, SchemeConfig scheme,
                           double gamma)
    : sys_(std::move(sys)), grid_(grid), scheme_(scheme), gamma_(gamma),
      phys_(sys_, grid_), mesh_(grid_) {
  check_gamma(sys_, gamma_);
  const int nc = 3 * sys_.layers() + 1;
  Uc_.resize(nc);
  Uc0_.resize(nc);
  dUc_.resize(nc);
  for (int c = 0; c < nc; ++c) {
    Uc_[c].resize(grid_);
    Uc0_[c].resize(grid_);
    dUc_[c].resize(grid_);
  }
  J0_.resize(grid_);
  dJ_.resize(grid_);
  x10_.resize(mesh_.coord_grid());
  x20_.resize(mesh_.coord_grid());
  const int max_lines = std::max(grid_.n1(), grid_.n2());
  const int nw = worker_count(static_cast<std::size_t>(max_lines));
  ws_.reserve(nw);
  for (int w = 0; w < nw; ++w)
    ws_.push_back(std::make_unique<LineWS>());
}

MovingSolver::~MovingSolver() = default;

void MovingSolver::sync_from_phys() {
  mesh_.fill_coordinate_ghosts();
  mesh_.compute_metrics(scheme_.oc);
  mesh_.init_jacobian();
  phys_.fill_ghosts(grid_);
  const int M = sys_.layers();
  for (int j = 0; j < grid_.n2(); ++j) {
    for (int i = 0; i < grid_.n1(); ++i) {
      const double Jij = mesh_.J(grid_, i, j);
      for (int m = 0; m < M; ++m) {
        Uc_[3 * m](grid_, i, j) = Jij * phys_.h[m](grid_, i, j);
        Uc_[3 * m + 1](grid_, i, j) = Jij * phys_.hu[m](grid_, i, j);
        Uc_[3 * m + 2](grid_, i, j) = Jij * phys_.hv[m](grid_, i, j);
      }
      Uc_[3 * M](grid_, i, j) = Jij * phys_.b(grid_, i, j);
    }
  }
}

void MovingSolver::recover_phys() {
  const int M = sys_.layers();
  for (int j = 0; j < grid_.n2(); ++j) {
    for (int i = 0; i < grid_.n1(); ++i) {
      const double Jij = mesh_.J(grid_, i, j);
      if (!(Jij > 0.0))
        throw std::runtime_error("tangled mesh: J <= 0 at node (" +
                                 std::to_string(i) + "," + std::to_string(j) +
                                 ")");
      const double inv = 1.0 / Jij;
      for (int m = 0; m < M; ++m) {
        const double hm = Uc_[3 * m](grid_, i, j) * inv;
        if (!std::isfinite(hm))
          throw std::runtime_error("non-finite state at node (" +
                                   std::to_string(i) + "," +
                                   std::to_string(j) + ")");
        if (!(hm >= kDepthFloor))
          throw DryStateError("dry state: h_" + std::to_string(m + 1) +
                              " below floor at node (" + std::to_string(i) +
                              "," + std::to_string(j) + ")");
        phys_.h[m](grid_, i, j) = hm;
        phys_.hu[m](grid_, i, j) = Uc_[3 * m + 1](grid_, i, j) * inv;
        phys_.hv[m](grid_, i, j) = Uc_[3 * m + 2](grid_, i, j) * inv;
      }
      phys_.b(grid_, i, j) = Uc_[3 * M](grid_, i, j) * inv;
    }
  }
  phys_.fill_ghosts(grid_);
}

void MovingSolver::after_stage() {
  mesh_.fill_coordinate_ghosts();
  mesh_.compute_metrics(scheme_.oc);
  recover_phys();
}

void MovingSolver::run_line(int dir, int fixed, std::vector<Field> &dUc,
                            Field &dJ, EnergyFluxes *qes, LineWS &ws) {
  const int M = sys_.layers();
  const int G = grid_.ghosts();
  const int n = (dir == 1) ? grid_.n1() : grid_.n2();
  const int p = scheme_.oc.p;
  const int nc = 3 * M + 1;
  const double g = sys_.g();
  const bool ledger = scheme_.energy_ledger && qes;
  ws.resize(M, n, G, p, ledger);
  const double inv_dx = 1.0 / ((dir == 1) ? grid_.dx1() : grid_.dx2());

  auto node_i = [&](int k) { return dir == 1 ? k - G : fixed; };
  auto node_j = [&](int k) { return dir == 1 ? fixed : k - G; };

  for (int k = 0; k < ws.L; ++k) {
    const int i = node_i(k), j = node_j(k);
    for (int m = 0; m < M; ++m) {
      const double hm = phys_.h[m](grid_, i, j);
      ws.h[m][k] = hm;
      ws.u[m][k] = velocity_from(hm, phys_.hu[m](grid_, i, j), m + 1, i, j);
      ws.v[m][k] = velocity_from(hm, phys_.hv[m](grid_, i, j), m + 1, i, j);
      ws.Uraw[3 * m][k] = hm;
      ws.Uraw[3 * m + 1][k] = phys_.hu[m](grid_, i, j);
      ws.Uraw[3 * m + 2][k] = phys_.hv[m](grid_, i, j);
    }
    ws.b[k] = phys_.b(grid_, i, j);
    ws.Uraw[3 * M][k] = ws.b[k];
    if (dir == 1) {
      ws.mt[k] = mesh_.mt1(grid_, i, j);
      ws.ma[k] = mesh_.m11(grid_, i, j);
      ws.mb[k] = mesh_.m12(grid_, i, j);
    } else {
      ws.mt[k] = mesh_.mt2(grid_, i, j);
      ws.ma[k] = mesh_.m21(grid_, i, j);
      ws.mb[k] = mesh_.m22(grid_, i, j);
    }
  }

  for (int m = 1; m <= M; ++m) {
    for (int k = 0; k < ws.L; ++k) {
      double zz = ws.b[k];
      for (int kk = m + 1; kk <= M; ++kk)
        zz += ws.h[kk - 1][k];
      for (int kk = 1; kk < m; ++kk)
        zz += sys_.density_ratio(kk, m) * ws.h[kk - 1][k];
      ws.z[m - 1][k] = zz;
    }
  }

  // Vhat rows (dissipation sign rule and the energy ledger).
  for (int k = 0; k < ws.L; ++k) {
    double *Vk = ws.Vh.data() + static_cast<std::size_t>(k) * nc;
    double hsum = 0.0;
    for (int m = 0; m < M; ++m) {
      const double rho = sys_.rho(m + 1);
      const double um = ws.u[m][k], vm = ws.v[m][k];
      Vk[3 * m] = g * rho * (ws.h[m][k] + ws.z[m][k]) -
                  0.5 * rho * (um * um + vm * vm);
      Vk[3 * m + 1] = rho * um;
      Vk[3 * m + 2] = rho * vm;
      hsum += rho * ws.h[m][k];
    }
    Vk[3 * M] = g * hsum + 2.0 * gamma_ * g * ws.b[k];
  }
  if (ledger) {
    for (int k = 0; k < ws.L; ++k) {
      double phi = 0.0, p1 = 0.0, p2 = 0.0, coup = 0.0;
      for (int m = 0; m < M; ++m) {
        double above = 0.0;
        for (int kk = m + 1; kk < M; ++kk)
          above += ws.h[kk][k];
        const double hm = ws.h[m][k];
        const double rho = sys_.rho(m + 1);
        phi += 0.5 * g * rho * hm * (hm + 2.0 * above);
        p1 += 0.5 * g * rho * hm * hm * ws.u[m][k];
        p2 += 0.5 * g * rho * hm * hm * ws.v[m][k];
        coup += rho * hm;
      }
      ws.phihat[k] = phi + g * coup * ws.b[k] + gamma_ * g * ws.b[k] * ws.b[k];
      ws.psi1[k] = p1;
      ws.psi2[k] = p2;
    }
  }

  // Two-point building blocks.
  ws.F1buf.assign(3 * M, 0.0);
  ws.F2buf.assign(3 * M, 0.0);
  double *F1 = ws.F1buf.data();
  double *F2 = ws.F2buf.data();
  for (int q = 1; q <= p; ++q) {
    auto &P = ws.pairF[q - 1];
    auto &PJ = ws.pairJ[q - 1];
    for (int j = G - q; j <= G + n - 1; ++j) {
      const int jq = j + q;
      const double mtm = 0.5 * (ws.mt[j] + ws.mt[jq]);
      const double mam = 0.5 * (ws.ma[j] + ws.ma[jq]);
      const double mbm = 0.5 * (ws.mb[j] + ws.mb[jq]);
      for (int m = 0; m < M; ++m) {
        ec_layer_flux(g, 1, ws.h[m][j], ws.u[m][j], ws.v[m][j], ws.z[m][j],
                      ws.h[m][jq], ws.u[m][jq], ws.v[m][jq], ws.z[m][jq],
                      F1 + 3 * m);
        ec_layer_flux(g, 2, ws.h[m][j], ws.u[m][j], ws.v[m][j], ws.z[m][j],
                      ws.h[m][jq], ws.u[m][jq], ws.v[m][jq], ws.z[m][jq],
                      F2 + 3 * m);
      }
      double *F = P.data() + static_cast<std::size_t>(j) * nc;
      for (int m = 0; m < M; ++m) {
        const double hm = 0.5 * (ws.h[m][j] + ws.h[m][jq]);
        const double um = 0.5 * (ws.u[m][j] + ws.u[m][jq]);
        const double vm = 0.5 * (ws.v[m][j] + ws.v[m][jq]);
        F[3 * m] = mtm * hm + mam * F1[3 * m] + mbm * F2[3 * m];
        F[3 * m + 1] =
            mtm * hm * um + mam * F1[3 * m + 1] + mbm * F2[3 * m + 1];
        F[3 * m + 2] =
            mtm * hm * vm + mam * F1[3 * m + 2] + mbm * F2[3 * m + 2];
      }
      F[nc - 1] = mtm * 0.5 * (ws.b[j] + ws.b[jq]);
      PJ[j] = mtm;

      if (ledger) {
        const double *VL = ws.Vh.data() + static_cast<std::size_t>(j) * nc;
        const double *VR = ws.Vh.data() + static_cast<std::size_t>(jq) * nc;
        double qq = 0.0;
        for (int c = 0; c < nc; ++c)
          qq += 0.5 * (VL[c] + VR[c]) * F[c];
        qq -= 0.5 * mtm * (ws.phihat[j] + ws.phihat[jq]);
        qq -= 0.5 * (mam * (ws.psi1[j] + ws.psi1[jq]) +
                     mbm * (ws.psi2[j] + ws.psi2[jq]));
        for (int m = 0; m < M; ++m) {
          const double rho = sys_.rho(m + 1);
          const double zsum = ws.z[m][j] + ws.z[m][jq];
          const double hu_sum = ws.h[m][j] * ws.u[m][j] + ws.h[m][jq] * ws.u[m][jq];
          const double hv_sum = ws.h[m][j] * ws.v[m][j] + ws.h[m][jq] * ws.v[m][jq];
          const double huz_sum = ws.h[m][j] * ws.u[m][j] * ws.z[m][j] +
                                 ws.h[m][jq] * ws.u[m][jq] * ws.z[m][jq];
          const double hvz_sum = ws.h[m][j] * ws.v[m][j] * ws.z[m][j] +
                                 ws.h[m][jq] * ws.v[m][jq] * ws.z[m][jq];
          qq += 0.25 * g * rho * zsum * (mam * hu_sum + mbm * hv_sum);
          qq -= 0.5 * g * rho * (mam * huz_sum + mbm * hvz_sum);
        }
        ws.pairQ[q - 1][j] = qq;
      }
    }
  }

  std::fill(ws.Fes.begin(), ws.Fes.end(), 0.0);
  std::fill(ws.Jtil.begin(), ws.Jtil.end(), 0.0);
  for (auto &row : ws.Bsrc1)
    std::fill(row.begin(), row.end(), 0.0);
  for (auto &row : ws.Bsrc2)
    std::fill(row.begin(), row.end(), 0.0);
  if (ledger)
    std::fill(ws.qes.begin(), ws.qes.end(), 0.0);
  for (int t = 0; t <= n; ++t) {
    const int k = G + t - 1;
    double *F = ws.Fes.data() + static_cast<std::size_t>(t) * nc;
    for (int q = 1; q <= p; ++q) {
      const double aq = scheme_.oc.a[q - 1];
      for (int ss = 0; ss <= q - 1; ++ss) {
        const int jl = k - ss, jr = k - ss + q;
        const double *P =
            ws.pairF[q - 1].data() + static_cast<std::size_t>(jl) * nc;
        for (int c = 0; c < nc; ++c)
          F[c] += aq * P[c];
        ws.Jtil[t] += aq * ws.pairJ[q - 1][jl];
        const double mam = 0.5 * (ws.ma[jl] + ws.ma[jr]);
        const double mbm = 0.5 * (ws.mb[jl] + ws.mb[jr]);
        for (int m = 0; m < M; ++m) {
          const double zmean = 0.5 * (ws.z[m][jl] + ws.z[m][jr]);
          ws.Bsrc1[m][t] += aq * mam * zmean;
          ws.Bsrc2[m][t] += aq * mbm * zmean;
        }
        if (ledger)
          ws.qes[t] += aq * ws.pairQ[q - 1][jl];
      }
    }
  }

  if (scheme_.dissipation) {
    for (int t = 0; t <= n; ++t) {
      const int k = G + t - 1;
      const double mtm = 0.5 * (ws.mt[k] + ws.mt[k + 1]);
      const double mam = 0.5 * (ws.ma[k] + ws.ma[k + 1]);
      const double mbm = 0.5 * (ws.mb[k] + ws.mb[k + 1]);
      const Rotation T = interface_rotation(dir, mam, mbm);
      const double Lt = std::sqrt(mam * mam + mbm * mbm);

      // Rotated window entropy variables for the scaled jumps.
      for (int r = 0; r < 6; ++r) {
        const int kk = k - 2 + r;
        double *Vr = ws.Vrot.data() + static_cast<std::size_t>(r) * 3 * M;
        for (int m = 0; m < M; ++m) {
          const double ur = T.c * ws.u[m][kk] + T.s * ws.v[m][kk];
          const double vr = -T.s * ws.u[m][kk] + T.c * ws.v[m][kk];
          const double rho = sys_.rho(m + 1);
          Vr[3 * m] = g * rho * (ws.h[m][kk] + ws.z[m][kk]) -
                      0.5 * rho * (ur * ur + vr * vr);
          Vr[3 * m + 1] = rho * ur;
          Vr[3 * m + 2] = rho * vr;
        }
      }
      for (int m = 0; m < M; ++m) {
        const double hL = ws.h[m][k], hR = ws.h[m][k + 1];
        ws.hbar[m] = 0.5 * (hL + hR);
        const double ub = 0.5 * (hL * ws.u[m][k] + hR * ws.u[m][k + 1]) / ws.hbar[m];
        const double vb = 0.5 * (hL * ws.v[m][k] + hR * ws.v[m][k + 1]) / ws.hbar[m];
        ws.ubar[m] = T.c * ub + T.s * vb;
        ws.vbar[m] = -T.s * ub + T.c * vb;
      }
      // Wave speed of the rotated states (left, right, mean).
      double arot = 0.0;
      bool cplx = false;
      for (int pick = 0; pick < 3; ++pick) {
        const double *hh;
        if (pick < 2) {
          const int kk = k + pick;
          for (int m = 0; m < M; ++m) {
            ws.nbuf_h[m] = ws.h[m][kk];
            ws.nbuf_u[m] = T.c * ws.u[m][kk] + T.s * ws.v[m][kk];
            ws.nbuf_v[m] = -T.s * ws.u[m][kk] + T.c * ws.v[m][kk];
          }
          hh = ws.nbuf_h.data();
          arot = std::max(arot, max_wave_speed(sys_, dir, hh, ws.nbuf_u.data(),
                                               ws.nbuf_v.data(),
                                               scheme_.wave_speed, &cplx));
        } else {
          arot = std::max(arot, max_wave_speed(sys_, dir, ws.hbar.data(),
                                               ws.ubar.data(), ws.vbar.data(),
                                               scheme_.wave_speed, &cplx));
        }
      }
      const double ahat = std::abs(mtm + Lt * arot);

      scaling_coeffs_into(sys_, ws.hbar.data(), ws.sc);
      scaled_weno_dissipation(sys_, ws.sc, ws.ubar.data(), ws.vbar.data(),
                              ahat, ws.Vrot.data(), ws.D.data(), ws.diss);
      double *F = ws.Fes.data() + static_cast<std::size_t>(t) * nc;
      double qd = 0.0;
      if (ledger) {
        for (int c = 0; c < 3 * M; ++c)
          qd += 0.5 * (ws.Vrot[2 * 3 * M + c] + ws.Vrot[3 * 3 * M + c]) *
                ws.D[c];
      }
      // Rotate the dissipation back per layer (mass slot unchanged).
      for (int m = 0; m < M; ++m) {
        const double d1 = ws.D[3 * m + 1], d2 = ws.D[3 * m + 2];
        F[3 * m] -= ws.D[3 * m];
        F[3 * m + 1] -= T.c * d1 - T.s * d2;
        F[3 * m + 2] -= T.s * d1 + T.c * d2;
      }

      // Bathymetry-transport dissipation with shared weights for h_M and b.
      {
        const int hMs = 3 * (M - 1), bs = 3 * M;
        for (int c = 0; c < nc; ++c) {
          double sL[5], sR[5];
          for (int r = 0; r < 5; ++r) {
            sL[r] = ws.Uraw[c][k - 2 + r];
            sR[r] = ws.Uraw[c][k - 1 + r];
          }
          if (c == hMs || c == bs) {
            // Shared nonlinear weights: indicators summed over the pair.
            double bL1[3], bL2[3], bR1[3], bR2[3];
            double tL[5], tR[5];
            for (int r = 0; r < 5; ++r) {
              tL[r] = ws.Uraw[hMs][k - 2 + r];
              tR[r] = ws.Uraw[hMs][k - 1 + r];
            }
            weno::smoothness(tL, bL1);
            double tRrev[5] = {tR[4], tR[3], tR[2], tR[1], tR[0]};
            weno::smoothness(tRrev, bR1);
            for (int r = 0; r < 5; ++r) {
              tL[r] = ws.Uraw[bs][k - 2 + r];
              tR[r] = ws.Uraw[bs][k - 1 + r];
            }
            weno::smoothness(tL, bL2);
            for (int r = 0; r < 5; ++r)
              tRrev[r] = tR[4 - r];
            weno::smoothness(tRrev, bR2);
            double bsumL[3], bsumR[3];
            for (int r = 0; r < 3; ++r) {
              bsumL[r] = bL1[r] + bL2[r];
              bsumR[r] = bR1[r] + bR2[r];
            }
            const weno::Weights wL = weno::z_weights(bsumL);
            const weno::Weights wR = weno::z_weights(bsumR);
            const double left = weno::apply_left(sL, wL);
            double sRrev[5] = {sR[4], sR[3], sR[2], sR[1], sR[0]};
            const double right = weno::apply_left(sRrev, wR);
            ws.jmpU[c] = right - left;
          } else {
            ws.jmpU[c] = weno::right_limit(sR) - weno::left_limit(sL);
          }
          ws.jmpV[c] = ws.Vh[(k + 1) * static_cast<std::size_t>(nc) + c] -
                       ws.Vh[k * static_cast<std::size_t>(nc) + c];
        }
        ring_sign_matrix(M, ws.jmpU.data(), ws.jmpV.data(), ws.Yring.data());
        const double s0 = 0.5 * std::abs(mtm);
        for (int c = 0; c < nc; ++c) {
          ws.Dring[c] = s0 * ws.Yring[c] * ws.jmpU[c];
          F[c] -= ws.Dring[c];
        }
        if (ledger) {
          const double *VL = ws.Vh.data() + static_cast<std::size_t>(k) * nc;
          const double *VR =
              ws.Vh.data() + static_cast<std::size_t>(k + 1) * nc;
          for (int c = 0; c < nc; ++c)
            qd += 0.5 * (VL[c] + VR[c]) * ws.Dring[c];
        }
      }
      if (ledger)
        ws.qes[t] -= qd;
    }
  }

  // Scatter.
  for (int i = 0; i < n; ++i) {
    const int k = G + i;
    const int ii = node_i(k), jj = node_j(k);
    const double *FR = ws.Fes.data() + static_cast<std::size_t>(i + 1) * nc;
    const double *FL = ws.Fes.data() + static_cast<std::size_t>(i) * nc;
    for (int c = 0; c < nc; ++c)
      dUc[c](grid_, ii, jj) -= inv_dx * (FR[c] - FL[c]);
    for (int m = 0; m < M; ++m) {
      const double ghm = g * ws.h[m][k] * inv_dx;
      dUc[3 * m + 1](grid_, ii, jj) -=
          ghm * (ws.Bsrc1[m][i + 1] - ws.Bsrc1[m][i]);
      dUc[3 * m + 2](grid_, ii, jj) -=
          ghm * (ws.Bsrc2[m][i + 1] - ws.Bsrc2[m][i]);
    }
    dJ(grid_, ii, jj) -= inv_dx * (ws.Jtil[i + 1] - ws.Jtil[i]);
  }
  if (ledger) {
    Field &qf = (dir == 1) ? qes->q1 : qes->q2;
    for (int t = 0; t <= n; ++t) {
      const int i = (dir == 1) ? t : fixed;
      const int j = (dir == 1) ? fixed : t;
      qf(grid_, i, j) = ws.qes[t];
    }
  }
}

void MovingSolver::assemble_direction(int dir, std::vector<Field> &dUc,
                                      Field &dJ, EnergyFluxes *qes) {
  const int nlines = (dir == 1) ? grid_.n2() : grid_.n1();
  parallel_lines(nlines, [&](int w, int b, int e) {
    for (int line = b; line < e; ++line)
      run_line(dir, line, dUc, dJ, qes, *ws_[w]);
  });
}

void MovingSolver::compute_rhs(std::vector<Field> &dUc, Field &dJ,
                               EnergyFluxes *qes) {
  for (auto &f : dUc)
    std::fill(f.a.begin(), f.a.end(), 0.0);
  std::fill(dJ.a.begin(), dJ.a.end(), 0.0);
  if (qes && scheme_.energy_ledger) {
    qes->q1.resize(grid_);
    qes->q2.resize(grid_);
  }
  assemble_direction(1, dUc, dJ, qes);
  if (!grid_.one_dim())
    assemble_direction(2, dUc, dJ, qes);
}

void MovingSolver::step(double dt) {
  const int nc = 3 * sys_.layers() + 1;
  const Grid &wg = mesh_.coord_grid();
  // Metrics must see the mesh velocity used for this step's stages.
  mesh_.fill_coordinate_ghosts();
  mesh_.compute_metrics(scheme_.oc);
  for (int c = 0; c < nc; ++c)
    Uc0_[c] = Uc_[c];
  J0_ = mesh_.J;
  x10_ = mesh_.x1;
  x20_ = mesh_.x2;

  auto combine = [&](double ca, double cb, double stage_time) {
    compute_rhs(dUc_, dJ_, nullptr);
    if (source_)
      add_source(stage_time);
    for (int j = 0; j < grid_.n2(); ++j) {
      for (int i = 0; i < grid_.n1(); ++i) {
        const std::size_t k = grid_.idx(i, j);
        for (int c = 0; c < nc; ++c)
          Uc_[c].a[k] = ca * Uc0_[c].a[k] + cb * (Uc_[c].a[k] + dt * dUc_[c].a[k]);
        mesh_.J.a[k] = ca * J0_.a[k] + cb * (mesh_.J.a[k] + dt * dJ_.a[k]);
        const std::size_t kw = wg.idx(i, j);
        mesh_.x1.a[kw] = ca * x10_.a[kw] +
                         cb * (mesh_.x1.a[kw] + dt * mesh_.xdot1.a[kw]);
        mesh_.x2.a[kw] = ca * x20_.a[kw] +
                         cb * (mesh_.x2.a[kw] + dt * mesh_.xdot2.a[kw]);
      }
    }
    after_stage();
  };

  combine(0.0, 1.0, time_);
  combine(0.75, 0.25, time_ + dt);
  combine(1.0 / 3.0, 2.0 / 3.0, time_ + 0.5 * dt);
  time_ += dt;
  ++steps_;
}

void MovingSolver::add_source(double t) {
  const int M = sys_.layers();
  std::vector<double> S(3 * M);
  const Grid &wg = mesh_.coord_grid();
  for (int j = 0; j < grid_.n2(); ++j) {
    for (int i = 0; i < grid_.n1(); ++i) {
      const double Jij = mesh_.J(grid_, i, j);
      source_(mesh_.x1(wg, i, j), mesh_.x2(wg, i, j), t, S.data());
      for (int m = 0; m < M; ++m) {
        dUc_[3 * m](grid_, i, j) += Jij * S[3 * m];
        dUc_[3 * m + 1](grid_, i, j) += Jij * S[3 * m + 1];
        dUc_[3 * m + 2](grid_, i, j) += Jij * S[3 * m + 2];
      }
    }
  }
}

double MovingSolver::suggest_dt(bool with_mesh_motion) {
  mesh_.fill_coordinate_ghosts();
  mesh_.compute_metrics(scheme_.oc);
  const int M = sys_.layers();
  std::vector<double> h(M), u(M), v(M), ur(M), vr(M);
  double amax[2] = {0.0, 0.0};
  bool cplx = false;
  const int ndir = grid_.one_dim() ? 1 : 2;
  for (int j = 0; j < grid_.n2(); ++j) {
    for (int i = 0; i < grid_.n1(); ++i) {
      for (int m = 0; m < M; ++m) {
        const double hm = phys_.h[m](grid_, i, j);
        h[m] = hm;
        u[m] = velocity_from(hm, phys_.hu[m](grid_, i, j), m + 1, i, j);
        v[m] = velocity_from(hm, phys_.hv[m](grid_, i, j), m + 1, i, j);
      }
      for (int dir = 1; dir <= ndir; ++dir) {
        const double ma = (dir == 1) ? mesh_.m11(grid_, i, j) : mesh_.m21(grid_, i, j);
        const double mb = (dir == 1) ? mesh_.m12(grid_, i, j) : mesh_.m22(grid_, i, j);
        const double mt = (dir == 1) ? mesh_.mt1(grid_, i, j) : mesh_.mt2(grid_, i, j);
        const Rotation T = interface_rotation(dir, ma, mb);
        for (int m = 0; m < M; ++m) {
          ur[m] = T.c * u[m] + T.s * v[m];
          vr[m] = -T.s * u[m] + T.c * v[m];
        }
        const double a = max_wave_speed(sys_, dir, h.data(), ur.data(),
                                        vr.data(), scheme_.wave_speed, &cplx);
        const double Lt = std::sqrt(ma * ma + mb * mb);
        const double ahat =
            with_mesh_motion ? std::abs(mt + Lt * a) : Lt * a;
        amax[dir - 1] = std::max(amax[dir - 1], ahat);
      }
    }
  }
  if (cplx)
    ++hyperbolic_warnings_;
  if (scheme_.accuracy_dt) {
    const double dmin =
        grid_.one_dim() ? grid_.dx1() : std::min(grid_.dx1(), grid_.dx2());
    return scheme_.cfl * std::pow(dmin, 5.0 / 3.0);
  }
  double denom = amax[0] / grid_.dx1();
  if (!grid_.one_dim())
    denom += amax[1] / grid_.dx2();
  if (!(denom > 0.0))
    throw std::runtime_error("CFL: zero wave speed on a nonzero field");
  return scheme_.cfl / denom;
}

double MovingSolver::total_energy() const {
  const int M = sys_.layers();
  std::vector<double> h(M), u(M), v(M);
  const double measure = grid_.cell_measure();
  double sum = 0.0, comp = 0.0;
  for (int j = 0; j < grid_.n2_unique(); ++j) {
    double row = 0.0, rowc = 0.0;
    for (int i = 0; i < grid_.n1_unique(); ++i) {
      for (int m = 0; m < M; ++m) {
        const double hm = phys_.h[m](grid_, i, j);
        h[m] = hm;
        u[m] = velocity_from(hm, phys_.hu[m](grid_, i, j), m + 1, i, j);
        v[m] = velocity_from(hm, phys_.hv[m](grid_, i, j), m + 1, i, j);
      }
      const double e = mesh_.J(grid_, i, j) *
                       energy_density(sys_, h.data(), u.data(), v.data(),
                                      phys_.b(grid_, i, j));
      const double y = e - rowc;
      const double t = row + y;
      rowc = (t - row) - y;
      row = t;
    }
    const double y = row * measure - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

void MovingSolver::energy_residual(Field &res) {
  const bool saved = scheme_.energy_ledger;
  scheme_.energy_ledger = true;
  EnergyFluxes qes;
  compute_rhs(dUc_, dJ_, &qes);
  scheme_.energy_ledger = saved;

  res.resize(grid_);
  const int M = sys_.layers();
  const int nc = 3 * M + 1;
  std::vector<double> h(M), u(M), v(M), Vh(nc);
  for (int j = 0; j < grid_.n2(); ++j) {
    for (int i = 0; i < grid_.n1(); ++i) {
      for (int m = 0; m < M; ++m) {
        const double hm = phys_.h[m](grid_, i, j);
        h[m] = hm;
        u[m] = velocity_from(hm, phys_.hu[m](grid_, i, j), m + 1, i, j);
        v[m] = velocity_from(hm, phys_.hv[m](grid_, i, j), m + 1, i, j);
      }
      const double b = phys_.b(grid_, i, j);
      entropy_variables_extended(sys_, h.data(), u.data(), v.data(), b,
                                 gamma_, Vh.data());
      const double phihat =
          potential_phi_hat(sys_, h.data(), u.data(), v.data(), b, gamma_);
      double r = 0.0;
      for (int m = 0; m < M; ++m) {
        r += Vh[3 * m] * dUc_[3 * m](grid_, i, j);
        r += Vh[3 * m + 1] * dUc_[3 * m + 1](grid_, i, j);
        r += Vh[3 * m + 2] * dUc_[3 * m + 2](grid_, i, j);
      }
      r += Vh[3 * M] * dUc_[3 * M](grid_, i, j);
      r -= phihat * dJ_(grid_, i, j);
      r += (qes.q1(grid_, i + 1, j) - qes.q1(grid_, i, j)) / grid_.dx1();
      if (!grid_.one_dim())
        r += (qes.q2(grid_, i, j + 1) - qes.q2(grid_, i, j)) / grid_.dx2();
      res(grid_, i, j) = r;
    }
  }
}

double MovingSolver::scl_residual() {
  mesh_.fill_coordinate_ghosts();
  mesh_.compute_metrics(scheme_.oc);
  const int p = scheme_.oc.p;
  const OrderCoeffs &oc = scheme_.oc;
  double worst = 0.0;
  auto tilde_diff = [&](const Field &f, int dir, int i, int j) {
    // (1/dxi) conservative difference of the 2p-th order pair means equals
    // the alpha-weighted central difference.
    double acc = 0.0;
    for (int q = 1; q <= p; ++q) {
      const double aq = oc.a[q - 1];
      if (dir == 1)
        acc += aq * (f(grid_, i + q, j) - f(grid_, i - q, j)) /
               (2.0 * grid_.dx1());
      else
        acc += aq * (f(grid_, i, j + q) - f(grid_, i, j - q)) /
               (2.0 * grid_.dx2());
    }
    return acc;
  };
  for (int j = 0; j < grid_.n2(); ++j) {
    for (int i = 0; i < grid_.n1(); ++i) {
      const double r1 = tilde_diff(mesh_.m11, 1, i, j) +
                        (grid_.one_dim() ? 0.0 : tilde_diff(mesh_.m21, 2, i, j));
      const double r2 = grid_.one_dim()
                            ? 0.0
                            : tilde_diff(mesh_.m12, 1, i, j) +
                                  tilde_diff(mesh_.m22, 2, i, j);
      worst = std::max(worst, std::max(std::abs(r1), std::abs(r2)));
    }
  }
  return worst;
}

} // namespace mlswe
