#include "core/fixed_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace mlswe {

int worker_count(std::size_t work_items) {
  static const int configured = [] {
    if (const char *e = std::getenv("MLSWE_THREADS"))
      return std::max(1, std::atoi(e));
    return 0;
  }();
  int n = configured > 0 ? configured
                         : static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1)
    n = 1;
  if (work_items < 8)
    return 1;
  return static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(n), work_items));
}

void parallel_lines(int nlines, const std::function<void(int, int, int)> &fn) {
  const int nw = worker_count(nlines);
  if (nw <= 1) {
    fn(0, 0, nlines);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::mutex err_mx;
  const int chunk = (nlines + nw - 1) / nw;
  for (int w = 0; w < nw; ++w) {
    const int b = w * chunk;
    const int e = std::min(nlines, b + chunk);
    if (b >= e)
      break;
    pool.emplace_back([&, w, b, e] {
      try {
        fn(w, b, e);
      } catch (...) {
        std::scoped_lock lk(err_mx);
        if (!err)
          err = std::current_exception();
      }
    });
  }
  for (auto &t : pool)
    t.join();
  if (err)
    std::rethrow_exception(err);
}

/// Per-worker scratch for one grid line (gathered contiguous copies, pair
/// fluxes, combined interface fluxes and sources, dissipation buffers).
struct FixedSolver::LineWS {
  int M = 0, L = 0, n = 0, G = 0;
  std::vector<std::vector<double>> h, u, v, z; // [M][L]
  std::vector<double> b;                       // [L]
  std::vector<double> V;                       // [L*3M], node-major
  std::vector<double> psi;                     // [L] directional potential
  std::vector<std::vector<double>> hun, hunz;  // [M][L] h*un, h*un*z
  std::vector<double> alpha_node;              // [L]
  std::vector<std::vector<double>> pairF;      // [q][L*3M]
  std::vector<std::vector<double>> pairQ;      // [q][L]
  std::vector<double> Fes;                     // [(n+1)*3M]
  std::vector<std::vector<double>> Bsrc;       // [M][n+1]
  std::vector<double> qes;                     // [n+1]
  ScalingCoeffs sc;
  std::vector<double> hbar, ubar, vbar; // [M]
  std::vector<double> nbuf_h, nbuf_u, nbuf_v;
  std::vector<double> D; // [3M]
  DissipationScratch diss;

  void resize(int M_, int n_, int G_, int p, bool ledger) {
    M = M_;
    n = n_;
    G = G_;
    L = n + 2 * G;
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
    V.assign(static_cast<std::size_t>(L) * 3 * M, 0.0);
    alpha_node.assign(L, 0.0);
    pairF.resize(p);
    for (auto &a : pairF)
      a.assign(static_cast<std::size_t>(L) * 3 * M, 0.0);
    Fes.assign(static_cast<std::size_t>(n + 1) * 3 * M, 0.0);
    mat(Bsrc, M, n + 1);
    if (ledger) {
      psi.assign(L, 0.0);
      mat(hun, M, L);
      mat(hunz, M, L);
      pairQ.resize(p);
      for (auto &a : pairQ)
        a.assign(L, 0.0);
      qes.assign(n + 1, 0.0);
    }
    hbar.assign(M, 0.0);
    ubar.assign(M, 0.0);
    vbar.assign(M, 0.0);
    nbuf_h.assign(M, 0.0);
    nbuf_u.assign(M, 0.0);
    nbuf_v.assign(M, 0.0);
    D.assign(3 * M, 0.0);
    diss.resize(M);
  }
};

FixedSolver::FixedSolver(LayerSystem sys, Grid grid, SchemeConfig scheme)
    : sys_(std::move(sys)), grid_(grid), scheme_(scheme), state_(sys_, grid_),
      stage_(sys_, grid_), rhs_(sys_, grid_) {
  const int p = scheme_.oc.p;
  if (grid_.ghosts() < std::max(p, 3))
    throw std::invalid_argument("FixedSolver: ghost width too small for p");
  const int max_lines = std::max(grid_.n1(), grid_.n2());
  const int nw = worker_count(static_cast<std::size_t>(max_lines));
  ws_.reserve(nw);
  for (int w = 0; w < nw; ++w)
    ws_.push_back(std::make_unique<LineWS>());
}

FixedSolver::~FixedSolver() = default;

void FixedSolver::run_line(const State &s, int dir, int fixed, State &dudt,
                           EnergyFluxes *qes, LineWS &ws) {
  const int M = sys_.layers();
  const int G = grid_.ghosts();
  const int n = (dir == 1) ? grid_.n1() : grid_.n2();
  const int p = scheme_.oc.p;
  const double g = sys_.g();
  const bool ledger = scheme_.energy_ledger && qes;
  ws.resize(M, n, G, p, ledger);
  const double inv_dx = 1.0 / ((dir == 1) ? grid_.dx1() : grid_.dx2());

  auto node_i = [&](int k) { return dir == 1 ? k - G : fixed; };
  auto node_j = [&](int k) { return dir == 1 ? fixed : k - G; };

  // Gather the line into contiguous rows; velocities recovered here so any
  // dry state aborts with its node location.
  for (int k = 0; k < ws.L; ++k) {
    const int i = node_i(k), j = node_j(k);
    for (int m = 0; m < M; ++m) {
      const double hm = s.h[m](grid_, i, j);
      ws.h[m][k] = hm;
      ws.u[m][k] = velocity_from(hm, s.hu[m](grid_, i, j), m + 1, i, j);
      ws.v[m][k] = velocity_from(hm, s.hv[m](grid_, i, j), m + 1, i, j);
    }
    ws.b[k] = s.b(grid_, i, j);
  }

  // z_m rows.
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

  const bool need_v = scheme_.dissipation || ledger;
  if (need_v) {
    for (int k = 0; k < ws.L; ++k) {
      double *Vk = ws.V.data() + static_cast<std::size_t>(k) * 3 * M;
      for (int m = 0; m < M; ++m) {
        const double rho = sys_.rho(m + 1);
        const double um = ws.u[m][k], vm = ws.v[m][k];
        Vk[3 * m] = g * rho * (ws.h[m][k] + ws.z[m][k]) -
                    0.5 * rho * (um * um + vm * vm);
        Vk[3 * m + 1] = rho * um;
        Vk[3 * m + 2] = rho * vm;
      }
    }
  }
  if (ledger) {
    for (int k = 0; k < ws.L; ++k) {
      double ps = 0.0;
      for (int m = 0; m < M; ++m) {
        const double un = (dir == 1) ? ws.u[m][k] : ws.v[m][k];
        const double hm = ws.h[m][k];
        ps += 0.5 * g * sys_.rho(m + 1) * hm * hm * un;
        ws.hun[m][k] = hm * un;
        ws.hunz[m][k] = hm * un * ws.z[m][k];
      }
      ws.psi[k] = ps;
    }
  }

  // Two-point building blocks P_q[j] = Ftilde(U_j, U_{j+q}).
  for (int q = 1; q <= p; ++q) {
    auto &P = ws.pairF[q - 1];
    for (int j = G - q; j <= G + n - 1; ++j) {
      double *F = P.data() + static_cast<std::size_t>(j) * 3 * M;
      for (int m = 0; m < M; ++m)
        ec_layer_flux(g, dir, ws.h[m][j], ws.u[m][j], ws.v[m][j], ws.z[m][j],
                      ws.h[m][j + q], ws.u[m][j + q], ws.v[m][j + q],
                      ws.z[m][j + q], F + 3 * m);
      if (ledger) {
        const double *VL = ws.V.data() + static_cast<std::size_t>(j) * 3 * M;
        const double *VR =
            ws.V.data() + static_cast<std::size_t>(j + q) * 3 * M;
        double qq = 0.0;
        for (int c = 0; c < 3 * M; ++c)
          qq += 0.5 * (VL[c] + VR[c]) * F[c];
        qq -= 0.5 * (ws.psi[j] + ws.psi[j + q]);
        for (int m = 0; m < M; ++m) {
          const double rho = sys_.rho(m + 1);
          qq += 0.25 * g * rho * (ws.hun[m][j] + ws.hun[m][j + q]) *
                (ws.z[m][j] + ws.z[m][j + q]);
          qq -= 0.5 * g * rho * (ws.hunz[m][j] + ws.hunz[m][j + q]);
        }
        ws.pairQ[q - 1][j] = qq;
      }
    }
  }

  // 2p-th order combinations at the n+1 interfaces (interface t sits between
  // nodes t-1 and t of the interior numbering).
  std::fill(ws.Fes.begin(), ws.Fes.end(), 0.0);
  for (auto &row : ws.Bsrc)
    std::fill(row.begin(), row.end(), 0.0);
  if (ledger)
    std::fill(ws.qes.begin(), ws.qes.end(), 0.0);
  for (int t = 0; t <= n; ++t) {
    const int k = G + t - 1;
    double *F = ws.Fes.data() + static_cast<std::size_t>(t) * 3 * M;
    for (int q = 1; q <= p; ++q) {
      const double aq = scheme_.oc.a[q - 1];
      for (int ss = 0; ss <= q - 1; ++ss) {
        const double *P =
            ws.pairF[q - 1].data() + static_cast<std::size_t>(k - ss) * 3 * M;
        for (int c = 0; c < 3 * M; ++c)
          F[c] += aq * P[c];
        for (int m = 0; m < M; ++m)
          ws.Bsrc[m][t] +=
              aq * 0.5 * (ws.z[m][k - ss] + ws.z[m][k - ss + q]);
        if (ledger)
          ws.qes[t] += aq * ws.pairQ[q - 1][k - ss];
      }
    }
  }

  if (scheme_.dissipation) {
    // Nodal wave speeds for the interface estimate max(aL, aR, a(mean)).
    for (int k = 0; k < ws.L; ++k) {
      for (int m = 0; m < M; ++m) {
        ws.nbuf_h[m] = ws.h[m][k];
        ws.nbuf_u[m] = ws.u[m][k];
        ws.nbuf_v[m] = ws.v[m][k];
      }
      bool cplx = false;
      ws.alpha_node[k] =
          max_wave_speed(sys_, dir, ws.nbuf_h.data(), ws.nbuf_u.data(),
                         ws.nbuf_v.data(), scheme_.wave_speed, &cplx);
    }
    for (int t = 0; t <= n; ++t) {
      const int k = G + t - 1;
      for (int m = 0; m < M; ++m) {
        const double hL = ws.h[m][k], hR = ws.h[m][k + 1];
        ws.hbar[m] = 0.5 * (hL + hR);
        ws.ubar[m] =
            0.5 * (hL * ws.u[m][k] + hR * ws.u[m][k + 1]) / ws.hbar[m];
        ws.vbar[m] =
            0.5 * (hL * ws.v[m][k] + hR * ws.v[m][k + 1]) / ws.hbar[m];
      }
      bool cplx = false;
      double a = max_wave_speed(sys_, dir, ws.hbar.data(), ws.ubar.data(),
                                ws.vbar.data(), scheme_.wave_speed, &cplx);
      a = std::max(a, std::max(ws.alpha_node[k], ws.alpha_node[k + 1]));
      scaling_coeffs_into(sys_, ws.hbar.data(), ws.sc);
      scaled_weno_dissipation(
          sys_, ws.sc, ws.ubar.data(), ws.vbar.data(), a,
          ws.V.data() + static_cast<std::size_t>(k - 2) * 3 * M, ws.D.data(),
          ws.diss);
      double *F = ws.Fes.data() + static_cast<std::size_t>(t) * 3 * M;
      const double *VL = ws.V.data() + static_cast<std::size_t>(k) * 3 * M;
      const double *VR =
          ws.V.data() + static_cast<std::size_t>(k + 1) * 3 * M;
      double qd = 0.0;
      for (int c = 0; c < 3 * M; ++c) {
        F[c] -= ws.D[c];
        qd += 0.5 * (VL[c] + VR[c]) * ws.D[c];
      }
      if (ledger)
        ws.qes[t] -= qd;
    }
  }

  // Conservative differences plus the nonconservative source combinations.
  for (int i = 0; i < n; ++i) {
    const int k = G + i;
    const int ii = node_i(k), jj = node_j(k);
    const double *FR = ws.Fes.data() + static_cast<std::size_t>(i + 1) * 3 * M;
    const double *FL = ws.Fes.data() + static_cast<std::size_t>(i) * 3 * M;
    for (int m = 0; m < M; ++m) {
      dudt.h[m](grid_, ii, jj) -= inv_dx * (FR[3 * m] - FL[3 * m]);
      dudt.hu[m](grid_, ii, jj) -= inv_dx * (FR[3 * m + 1] - FL[3 * m + 1]);
      dudt.hv[m](grid_, ii, jj) -= inv_dx * (FR[3 * m + 2] - FL[3 * m + 2]);
      const double src =
          g * ws.h[m][k] * inv_dx * (ws.Bsrc[m][i + 1] - ws.Bsrc[m][i]);
      if (dir == 1)
        dudt.hu[m](grid_, ii, jj) -= src;
      else
        dudt.hv[m](grid_, ii, jj) -= src;
    }
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

void FixedSolver::assemble_direction(const State &s, int dir, State &dudt,
                                     EnergyFluxes *qes) {
  const int nlines = (dir == 1) ? grid_.n2() : grid_.n1();
  parallel_lines(nlines, [&](int w, int b, int e) {
    for (int line = b; line < e; ++line)
      run_line(s, dir, line, dudt, qes, *ws_[w]);
  });
}

void FixedSolver::compute_rhs(const State &s, double t, State &dudt,
                              EnergyFluxes *qes) {
  for (int m = 0; m < dudt.M; ++m) {
    std::fill(dudt.h[m].a.begin(), dudt.h[m].a.end(), 0.0);
    std::fill(dudt.hu[m].a.begin(), dudt.hu[m].a.end(), 0.0);
    std::fill(dudt.hv[m].a.begin(), dudt.hv[m].a.end(), 0.0);
  }
  if (qes && scheme_.energy_ledger) {
    qes->q1.resize(grid_);
    qes->q2.resize(grid_);
  }
  assemble_direction(s, 1, dudt, qes);
  if (!grid_.one_dim())
    assemble_direction(s, 2, dudt, qes);

  if (source_) {
    const int M = sys_.layers();
    std::vector<double> S(3 * M);
    for (int j = 0; j < grid_.n2(); ++j) {
      for (int i = 0; i < grid_.n1(); ++i) {
        source_(grid_.x1(i), grid_.x2(j), t, S.data());
        for (int m = 0; m < M; ++m) {
          dudt.h[m](grid_, i, j) += S[3 * m];
          dudt.hu[m](grid_, i, j) += S[3 * m + 1];
          dudt.hv[m](grid_, i, j) += S[3 * m + 2];
        }
      }
    }
  }
}

double FixedSolver::suggest_dt() {
  const int M = sys_.layers();
  std::vector<double> h(M), u(M), v(M);
  double a1 = 0.0, a2 = 0.0;
  bool cplx = false;
  for (int j = 0; j < grid_.n2(); ++j) {
    for (int i = 0; i < grid_.n1(); ++i) {
      for (int m = 0; m < M; ++m) {
        const double hm = state_.h[m](grid_, i, j);
        h[m] = hm;
        u[m] = velocity_from(hm, state_.hu[m](grid_, i, j), m + 1, i, j);
        v[m] = velocity_from(hm, state_.hv[m](grid_, i, j), m + 1, i, j);
      }
      a1 = std::max(a1, max_wave_speed(sys_, 1, h.data(), u.data(), v.data(),
                                       scheme_.wave_speed, &cplx));
      if (!grid_.one_dim())
        a2 = std::max(a2, max_wave_speed(sys_, 2, h.data(), u.data(), v.data(),
                                         scheme_.wave_speed, &cplx));
    }
  }
  if (cplx)
    ++hyperbolic_warnings_;
  alpha1_ = a1;
  alpha2_ = a2;
  if (scheme_.accuracy_dt) {
    const double dmin =
        grid_.one_dim() ? grid_.dx1() : std::min(grid_.dx1(), grid_.dx2());
    return scheme_.cfl * std::pow(dmin, 5.0 / 3.0);
  }
  double denom = a1 / grid_.dx1();
  if (!grid_.one_dim())
    denom += a2 / grid_.dx2();
  if (!(denom > 0.0))
    throw std::runtime_error("CFL: zero wave speed on a nonzero field");
  return scheme_.cfl / denom;
}

namespace {

void axpy_state(State &out, const State &a, double ca, const State &b,
                double cb, const State &dudt, double cdt, const Grid &g) {
  // out = ca*a + cb*(b + cdt*dudt) on the interior.
  for (int m = 0; m < out.M; ++m) {
    for (int j = 0; j < g.n2(); ++j) {
      for (int i = 0; i < g.n1(); ++i) {
        const std::size_t k = g.idx(i, j);
        out.h[m].a[k] = ca * a.h[m].a[k] + cb * (b.h[m].a[k] + cdt * dudt.h[m].a[k]);
        out.hu[m].a[k] =
            ca * a.hu[m].a[k] + cb * (b.hu[m].a[k] + cdt * dudt.hu[m].a[k]);
        out.hv[m].a[k] =
            ca * a.hv[m].a[k] + cb * (b.hv[m].a[k] + cdt * dudt.hv[m].a[k]);
      }
    }
  }
}

} // namespace

void FixedSolver::check_admissible(const State &s) const {
  for (int j = 0; j < grid_.n2(); ++j) {
    for (int i = 0; i < grid_.n1(); ++i) {
      for (int m = 0; m < s.M; ++m) {
        const double hm = s.h[m](grid_, i, j);
        if (!std::isfinite(hm) || !std::isfinite(s.hu[m](grid_, i, j)) ||
            !std::isfinite(s.hv[m](grid_, i, j)))
          throw std::runtime_error("non-finite state at node (" +
                                   std::to_string(i) + "," +
                                   std::to_string(j) + ")");
        if (!(hm >= kDepthFloor))
          throw DryStateError("dry state: h_" + std::to_string(m + 1) +
                              " below floor at node (" + std::to_string(i) +
                              "," + std::to_string(j) + ")");
      }
    }
  }
}

void FixedSolver::step(double dt) {
  stage_.b = state_.b;
  state_.fill_ghosts(grid_);
  compute_rhs(state_, time_, rhs_);
  axpy_state(stage_, state_, 0.0, state_, 1.0, rhs_, dt, grid_);

  stage_.fill_ghosts(grid_);
  compute_rhs(stage_, time_ + dt, rhs_);
  axpy_state(stage_, state_, 0.75, stage_, 0.25, rhs_, dt, grid_);

  stage_.fill_ghosts(grid_);
  compute_rhs(stage_, time_ + 0.5 * dt, rhs_);
  axpy_state(state_, state_, 1.0 / 3.0, stage_, 2.0 / 3.0, rhs_, dt, grid_);

  time_ += dt;
  ++steps_;
  check_admissible(state_);
}

double FixedSolver::total_energy() const {
  const int M = sys_.layers();
  std::vector<double> h(M), u(M), v(M);
  const double measure = grid_.cell_measure();
  double sum = 0.0, comp = 0.0;
  for (int j = 0; j < grid_.n2_unique(); ++j) {
    double row = 0.0, rowc = 0.0;
    for (int i = 0; i < grid_.n1_unique(); ++i) {
      for (int m = 0; m < M; ++m) {
        const double hm = state_.h[m](grid_, i, j);
        h[m] = hm;
        u[m] = velocity_from(hm, state_.hu[m](grid_, i, j), m + 1, i, j);
        v[m] = velocity_from(hm, state_.hv[m](grid_, i, j), m + 1, i, j);
      }
      const double e =
          energy_density(sys_, h.data(), u.data(), v.data(), state_.b(grid_, i, j));
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

void FixedSolver::energy_residual(const State &s, double t, Field &res) {
  const bool saved = scheme_.energy_ledger;
  scheme_.energy_ledger = true;
  EnergyFluxes qes;
  State &work = stage_;
  work.b = s.b;
  State scopy = s;
  scopy.fill_ghosts(grid_);
  compute_rhs(scopy, t, rhs_, &qes);
  scheme_.energy_ledger = saved;

  res.resize(grid_);
  const int M = sys_.layers();
  std::vector<double> h(M), u(M), v(M), V(3 * M);
  for (int j = 0; j < grid_.n2(); ++j) {
    for (int i = 0; i < grid_.n1(); ++i) {
      for (int m = 0; m < M; ++m) {
        const double hm = scopy.h[m](grid_, i, j);
        h[m] = hm;
        u[m] = velocity_from(hm, scopy.hu[m](grid_, i, j), m + 1, i, j);
        v[m] = velocity_from(hm, scopy.hv[m](grid_, i, j), m + 1, i, j);
      }
      entropy_variables(sys_, h.data(), u.data(), v.data(),
                        scopy.b(grid_, i, j), V.data());
      double r = 0.0;
      for (int m = 0; m < M; ++m) {
        r += V[3 * m] * rhs_.h[m](grid_, i, j);
        r += V[3 * m + 1] * rhs_.hu[m](grid_, i, j);
        r += V[3 * m + 2] * rhs_.hv[m](grid_, i, j);
      }
      r += (qes.q1(grid_, i + 1, j) - qes.q1(grid_, i, j)) / grid_.dx1();
      if (!grid_.one_dim())
        r += (qes.q2(grid_, i, j + 1) - qes.q2(grid_, i, j)) / grid_.dx2();
      res(grid_, i, j) = r;
    }
  }
}

} // namespace mlswe
