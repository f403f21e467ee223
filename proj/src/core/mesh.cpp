#include "core/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mlswe {

MovingMesh::MovingMesh(const Grid &grid)
    : grid_(grid),
      wide_(grid.n1(), grid.n2(), grid.x1lo(), grid.x1hi(), grid.x2lo(),
            grid.x2hi(), grid.bc1(), grid.bc2(), 2 * grid.ghosts()) {
  x1.resize(wide_);
  x2.resize(wide_);
  xdot1.resize(wide_);
  xdot2.resize(wide_);
  J.resize(grid_);
  m11.resize(grid_);
  m12.resize(grid_);
  m21.resize(grid_);
  m22.resize(grid_);
  mt1.resize(grid_);
  mt2.resize(grid_);
  reset_identity();
}

void MovingMesh::reset_identity() {
  for (int j = 0; j < grid_.n2(); ++j) {
    for (int i = 0; i < grid_.n1(); ++i) {
      x1(wide_, i, j) = grid_.x1(i);
      x2(wide_, i, j) = grid_.x2(j);
      xdot1(wide_, i, j) = 0.0;
      xdot2(wide_, i, j) = 0.0;
    }
  }
  fill_coordinate_ghosts();
}

namespace {

// Coordinates wrap with the domain period at periodic sides and mirror
// about the boundary node otherwise; velocities wrap or mirror accordingly.
void extend_dir1(const Grid &wide, Field &f, bool periodic, double period,
                 bool is_coordinate) {
  const int n1 = wide.n1(), ng = wide.ghosts();
  const int jlo = 0, jhi = wide.n2() - 1;
  for (int j = jlo; j <= jhi; ++j) {
    for (int k = 1; k <= ng; ++k) {
      if (periodic) {
        const double off = is_coordinate ? period : 0.0;
        f(wide, -k, j) = f(wide, n1 - 1 - k, j) - off;
        f(wide, n1 - 1 + k, j) = f(wide, k, j) + off;
      } else {
        f(wide, -k, j) = 2.0 * f(wide, 0, j) - f(wide, k, j);
        f(wide, n1 - 1 + k, j) =
            2.0 * f(wide, n1 - 1, j) - f(wide, n1 - 1 - k, j);
      }
    }
  }
}

void extend_dir2(const Grid &wide, Field &f, bool periodic, double period,
                 bool is_coordinate) {
  const int n1 = wide.n1(), n2 = wide.n2(), ng = wide.ghosts();
  for (int i = -ng; i <= n1 - 1 + ng; ++i) {
    for (int k = 1; k <= ng; ++k) {
      if (periodic) {
        const double off = is_coordinate ? period : 0.0;
        f(wide, i, -k) = f(wide, i, n2 - 1 - k) - off;
        f(wide, i, n2 - 1 + k) = f(wide, i, k) + off;
      } else {
        f(wide, i, -k) = 2.0 * f(wide, i, 0) - f(wide, i, k);
        f(wide, i, n2 - 1 + k) =
            2.0 * f(wide, i, n2 - 1) - f(wide, i, n2 - 1 - k);
      }
    }
  }
}

} // namespace

void MovingMesh::fill_coordinate_ghosts() {
  const bool p1 = grid_.bc1() == Boundary::periodic;
  const double L1 = grid_.x1hi() - grid_.x1lo();
  extend_dir1(wide_, x1, p1, L1, true);
  extend_dir1(wide_, x2, p1, 0.0, p1 ? false : true);
  extend_dir1(wide_, xdot1, p1, 0.0, false);
  extend_dir1(wide_, xdot2, p1, 0.0, false);
  if (!grid_.one_dim()) {
    const bool p2 = grid_.bc2() == Boundary::periodic;
    const double L2 = grid_.x2hi() - grid_.x2lo();
    extend_dir2(wide_, x1, p2, 0.0, p2 ? false : true);
    extend_dir2(wide_, x2, p2, L2, true);
    extend_dir2(wide_, xdot1, p2, 0.0, false);
    extend_dir2(wide_, xdot2, p2, 0.0, false);
  }
}

void MovingMesh::compute_metrics(const OrderCoeffs &oc) {
  const int ng = grid_.ghosts();
  const int p = oc.p;
  const double id1 = 1.0 / (2.0 * grid_.dx1());
  const double id2 = 1.0 / (2.0 * grid_.dx2());
  const int jlo = grid_.one_dim() ? 0 : -ng;
  const int jhi = grid_.one_dim() ? 0 : grid_.n2() - 1 + ng;
  for (int j = jlo; j <= jhi; ++j) {
    for (int i = -ng; i <= grid_.n1() - 1 + ng; ++i) {
      double d1x1 = 0.0, d1x2 = 0.0, d2x1 = 0.0, d2x2 = 0.0;
      for (int q = 1; q <= p; ++q) {
        const double aq = oc.a[q - 1];
        d1x1 += aq * id1 * (x1(wide_, i + q, j) - x1(wide_, i - q, j));
        d1x2 += aq * id1 * (x2(wide_, i + q, j) - x2(wide_, i - q, j));
        if (!grid_.one_dim()) {
          d2x1 += aq * id2 * (x1(wide_, i, j + q) - x1(wide_, i, j - q));
          d2x2 += aq * id2 * (x2(wide_, i, j + q) - x2(wide_, i, j - q));
        }
      }
      if (grid_.one_dim()) {
        m11(grid_, i, j) = 1.0;
        m12(grid_, i, j) = 0.0;
        m21(grid_, i, j) = 0.0;
        m22(grid_, i, j) = d1x1;
      } else {
        m11(grid_, i, j) = d2x2;
        m12(grid_, i, j) = -d2x1;
        m21(grid_, i, j) = -d1x2;
        m22(grid_, i, j) = d1x1;
      }
      const double xd1 = xdot1(wide_, i, j);
      const double xd2 = xdot2(wide_, i, j);
      mt1(grid_, i, j) = -xd1 * m11(grid_, i, j) - xd2 * m12(grid_, i, j);
      mt2(grid_, i, j) = -xd1 * m21(grid_, i, j) - xd2 * m22(grid_, i, j);
    }
  }
}

double MovingMesh::jacobian_from_metrics(int i, int j) const {
  if (grid_.one_dim())
    return m22(grid_, i, j);
  return m11(grid_, i, j) * m22(grid_, i, j) -
         m12(grid_, i, j) * m21(grid_, i, j);
}

void MovingMesh::init_jacobian() {
  for (int j = 0; j < grid_.n2(); ++j) {
    for (int i = 0; i < grid_.n1(); ++i) {
      const double d = jacobian_from_metrics(i, j);
      if (!(d > 0.0))
        throw std::runtime_error("tangled mesh: J <= 0 at node (" +
                                 std::to_string(i) + "," + std::to_string(j) +
                                 ")");
      J(grid_, i, j) = d;
    }
  }
}

namespace {

double sigma_value(const LayerSystem &sys, const State &s, const Grid &g,
                   const MonitorConfig &mc, int i, int j) {
  (void)sys;
  if (mc.sigma == MonitorConfig::Sigma::layer_depth)
    return s.h[mc.sigma_layer - 1](g, i, j);
  if (mc.sigma == MonitorConfig::Sigma::depth_plus_b)
    return s.h[mc.sigma_layer - 1](g, i, j) + s.b(g, i, j);
  double v = s.b(g, i, j);
  for (int m = mc.sigma_layer; m <= s.M; ++m)
    v += s.h[m - 1](g, i, j);
  return v;
}

inline int clampi(int v, int lo, int hi) { return std::clamp(v, lo, hi); }

} // namespace

void compute_monitor(const Grid &g, const LayerSystem &sys, const State &s,
                     const MonitorConfig &mc, Field &omega) {
  omega.resize(g);
  Field sig, grad, lap;
  sig.resize(g);
  grad.resize(g);
  if (mc.theta_laplacian > 0.0)
    lap.resize(g);
  const int n1 = g.n1(), n2 = g.n2();
  // Neighbor maps: periodic directions wrap with period n-1 (both endpoint
  // nodes are stored), others clamp to a one-sided difference.
  const bool p1 = g.bc1() == Boundary::periodic;
  const bool p2 = g.bc2() == Boundary::periodic;
  auto nb1 = [&](int i) {
    if (p1)
      return (i % (n1 - 1) + (n1 - 1)) % (n1 - 1);
    return clampi(i, 0, n1 - 1);
  };
  auto nb2 = [&](int j) {
    if (p2)
      return (j % (n2 - 1) + (n2 - 1)) % (n2 - 1);
    return clampi(j, 0, n2 - 1);
  };
  for (int j = 0; j < n2; ++j)
    for (int i = 0; i < n1; ++i)
      sig(g, i, j) = sigma_value(sys, s, g, mc, i, j);

  double gmax = 0.0, lmax = 0.0;
  for (int j = 0; j < n2; ++j) {
    for (int i = 0; i < n1; ++i) {
      const int ip = nb1(i + 1), im = nb1(i - 1);
      const double span1 = p1 ? 2.0 : (clampi(i + 1, 0, n1 - 1) -
                                       clampi(i - 1, 0, n1 - 1));
      const double d1 = (sig(g, ip, j) - sig(g, im, j)) / (span1 * g.dx1());
      double d2 = 0.0;
      if (n2 > 1) {
        const int jp = nb2(j + 1), jm = nb2(j - 1);
        const double span2 = p2 ? 2.0 : (clampi(j + 1, 0, n2 - 1) -
                                         clampi(j - 1, 0, n2 - 1));
        d2 = (sig(g, i, jp) - sig(g, i, jm)) / (span2 * g.dx2());
      }
      const double gr = std::sqrt(d1 * d1 + d2 * d2);
      grad(g, i, j) = gr;
      gmax = std::max(gmax, gr);
      if (mc.theta_laplacian > 0.0) {
        double lp = (sig(g, nb1(i + 1), j) - 2.0 * sig(g, i, j) +
                     sig(g, nb1(i - 1), j)) /
                    (g.dx1() * g.dx1());
        if (n2 > 1)
          lp += (sig(g, i, nb2(j + 1)) - 2.0 * sig(g, i, j) +
                 sig(g, i, nb2(j - 1))) /
                (g.dx2() * g.dx2());
        lp = std::abs(lp);
        lap(g, i, j) = lp;
        lmax = std::max(lmax, lp);
      }
    }
  }

  for (int j = 0; j < n2; ++j) {
    for (int i = 0; i < n1; ++i) {
      double w = 1.0;
      if (gmax > 0.0) {
        const double r = grad(g, i, j) / gmax;
        w += mc.theta * r * r;
      }
      if (mc.theta_laplacian > 0.0 && lmax > 0.0) {
        const double r = lap(g, i, j) / lmax;
        w += mc.theta_laplacian * r * r;
      }
      omega(g, i, j) = std::sqrt(w);
    }
  }

  // 3x3 low-pass (3-point in 1D).
  for (int pass = 0; pass < mc.smoothing_passes; ++pass) {
    Field tmp = omega;
    for (int j = 0; j < n2; ++j) {
      for (int i = 0; i < n1; ++i) {
        if (n2 == 1) {
          const double wl = tmp(g, nb1(i - 1), 0);
          const double wr = tmp(g, nb1(i + 1), 0);
          omega(g, i, 0) = 0.25 * (wl + 2.0 * tmp(g, i, 0) + wr);
        } else {
          double acc = 0.0;
          static const double k3[3] = {1.0, 2.0, 1.0};
          for (int dj = -1; dj <= 1; ++dj)
            for (int di = -1; di <= 1; ++di)
              acc += k3[di + 1] * k3[dj + 1] *
                     tmp(g, nb1(i + di), nb2(j + dj));
          omega(g, i, j) = acc / 16.0;
        }
      }
    }
  }
}

namespace {

inline double harmonic(double a, double b) { return 2.0 * a * b / (a + b); }

} // namespace

void relax_mesh(const MovingMesh &mesh, const Field &omega,
                const MonitorConfig &mc, Field &x1, Field &x2) {
  const Grid &g = mesh.grid();
  const Grid &wg = mesh.coord_grid();
  const int n1 = g.n1(), n2 = g.n2();
  const bool p1 = g.bc1() == Boundary::periodic;
  const bool p2 = n2 > 1 && g.bc2() == Boundary::periodic;
  const double L1 = g.x1hi() - g.x1lo();
  const double L2 = g.x2hi() - g.x2lo();
  // Periodic directions relax the whole ring (node n-1 mirrors node 0 with
  // the period offset) so the seam carries no equation defect; the free
  // translation mode is removed afterwards by re-anchoring the mean
  // displacement.
  auto wrapped = [&](const Field &f, int i, int j, double off1, double off2,
                     bool is_x1) -> double {
    double o = 0.0;
    if (p1) {
      if (i < 0) {
        i += n1 - 1;
        o += is_x1 ? -off1 : 0.0;
      } else if (i > n1 - 1) {
        i -= n1 - 1;
        o += is_x1 ? off1 : 0.0;
      }
    }
    if (p2) {
      if (j < 0) {
        j += n2 - 1;
        o += is_x1 ? 0.0 : -off2;
      } else if (j > n2 - 1) {
        j -= n2 - 1;
        o += is_x1 ? 0.0 : off2;
      }
    }
    return f(wg, i, j) + o;
  };
  auto omega_at = [&](int i, int j) {
    if (p1)
      i = (i % (n1 - 1) + (n1 - 1)) % (n1 - 1);
    if (p2 && n2 > 1)
      j = (j % (n2 - 1) + (n2 - 1)) % (n2 - 1);
    return omega(g, i, j);
  };

  const int i_lo = p1 ? 0 : 1, i_hi = p1 ? n1 - 2 : n1 - 2;
  Field nx1 = x1, nx2 = x2;
  for (int sweep = 0; sweep < mc.sweeps; ++sweep) {
    if (n2 == 1) {
      for (int i = i_lo; i <= i_hi; ++i) {
        const double we = harmonic(omega_at(i, 0), omega_at(i + 1, 0));
        const double ww = harmonic(omega_at(i, 0), omega_at(i - 1, 0));
        const double xn = (we * wrapped(x1, i + 1, 0, L1, L2, true) +
                           ww * wrapped(x1, i - 1, 0, L1, L2, true)) /
                          (we + ww);
        nx1(wg, i, 0) = (1.0 - mc.damping) * x1(wg, i, 0) + mc.damping * xn;
      }
      for (int i = i_lo; i <= i_hi; ++i)
        x1(wg, i, 0) = nx1(wg, i, 0);
      if (p1)
        x1(wg, n1 - 1, 0) = x1(wg, 0, 0) + L1;
      continue;
    }

    const int j_lo = p2 ? 0 : 1, j_hi = p2 ? n2 - 2 : n2 - 2;
    for (int j = j_lo; j <= j_hi; ++j) {
      for (int i = i_lo; i <= i_hi; ++i) {
        const double we = harmonic(omega_at(i, j), omega_at(i + 1, j));
        const double ww = harmonic(omega_at(i, j), omega_at(i - 1, j));
        const double wn = harmonic(omega_at(i, j), omega_at(i, j + 1));
        const double ws = harmonic(omega_at(i, j), omega_at(i, j - 1));
        const double wsum = we + ww + wn + ws;
        const double xn = (we * wrapped(x1, i + 1, j, L1, L2, true) +
                           ww * wrapped(x1, i - 1, j, L1, L2, true) +
                           wn * wrapped(x1, i, j + 1, L1, L2, true) +
                           ws * wrapped(x1, i, j - 1, L1, L2, true)) /
                          wsum;
        const double yn = (we * wrapped(x2, i + 1, j, L1, L2, false) +
                           ww * wrapped(x2, i - 1, j, L1, L2, false) +
                           wn * wrapped(x2, i, j + 1, L1, L2, false) +
                           ws * wrapped(x2, i, j - 1, L1, L2, false)) /
                          wsum;
        nx1(wg, i, j) = (1.0 - mc.damping) * x1(wg, i, j) + mc.damping * xn;
        nx2(wg, i, j) = (1.0 - mc.damping) * x2(wg, i, j) + mc.damping * yn;
      }
    }
    // Non-periodic boundary nodes slide along their edge.
    if (!p2) {
      for (int i = i_lo; i <= i_hi; ++i) {
        for (int j : {0, n2 - 1}) {
          const double we = harmonic(omega_at(i, j), omega_at(i + 1, j));
          const double ww = harmonic(omega_at(i, j), omega_at(i - 1, j));
          const double xn = (we * wrapped(x1, i + 1, j, L1, L2, true) +
                             ww * wrapped(x1, i - 1, j, L1, L2, true)) /
                            (we + ww);
          nx1(wg, i, j) = (1.0 - mc.damping) * x1(wg, i, j) + mc.damping * xn;
          nx2(wg, i, j) = x2(wg, i, j);
        }
      }
    }
    if (!p1) {
      for (int j = j_lo; j <= j_hi; ++j) {
        for (int i : {0, n1 - 1}) {
          const double wn = harmonic(omega_at(i, j), omega_at(i, j + 1));
          const double ws = harmonic(omega_at(i, j), omega_at(i, j - 1));
          const double yn = (wn * wrapped(x2, i, j + 1, L1, L2, false) +
                             ws * wrapped(x2, i, j - 1, L1, L2, false)) /
                            (wn + ws);
          nx2(wg, i, j) = (1.0 - mc.damping) * x2(wg, i, j) + mc.damping * yn;
          nx1(wg, i, j) = x1(wg, i, j);
        }
      }
    }
    for (int j = 0; j < n2; ++j) {
      for (int i = 0; i < n1; ++i) {
        const bool seam = (p1 && i == n1 - 1) || (p2 && j == n2 - 1);
        if (seam)
          continue;
        const bool pinned_i = !p1 && (i == 0 || i == n1 - 1);
        const bool pinned_j = !p2 && (j == 0 || j == n2 - 1);
        if (pinned_i && pinned_j)
          continue; // corner
        x1(wg, i, j) = nx1(wg, i, j);
        x2(wg, i, j) = nx2(wg, i, j);
      }
    }
    // Seam copies with the period offset.
    if (p1)
      for (int j = 0; j < n2; ++j) {
        x1(wg, n1 - 1, j) = x1(wg, 0, j) + L1;
        x2(wg, n1 - 1, j) = x2(wg, 0, j);
      }
    if (p2)
      for (int i = 0; i < n1; ++i) {
        x1(wg, i, n2 - 1) = x1(wg, i, 0);
        x2(wg, i, n2 - 1) = x2(wg, i, 0) + L2;
      }
  }

  // Re-anchor the translational null modes of periodic directions.
  if (p1 || p2) {
    double m1 = 0.0, m2 = 0.0;
    int cnt = 0;
    const int iu = p1 ? n1 - 1 : n1;
    const int ju = p2 ? n2 - 1 : n2;
    for (int j = 0; j < ju; ++j) {
      for (int i = 0; i < iu; ++i) {
        m1 += x1(wg, i, j) - g.x1(i);
        m2 += x2(wg, i, j) - g.x2(j);
        ++cnt;
      }
    }
    m1 /= cnt;
    m2 /= cnt;
    for (int j = 0; j < n2; ++j) {
      for (int i = 0; i < n1; ++i) {
        if (p1)
          x1(wg, i, j) -= m1;
        if (p2)
          x2(wg, i, j) -= m2;
      }
    }
  }
}

} // namespace mlswe
