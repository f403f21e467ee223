#include "core/state.hpp"

#include <cmath>

namespace mlswe {

double layer_z(const LayerSystem &sys, const double *h, double b, int m) {
  const int M = sys.layers();
  double z = b;
  for (int k = m + 1; k <= M; ++k)
    z += h[k - 1];
  for (int k = 1; k < m; ++k)
    z += sys.density_ratio(k, m) * h[k - 1];
  return z;
}

State::State(const LayerSystem &sys, const Grid &g) : M(sys.layers()) {
  h.resize(M);
  hu.resize(M);
  hv.resize(M);
  for (int m = 0; m < M; ++m) {
    h[m].resize(g);
    hu[m].resize(g);
    hv[m].resize(g);
  }
  b.resize(g);
}

double velocity_from(double h, double hm, int layer, int i, int j) {
  if (!(h >= kDepthFloor))
    throw DryStateError("dry state: h_" + std::to_string(layer) + " = " +
                        std::to_string(h) + " below floor at node (" +
                        std::to_string(i) + "," + std::to_string(j) + ")");
  return hm / h;
}

NodeState State::node(const LayerSystem &sys, const Grid &g, int i,
                      int j) const {
  (void)sys;
  NodeState n(M);
  for (int m = 0; m < M; ++m) {
    const double hm = h[m](g, i, j);
    n.h[m] = hm;
    n.u[m] = velocity_from(hm, hu[m](g, i, j), m + 1, i, j);
    n.v[m] = velocity_from(hm, hv[m](g, i, j), m + 1, i, j);
  }
  n.b = b(g, i, j);
  return n;
}

void State::set_node(const Grid &g, int i, int j, const NodeState &n) {
  for (int m = 0; m < M; ++m) {
    h[m](g, i, j) = n.h[m];
    hu[m](g, i, j) = n.h[m] * n.u[m];
    hv[m](g, i, j) = n.h[m] * n.v[m];
  }
  b(g, i, j) = n.b;
}

namespace {

// Ghost index maps.  Periodic identifies node N-1 with node 0 (both stored),
// so the wrap period is N - 1.  Outflow extends the boundary value.
inline int wrap1(const Grid &g, int i) {
  const int p = g.n1() - 1;
  if (i < 0)
    return i + p;
  if (i > p)
    return i - p;
  return i;
}
inline int wrap2(const Grid &g, int j) {
  const int p = g.n2() - 1;
  if (j < 0)
    return j + p;
  if (j > p)
    return j - p;
  return j;
}

} // namespace

void fill_ghosts_scalar(const Grid &g, Field &f) {
  const int ng = g.ghosts();
  const int n1 = g.n1();
  // Direction 1 over all stored rows (interior rows first; the corner ghosts
  // are completed by the direction-2 pass below).
  const int jlo = 0, jhi = g.n2() - 1;
  for (int j = jlo; j <= jhi; ++j) {
    for (int k = 1; k <= ng; ++k) {
      if (g.bc1() == Boundary::periodic) {
        f(g, -k, j) = f(g, wrap1(g, -k), j);
        f(g, n1 - 1 + k, j) = f(g, wrap1(g, n1 - 1 + k), j);
      } else {
        f(g, -k, j) = f(g, 0, j);
        f(g, n1 - 1 + k, j) = f(g, n1 - 1, j);
      }
    }
  }
  if (g.one_dim())
    return;
  const int n2 = g.n2();
  for (int i = -ng; i <= n1 - 1 + ng; ++i) {
    for (int k = 1; k <= ng; ++k) {
      if (g.bc2() == Boundary::periodic) {
        f(g, i, -k) = f(g, i, wrap2(g, -k));
        f(g, i, n2 - 1 + k) = f(g, i, wrap2(g, n2 - 1 + k));
      } else {
        f(g, i, -k) = f(g, i, 0);
        f(g, i, n2 - 1 + k) = f(g, i, n2 - 1);
      }
    }
  }
}

void State::fill_ghosts(const Grid &g) {
  for (int m = 0; m < M; ++m) {
    fill_ghosts_scalar(g, h[m]);
    fill_ghosts_scalar(g, hu[m]);
    fill_ghosts_scalar(g, hv[m]);
  }
  fill_ghosts_scalar(g, b);
}

State lake_at_rest(const LayerSystem &sys, const Grid &g, const Field &b,
                   const std::vector<double> &surface_levels) {
  const int M = sys.layers();
  if (static_cast<int>(surface_levels.size()) != M)
    throw std::invalid_argument("lake_at_rest: need one level per layer");
  State s(sys, g);
  s.b = b;
  const int ng = g.ghosts();
  const int j0 = g.one_dim() ? 0 : -ng;
  const int j1 = g.one_dim() ? 0 : g.n2() - 1 + ng;
  for (int j = j0; j <= j1; ++j) {
    for (int i = -ng; i <= g.n1() - 1 + ng; ++i) {
      const double bij = b(g, i, j);
      for (int m = 1; m <= M; ++m) {
        const double hm = (m < M) ? surface_levels[m - 1] - surface_levels[m]
                                  : surface_levels[M - 1] - bij;
        if (!(hm > 0.0))
          throw std::invalid_argument(
              "lake_at_rest: non-positive depth for layer " +
              std::to_string(m) + " at node (" + std::to_string(i) + "," +
              std::to_string(j) + ")");
        s.h[m - 1](g, i, j) = hm;
      }
    }
  }
  return s;
}

} // namespace mlswe
