#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "core/grid.hpp"
#include "core/layer_system.hpp"

namespace mlswe {

/// Depths below this floor abort the run: dry beds are outside the model's
/// admissible set, and clipping would mask bugs silently.
inline constexpr double kDepthFloor = 1e-10;

class DryStateError : public std::runtime_error {
public:
  explicit DryStateError(const std::string &what) : std::runtime_error(what) {}
};

/// One scalar per node, stored padded per the owning Grid.
struct Field {
  std::vector<double> a;
  void resize(const Grid &g) { a.assign(g.size(), 0.0); }
  double &operator()(const Grid &g, int i, int j) { return a[g.idx(i, j)]; }
  double operator()(const Grid &g, int i, int j) const {
    return a[g.idx(i, j)];
  }
};

/// Primitive view of a single node, sized by the layer count.
struct NodeState {
  std::vector<double> h, u, v;
  double b = 0.0;

  NodeState() = default;
  explicit NodeState(int layers) : h(layers), u(layers), v(layers) {}
  int layers() const { return static_cast<int>(h.size()); }
};

/// z_m = b + sum_{k>m} h_k + sum_{k<m} (rho_k/rho_m) h_k for one node.
/// m is 1-based; h holds all M depths.
double layer_z(const LayerSystem &sys, const double *h, double b, int m);

inline double layer_z(const LayerSystem &sys, const NodeState &n, int m) {
  if (m < 1 || m > n.layers())
    throw std::invalid_argument("layer_z: layer index out of range");
  return layer_z(sys, n.h.data(), n.b, m);
}

/// Conserved variables per node and layer (h, hu, hv) in structure-of-arrays
/// layout, one contiguous padded array per component, plus bathymetry b.
struct State {
  int M = 0;
  std::vector<Field> h, hu, hv;
  Field b;

  State() = default;
  State(const LayerSystem &sys, const Grid &g);

  NodeState node(const LayerSystem &sys, const Grid &g, int i, int j) const;
  void set_node(const Grid &g, int i, int j, const NodeState &n);

  /// Extends interior values into the ghost margin: periodic wrap (period
  /// N - 1, both endpoints stored) or constant extension at outflow sides.
  void fill_ghosts(const Grid &g);
};

/// Applies the boundary extension to a single padded field.
void fill_ghosts_scalar(const Grid &g, Field &f);

/// Velocity recovery hu/h guarded by the depth floor.
double velocity_from(double h, double hm, int layer, int i, int j);

/// Lake-at-rest constructor: plain surface levels C_m = sum_{k>=m} h_k + b
/// must be strictly decreasing in m and exceed b everywhere.  Velocities are
/// zero.  Throws std::invalid_argument on an infeasible configuration.
State lake_at_rest(const LayerSystem &sys, const Grid &g, const Field &b,
                   const std::vector<double> &surface_levels);

} // namespace mlswe
