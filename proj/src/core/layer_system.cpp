#include "core/layer_system.hpp"

#include <stdexcept>

namespace mlswe {

LayerSystem::LayerSystem(std::vector<double> densities, double gravity)
    : rho_(std::move(densities)), g_(gravity) {
  if (rho_.empty())
    throw std::invalid_argument("LayerSystem: need at least one layer");
  if (!(g_ > 0.0))
    throw std::invalid_argument("LayerSystem: gravity must be positive");
  double prev = 0.0;
  for (double r : rho_) {
    if (!(r > prev))
      throw std::invalid_argument(
          "LayerSystem: densities must satisfy 0 < rho_1 < ... < rho_M");
    prev = r;
  }
}

LayerSystem make_two_layer(double r12, double rho2, double g) {
  return LayerSystem({r12 * rho2, rho2}, g);
}

LayerSystem make_three_layer(double r13, double r23, double rho3, double g) {
  return LayerSystem({r13 * rho3, r23 * rho3, rho3}, g);
}

} // namespace mlswe
