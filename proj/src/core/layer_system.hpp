#pragma once

#include <span>
#include <vector>

namespace mlswe {

/// Physical configuration of the layered system: layer count M, the strictly
/// increasing densities rho_1 < ... < rho_M, and the gravitational constant g.
/// Every other module is parameterized by one of these.
class LayerSystem {
public:
  LayerSystem(std::vector<double> densities, double gravity);

  int layers() const { return static_cast<int>(rho_.size()); }
  double g() const { return g_; }
  double rho(int m) const { return rho_[m - 1]; } // 1-based, matching h_m

  /// rho_k / rho_m for 1 <= k, m <= M.
  double density_ratio(int k, int m) const { return rho_[k - 1] / rho_[m - 1]; }

  std::span<const double> densities() const { return rho_; }

private:
  std::vector<double> rho_;
  double g_;
};

/// Convenience builders for the common two- and three-layer setups that are
/// specified through density ratios r_km and the bottom-layer density.
LayerSystem make_two_layer(double r12, double rho2, double g);
LayerSystem make_three_layer(double r13, double r23, double rho3, double g);

} // namespace mlswe
