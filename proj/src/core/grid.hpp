#pragma once

#include <cstddef>
#include <stdexcept>

namespace mlswe {

enum class Boundary { periodic, outflow };

/// Uniform computational lattice with N1 x N2 nodes including both endpoints,
/// dx = (hi - lo)/(N - 1).  N2 == 1 marks a 1D run.  Fields are stored padded
/// with `ghosts` extra nodes per side (per direction that is active).
class Grid {
public:
  Grid() = default;
  Grid(int n1, int n2, double x1lo, double x1hi, double x2lo, double x2hi,
       Boundary bc1, Boundary bc2, int ghosts = 3);

  int n1() const { return n1_; }
  int n2() const { return n2_; }
  int ghosts() const { return ng_; }
  bool one_dim() const { return n2_ == 1; }

  double x1lo() const { return x1lo_; }
  double x1hi() const { return x1hi_; }
  double x2lo() const { return x2lo_; }
  double x2hi() const { return x2hi_; }
  double dx1() const { return dx1_; }
  double dx2() const { return dx2_; }
  Boundary bc1() const { return bc1_; }
  Boundary bc2() const { return bc2_; }

  double x1(int i) const { return x1lo_ + i * dx1_; }
  double x2(int j) const { return one_dim() ? x2lo_ : x2lo_ + j * dx2_; }

  /// Padded extents and linear index of interior node (i, j); i in
  /// [-ng, n1-1+ng], j likewise (j = 0 only when 1D).
  int span1() const { return n1_ + 2 * ng_; }
  int span2() const { return one_dim() ? 1 : n2_ + 2 * ng_; }
  std::size_t size() const {
    return static_cast<std::size_t>(span1()) * span2();
  }
  std::size_t idx(int i, int j) const {
    const int jj = one_dim() ? 0 : j + ng_;
    return static_cast<std::size_t>(jj) * span1() + (i + ng_);
  }

  /// Measure of one node's cell (dx1 in 1D, dx1*dx2 in 2D).
  double cell_measure() const { return one_dim() ? dx1_ : dx1_ * dx2_; }

  /// Node counts with the duplicated periodic endpoint excluded; sums over
  /// these ranges cover each physical cell exactly once.
  int n1_unique() const { return bc1_ == Boundary::periodic ? n1_ - 1 : n1_; }
  int n2_unique() const {
    return (!one_dim() && bc2_ == Boundary::periodic) ? n2_ - 1 : n2_;
  }

private:
  int n1_ = 0, n2_ = 0, ng_ = 3;
  double x1lo_ = 0, x1hi_ = 1, x2lo_ = 0, x2hi_ = 1;
  double dx1_ = 1, dx2_ = 1;
  Boundary bc1_ = Boundary::outflow, bc2_ = Boundary::outflow;
};

} // namespace mlswe
