#include "core/grid.hpp"

namespace mlswe {

Grid::Grid(int n1, int n2, double x1lo, double x1hi, double x2lo, double x2hi,
           Boundary bc1, Boundary bc2, int ghosts)
    : n1_(n1), n2_(n2), ng_(ghosts), x1lo_(x1lo), x1hi_(x1hi), x2lo_(x2lo),
      x2hi_(x2hi), bc1_(bc1), bc2_(bc2) {
  if (n1_ < 2)
    throw std::invalid_argument("Grid: n1 must be at least 2");
  if (n2_ < 1)
    throw std::invalid_argument("Grid: n2 must be at least 1");
  if (!(x1hi_ > x1lo_) || (n2_ > 1 && !(x2hi_ > x2lo_)))
    throw std::invalid_argument("Grid: domain extents must be increasing");
  dx1_ = (x1hi_ - x1lo_) / (n1_ - 1);
  dx2_ = (n2_ > 1) ? (x2hi_ - x2lo_) / (n2_ - 1) : dx1_;
}

} // namespace mlswe
