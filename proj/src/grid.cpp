#include "gbh/grid.hpp"

#include <cmath>

#include "gbh/kernels.hpp"

namespace gbh {

double BoundaryTrace::inner(const BoundaryTrace& other) const {
  double s = 0.0;
  for (size_t i = 0; i < values.size(); ++i) s += weights[i] * values[i] * other.values[i];
  return s;
}

Grid::Grid(const DomainSpec& d, int nx, int ny) : dom_(d), nx_(nx), ny_(ny) {
  nxt_ = nx_ + 2;
  hx_ = d.Lx / (nx_ + 1);
  if (d.dim == 2) {
    nyt_ = ny_ + 2;
    hy_ = d.Ly / (ny_ + 1);
  } else {
    ny_ = 0;
    nyt_ = 1;
    hy_ = 0.0;
  }

  // Tensor trapezoid weights over the closed rectangle.
  wx_.assign(nxt_, hx_);
  wx_.front() = wx_.back() = 0.5 * hx_;
  if (d.dim == 2) {
    wy_.assign(nyt_, hy_);
    wy_.front() = wy_.back() = 0.5 * hy_;
  } else {
    wy_.assign(1, 1.0);
  }
  w_.resize(node_count());
  for (int i = 0; i < nxt_; ++i)
    for (int j = 0; j < nyt_; ++j) w_[static_cast<size_t>(i) * nyt_ + j] = wx_[i] * wy_[j];

  // Edge quadrature on the controlled boundary: trapezoid along y, a single
  // unit point mass in 1-D.
  wg1_ = (d.dim == 2) ? wy_ : std::vector<double>{1.0};

  dof_of_node_.assign(node_count(), -1);
  node_of_dof_.clear();
  for (int i = 1; i < nxt_; ++i)
    for (int j = 0; j < nyt_; ++j) {
      dof_of_node_[static_cast<size_t>(i) * nyt_ + j] = static_cast<int>(node_of_dof_.size());
      node_of_dof_.emplace_back(i, j);
    }
  n_gamma1_ = nyt_;
}

NodeClass Grid::node_class(int i, int j) const {
  if (i == 0) return NodeClass::Gamma1;  // corners belong to the controlled edge
  if (i == nxt_ - 1) return NodeClass::Gamma2;
  if (dim() == 2 && (j == 0 || j == nyt_ - 1)) return NodeClass::Gamma2;
  return NodeClass::Interior;
}

BoundaryTrace Grid::make_trace() const {
  BoundaryTrace t;
  t.values.assign(wg1_.size(), 0.0);
  t.weights = wg1_;
  return t;
}

double Grid::quad_inner(const Field& a, const Field& b) const {
  return kernels::active().wdot(a.data(), b.data(), w_.data(), a.size());
}

double Grid::quad_norm(const Field& a) const { return std::sqrt(quad_inner(a, a)); }

Grid build_grid(const DomainSpec& d, int nx, int ny) {
  if (nx < 3 || (d.dim == 2 && ny < 3))
    throw TooCoarse("TooCoarse: need at least 3 interior nodes per axis");
  return Grid(d, nx, ny);
}

}  // namespace gbh
