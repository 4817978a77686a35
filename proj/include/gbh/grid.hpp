#pragma once

#include <cstddef>
#include <vector>

#include "gbh/params.hpp"

namespace gbh {

enum class NodeClass : unsigned char { Interior, Gamma1, Gamma2 };

/// Scalar field sampled on every grid node (boundary nodes included).
/// Storage is x-major: index(i,j) = i*nyt + j.
struct Field {
  std::vector<double> v;
  int nxt = 0;  ///< node count along x (nx interior + 2 boundary)
  int nyt = 0;  ///< node count along y (1 in the 1-D degenerate case)

  Field() = default;
  Field(int nxt_, int nyt_) : v(static_cast<size_t>(nxt_) * nyt_, 0.0), nxt(nxt_), nyt(nyt_) {}
  double& at(int i, int j) { return v[static_cast<size_t>(i) * nyt + j]; }
  double at(int i, int j) const { return v[static_cast<size_t>(i) * nyt + j]; }
  size_t size() const { return v.size(); }
  double* data() { return v.data(); }
  const double* data() const { return v.data(); }
};

/// Dirichlet-edge samples with their quadrature weights. The inner product
/// (g,h) = sum_i w_i g_i h_i discretizes the boundary line integral
/// (a point evaluation in the 1-D degenerate case).
struct BoundaryTrace {
  std::vector<double> values;
  std::vector<double> weights;

  double inner(const BoundaryTrace& other) const;
  double norm_sq() const { return inner(*this); }
};

/// Uniform tensor grid on the rectangle. Interior spacing hx = Lx/(nx+1);
/// the x = 0 edge (including both corners) is the controlled boundary, all
/// remaining boundary is insulated.
class Grid {
 public:
  Grid(const DomainSpec& d, int nx, int ny);

  const DomainSpec& domain() const { return dom_; }
  int dim() const { return dom_.dim; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int nxt() const { return nxt_; }
  int nyt() const { return nyt_; }
  double hx() const { return hx_; }
  double hy() const { return hy_; }
  double x(int i) const { return i * hx_; }
  double y(int j) const { return dim() == 2 ? j * hy_ : 0.0; }

  NodeClass node_class(int i, int j) const;
  size_t node_count() const { return static_cast<size_t>(nxt_) * nyt_; }

  /// Quadrature weight of node (i,j) for integrals over the closed rectangle.
  double weight(int i, int j) const { return wx_[i] * wy_[j]; }
  const std::vector<double>& weight_table() const { return w_; }

  /// Trapezoid weights along the controlled edge (length nyt).
  const std::vector<double>& gamma1_weights() const { return wg1_; }

  Field make_field() const { return Field(nxt_, nyt_); }
  BoundaryTrace make_trace() const;

  /// Degrees of freedom are all nodes except the Dirichlet edge.
  int dof_count() const { return static_cast<int>(dof_of_node_.size()) - n_gamma1_; }
  int dof_of(int i, int j) const { return dof_of_node_[static_cast<size_t>(i) * nyt_ + j]; }
  std::pair<int, int> node_of(int dof) const { return node_of_dof_[dof]; }

  double quad_inner(const Field& a, const Field& b) const;
  double quad_norm(const Field& a) const;

 private:
  DomainSpec dom_;
  int nx_, ny_, nxt_, nyt_;
  double hx_, hy_;
  std::vector<double> wx_, wy_, w_, wg1_;
  std::vector<int> dof_of_node_;
  std::vector<std::pair<int, int>> node_of_dof_;
  int n_gamma1_ = 0;
};

/// Builds the uniform grid; requires at least 3 interior nodes per active axis.
Grid build_grid(const DomainSpec& d, int nx, int ny);

}  // namespace gbh
