#pragma once

#include <vector>

#include "gbh/grid.hpp"

namespace gbh {

/// One analytic eigenpair of -Laplace with homogeneous Dirichlet data on the
/// controlled edge and insulation elsewhere:
///   phi_{m,n}(x,y) = norm_const * sin((m-1/2) pi x / Lx) * cos(n pi y / Ly)
///   lambda_{m,n}   = ((m-1/2) pi / Lx)^2 + (n pi / Ly)^2
/// The 1-D case drops the cosine factor (n = 0 only).
struct EigenMode {
  int m = 1;          ///< longitudinal index, >= 1
  int n = 0;          ///< transverse index, >= 0
  double lambda = 0;  ///< eigenvalue
  double norm_const = 1;
  int rank = 0;       ///< position in the nondecreasing global ordering
};

/// First `count` modes in nondecreasing-lambda order; ties broken by (n,m)
/// lexicographic so the ordering is deterministic.
std::vector<EigenMode> enumerate_modes(const DomainSpec& d, int count);

/// Grid samples of the normalized eigenfunction (unit L2 norm analytically).
Field eval_eigenfunction(const EigenMode& mode, const Grid& g);

/// Trace of the outward normal derivative on the controlled edge x = 0,
/// i.e. -d(phi)/dx at x = 0.
BoundaryTrace normal_derivative_trace(const EigenMode& mode, const Grid& g);

/// Relative defect ||(-Lap_h phi) - lambda phi|| / ||phi|| of the 5-point
/// discrete Laplacian against the analytic eigenvalue (0 for a zero field).
double eigen_residual(const EigenMode& mode, const Grid& g);

/// Gram matrix G_jk of the normal-derivative traces on the controlled edge,
/// row-major N x N.
std::vector<double> trace_gram(const std::vector<EigenMode>& modes, const Grid& g);

/// 2-norm condition number of a small dense symmetric matrix (row-major).
double gram_condition(const std::vector<double>& gram, int n);

}  // namespace gbh
