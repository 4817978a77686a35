#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <memory>
#include <vector>

#include "gbh/controller.hpp"
#include "gbh/grid.hpp"

namespace gbh {

/// Direct sparse factorization of alpha*(-Lap_h) + c*I over the non-Dirichlet
/// nodes. Factored once, then reused for every solve (the elliptic lift and
/// the implicit half of the time stepper share this).
class EllipticSolver {
 public:
  EllipticSolver(const Grid& g, double alpha, double c);

  /// Solves with Dirichlet data `g1` on the controlled edge and volumetric
  /// right-hand side `rhs` (read at non-Dirichlet nodes). The returned field
  /// carries `g1` in its Dirichlet slots.
  Field solve(const Field& rhs, const BoundaryTrace& g1) const;

  double alpha() const { return alpha_; }
  double shift() const { return c_; }

 private:
  const Grid* g_;
  double alpha_, c_;
  Eigen::SparseMatrix<double> A_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
};

/// Solution operator of  -eta Lap psi + k psi = 0,  psi = u on the controlled
/// edge, insulated elsewhere.
class DirichletMap {
 public:
  DirichletMap(const Grid& g, double eta, double k);
  Field apply(const BoundaryTrace& trace) const;
  double k() const { return k_; }
  double eta() const { return eta_; }

 private:
  double eta_, k_;
  Field zero_rhs_;
  EllipticSolver solver_;
};

/// M_ij = (D Phi_j, phi_i)_{L2}; analytically -eta/(k + eta lambda_i) delta_ij.
/// Returned row-major N x N for inspection.
std::vector<double> verify_duality(const Controller& c, double k, double eta, const Grid& g);

/// Boundary-residue diagnostic along a trajectory of the lifted variable:
///   S(t) = (omega + k - beta gamma) D u - d/dt(D u) + (k/eta) conv(D u)
/// with u the lifted-form feedback of each sample and conv the exponential
/// memory of D u. Time derivative by backward difference, so the series
/// starts at the second sample. Throws InsufficientSamples for < 2 samples.
std::vector<Field> s_diagnostic(const Controller& c, const std::vector<Field>& z_series,
                                double dt, const PhysicalParams& p);

}  // namespace gbh
