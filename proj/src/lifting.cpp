#include "gbh/lifting.hpp"

#include <cmath>
#include <vector>

#include "gbh/errors.hpp"
#include "gbh/memory_pde.hpp"

namespace gbh {

EllipticSolver::EllipticSolver(const Grid& g, double alpha, double c)
    : g_(&g), alpha_(alpha), c_(c) {
  const int n = g.dof_count();
  const double ihx2 = 1.0 / (g.hx() * g.hx());
  const double ihy2 = (g.dim() == 2) ? 1.0 / (g.hy() * g.hy()) : 0.0;
  const int nxt = g.nxt(), nyt = g.nyt();

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(n) * 5);
  for (int dof = 0; dof < n; ++dof) {
    auto [i, j] = g.node_of(dof);
    double diag = c;
    // x direction: Dirichlet data at i-1 == 0 goes to the right-hand side,
    // the insulated end mirrors its inner neighbor.
    if (i == nxt - 1) {
      diag += 2.0 * alpha * ihx2;
      trip.emplace_back(dof, g.dof_of(i - 1, j), -2.0 * alpha * ihx2);
    } else {
      diag += 2.0 * alpha * ihx2;
      if (i - 1 >= 1) trip.emplace_back(dof, g.dof_of(i - 1, j), -alpha * ihx2);
      trip.emplace_back(dof, g.dof_of(i + 1, j), -alpha * ihx2);
    }
    if (g.dim() == 2) {
      if (j == 0) {
        diag += 2.0 * alpha * ihy2;
        trip.emplace_back(dof, g.dof_of(i, 1), -2.0 * alpha * ihy2);
      } else if (j == nyt - 1) {
        diag += 2.0 * alpha * ihy2;
        trip.emplace_back(dof, g.dof_of(i, j - 1), -2.0 * alpha * ihy2);
      } else {
        diag += 2.0 * alpha * ihy2;
        trip.emplace_back(dof, g.dof_of(i, j - 1), -alpha * ihy2);
        trip.emplace_back(dof, g.dof_of(i, j + 1), -alpha * ihy2);
      }
    }
    trip.emplace_back(dof, dof, diag);
  }
  A_.resize(n, n);
  A_.setFromTriplets(trip.begin(), trip.end());
  A_.makeCompressed();
  lu_.compute(A_);
  if (lu_.info() != Eigen::Success)
    throw SolverSingular("SolverSingular: elliptic operator factorization failed");
}

Field EllipticSolver::solve(const Field& rhs, const BoundaryTrace& g1) const {
  const Grid& g = *g_;
  const int n = g.dof_count();
  const double ihx2 = 1.0 / (g.hx() * g.hx());
  Eigen::VectorXd b(n);
  for (int dof = 0; dof < n; ++dof) {
    auto [i, j] = g.node_of(dof);
    double v = rhs.at(i, j);
    if (i == 1) v += alpha_ * ihx2 * g1.values[j];
    b(dof) = v;
  }
  Eigen::VectorXd x = lu_.solve(b);
  if (lu_.info() != Eigen::Success)
    throw SolverSingular("SolverSingular: elliptic solve failed");
  Field out = g.make_field();
  for (int dof = 0; dof < n; ++dof) {
    auto [i, j] = g.node_of(dof);
    out.at(i, j) = x(dof);
  }
  for (int j = 0; j < g.nyt(); ++j) out.at(0, j) = g1.values[j];
  return out;
}

DirichletMap::DirichletMap(const Grid& g, double eta, double k)
    : eta_(eta), k_(k), zero_rhs_(g.make_field()), solver_(g, eta, k) {
  if (!(k > 0.0)) throw SolverSingular("SolverSingular: lift gain k must be positive");
}

Field DirichletMap::apply(const BoundaryTrace& trace) const {
  return solver_.solve(zero_rhs_, trace);
}

std::vector<double> verify_duality(const Controller& c, double k, double eta, const Grid& g) {
  const int N = c.N();
  DirichletMap D(g, eta, k);
  std::vector<double> M(static_cast<size_t>(N) * N, 0.0);
  for (int j = 0; j < N; ++j) {
    Field psi = D.apply(c.actuator(j));
    for (int i = 0; i < N; ++i)
      M[static_cast<size_t>(i) * N + j] = g.quad_inner(psi, c.eigenfield(i));
  }
  return M;
}

std::vector<Field> s_diagnostic(const Controller& c, const std::vector<Field>& z_series,
                                double dt, const PhysicalParams& p) {
  if (z_series.size() < 2)
    throw InsufficientSamples("InsufficientSamples: need at least two time samples");
  const Grid& g = c.grid();
  const ControllerSpec& spec = c.spec();
  DirichletMap D(g, p.eta, spec.k);

  const double c0 = spec.omega + spec.k - p.beta * p.gamma;
  const double kk = spec.k / p.eta;

  std::vector<Field> out;
  out.reserve(z_series.size() - 1);
  Field conv = g.make_field();  // exponential memory of D u
  Field du_prev;
  const double decay = std::exp(-p.delta * dt);
  const double wmid = 0.5 * dt * std::exp(-p.delta * dt / 2.0);

  for (size_t n = 0; n < z_series.size(); ++n) {
    Field du = D.apply(c.feedback_trace_z(z_series[n]));
    if (n > 0) {
      for (size_t q = 0; q < conv.size(); ++q)
        conv.v[q] = decay * conv.v[q] + wmid * (du.v[q] + du_prev.v[q]);
      Field S = g.make_field();
      for (size_t q = 0; q < S.size(); ++q)
        S.v[q] = c0 * du.v[q] - (du.v[q] - du_prev.v[q]) / dt + kk * conv.v[q];
      out.push_back(std::move(S));
    }
    du_prev = std::move(du);
  }
  return out;
}

}  // namespace gbh
