#include "gbh/memory_pde.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>

#include "gbh/errors.hpp"
#include "gbh/kernels.hpp"

namespace gbh {
namespace {

constexpr double kOverflowLimit = 1e15;
constexpr double kGrowthLimit = 1e3;

double powi(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

}  // namespace

Field discrete_laplacian(const Field& w, const Grid& g, const BoundaryTrace& gamma1_values) {
  Field wb = w;
  for (int j = 0; j < g.nyt(); ++j) wb.at(0, j) = gamma1_values.values[j];
  Field lap = g.make_field();
  const double ihx2 = 1.0 / (g.hx() * g.hx());
  const double ihy2 = (g.dim() == 2) ? 1.0 / (g.hy() * g.hy()) : 0.0;
  kernels::active().laplacian2d(wb.data(), lap.data(), g.nxt(), g.nyt(), ihx2, ihy2);
  return lap;
}

void memory_update(Field& mem, const Field& lap_prev, const Field& lap_next, double dt,
                   double delta) {
  const double decay = std::exp(-delta * dt);
  const double c = 0.5 * dt * std::exp(-delta * dt / 2.0);
  kernels::active().memupdate(mem.data(), lap_prev.data(), lap_next.data(), decay, c,
                              mem.size());
}

Field gradient_x(const Field& w, const Grid& g) {
  Field out = g.make_field();
  const double ih2 = 1.0 / (2.0 * g.hx());
  const int nxt = g.nxt(), nyt = g.nyt();
  for (int j = 0; j < nyt; ++j) {
    out.at(0, j) = (-3.0 * w.at(0, j) + 4.0 * w.at(1, j) - w.at(2, j)) * ih2;
    for (int i = 1; i < nxt - 1; ++i) out.at(i, j) = (w.at(i + 1, j) - w.at(i - 1, j)) * ih2;
    out.at(nxt - 1, j) =
        (3.0 * w.at(nxt - 1, j) - 4.0 * w.at(nxt - 2, j) + w.at(nxt - 3, j)) * ih2;
  }
  return out;
}

Field gradient_y(const Field& w, const Grid& g) {
  Field out = g.make_field();
  if (g.dim() != 2) return out;
  const double ih2 = 1.0 / (2.0 * g.hy());
  const int nxt = g.nxt(), nyt = g.nyt();
  for (int i = 0; i < nxt; ++i) {
    out.at(i, 0) = (-3.0 * w.at(i, 0) + 4.0 * w.at(i, 1) - w.at(i, 2)) * ih2;
    for (int j = 1; j < nyt - 1; ++j) out.at(i, j) = (w.at(i, j + 1) - w.at(i, j - 1)) * ih2;
    out.at(i, nyt - 1) =
        (3.0 * w.at(i, nyt - 1) - 4.0 * w.at(i, nyt - 2) + w.at(i, nyt - 3)) * ih2;
  }
  return out;
}

EnergyNorms energy_norms(const Field& w, const Grid& g) {
  EnergyNorms n;
  double l2sq = g.quad_inner(w, w);
  Field gx = gradient_x(w, g);
  Field gy = gradient_y(w, g);
  double semi = g.quad_inner(gx, gx) + g.quad_inner(gy, gy);
  n.l2 = std::sqrt(l2sq);
  n.h1 = std::sqrt(l2sq + semi);
  return n;
}

Field nonlinear_F(const Field& w_shifted, const Field* y_inf, const Field* lap_y_inf, double t,
                  const PhysicalParams& p, double omega, const Grid& g) {
  const int kap = p.kappa;
  const double e1 = std::exp(-omega * kap * t);
  const double e2 = std::exp(-2.0 * omega * kap * t);
  const double ew = std::exp(omega * t);

  // full shifted state s = w + e^{omega t} y_inf
  Field s = w_shifted;
  if (y_inf)
    for (size_t q = 0; q < s.size(); ++q) s.v[q] += ew * y_inf->v[q];
  if (kernels::active().amax(s.data(), s.size()) > kOverflowLimit)
    throw Overflow("Overflow: field magnitude exceeds 1e15");

  Field gx = gradient_x(s, g);
  Field gy = gradient_y(s, g);
  Field out = g.make_field();
  for (size_t q = 0; q < out.size(); ++q) {
    double sv = s.v[q];
    double sk = powi(sv, kap);
    double conv = -p.a * e1 * sk * (gx.v[q] + gy.v[q]);
    double react = -p.beta * e2 * sk * sk * sv + p.beta * (1.0 + p.gamma) * e1 * sk * sv;
    out.v[q] = conv + react;
  }
  if (y_inf) {
    Field gxi = gradient_x(*y_inf, g);
    Field gyi = gradient_y(*y_inf, g);
    const double ed = std::exp((omega - p.delta) * t) / p.delta;
    for (size_t q = 0; q < out.size(); ++q) {
      double yv = y_inf->v[q];
      double yk = powi(yv, kap);
      out.v[q] += p.a * ew * yk * (gxi.v[q] + gyi.v[q]);
      out.v[q] += p.beta * ew * yk * yk * yv - p.beta * (1.0 + p.gamma) * ew * yk * yv;
      out.v[q] -= ed * lap_y_inf->v[q];
    }
  }
  for (int j = 0; j < g.nyt(); ++j) out.at(0, j) = 0.0;
  if (kernels::active().amax(out.data(), out.size()) > kOverflowLimit)
    throw Overflow("Overflow: nonlinear term exceeds 1e15");
  return out;
}

Simulator::Simulator(const Grid& g, const PhysicalParams& p, const Controller* ctrl,
                     SimOptions opt, const Field* y_inf, const Field* source)
    : g_(&g), p_(p), ctrl_(ctrl), opt_(opt), y_inf_(y_inf), source_(source) {
  theta_ = (opt.scheme == SimOptions::Scheme::CN) ? 0.5 : 1.0;
  st_.shifted = opt.shifted;
  c_r_ = opt.shifted ? (opt.omega - p.beta * p.gamma) : -p.beta * p.gamma;
  // implicit operator: (1 + dt theta c_r^-) I + dt theta eta (-Lap)
  implicit_ = std::make_unique<EllipticSolver>(g, opt.dt * theta_ * p.eta,
                                               1.0 - opt.dt * theta_ * c_r_);
  if (y_inf_) {
    BoundaryTrace zero = g.make_trace();
    lap_y_inf_ = discrete_laplacian(*y_inf_, g, zero);
  }
}

BoundaryTrace Simulator::feedback(const Field& w) const {
  if (!ctrl_) return g_->make_trace();
  return ctrl_->feedback_trace(w);
}

void Simulator::refresh_boundary_and_lap() {
  for (int j = 0; j < g_->nyt(); ++j) st_.w.at(0, j) = u_.values[j];
  lap_ = discrete_laplacian(st_.w, *g_, u_);
}

void Simulator::init(const Field& w0) {
  st_.w = w0;
  st_.mem = g_->make_field();
  st_.t = 0.0;
  st_.shifted = opt_.shifted;
  mem_prev_ = g_->make_field();
  u_ = feedback(st_.w);
  u_prev_ = u_;
  refresh_boundary_and_lap();
  if (opt_.nonlinear)
    f_prev_ = nonlinear_F(st_.w, y_inf_, y_inf_ ? &lap_y_inf_ : nullptr, 0.0, p_, opt_.omega,
                          *g_);
  first_ = true;
}

void Simulator::step() {
  const Grid& g = *g_;
  const double dt = opt_.dt;
  const auto& K = kernels::active();

  // stability ceiling: reaction slope and convective transport
  double react_slope = std::fabs(c_r_);
  if (opt_.nonlinear) {
    double smax = K.amax(st_.w.data(), st_.w.size());
    if (y_inf_) smax += std::exp(opt_.omega * st_.t) * K.amax(y_inf_->data(), y_inf_->size());
    double sk = powi(smax, p_.kappa);
    react_slope += p_.beta * ((2 * p_.kappa + 1) * sk * sk +
                              (p_.kappa + 1) * (1.0 + p_.gamma) * sk + p_.gamma);
    double conv_ceiling = g.hx() / (2.0 * p_.a * std::max(sk, 1e-30));
    if (dt > conv_ceiling)
      throw UnstableStep("UnstableStep: dt exceeds the convective ceiling " +
                         std::to_string(conv_ceiling));
  }
  if (react_slope > 0.0 && dt > 0.1 / react_slope)
    throw UnstableStep("UnstableStep: dt exceeds the reaction ceiling " +
                       std::to_string(0.1 / react_slope));

  const double norm_before = g.quad_norm(st_.w);

  // explicit terms at the half step: memory (two-step extrapolation), source,
  // nonlinear remainder
  Field expl = g.make_field();
  if (!opt_.memory_off) {
    if (theta_ == 0.5 && !first_) {
      for (size_t q = 0; q < expl.size(); ++q)
        expl.v[q] += 1.5 * st_.mem.v[q] - 0.5 * mem_prev_.v[q];
    } else {
      for (size_t q = 0; q < expl.size(); ++q) expl.v[q] += st_.mem.v[q];
    }
  }
  if (source_)
    for (size_t q = 0; q < expl.size(); ++q) expl.v[q] += source_->v[q];
  Field f_now;
  if (opt_.nonlinear) {
    f_now = nonlinear_F(st_.w, y_inf_, y_inf_ ? &lap_y_inf_ : nullptr, st_.t, p_, opt_.omega, g);
    if (theta_ == 0.5 && !first_) {
      for (size_t q = 0; q < expl.size(); ++q)
        expl.v[q] += 1.5 * f_now.v[q] - 0.5 * f_prev_.v[q];
    } else {
      for (size_t q = 0; q < expl.size(); ++q) expl.v[q] += f_now.v[q];
    }
  }

  // right-hand side: w_n + dt (1-theta)(eta lap_n + c_r w_n) + dt * explicit
  Field rhs = g.make_field();
  const double ex = dt * (1.0 - theta_);
  for (size_t q = 0; q < rhs.size(); ++q)
    rhs.v[q] = st_.w.v[q] + ex * (p_.eta * lap_.v[q] + c_r_ * st_.w.v[q]) + dt * expl.v[q];

  // boundary values for the implicit stage: linear extrapolation of the
  // feedback (first step uses the current trace)
  BoundaryTrace u_star = u_;
  if (theta_ == 0.5 && !first_)
    for (size_t q = 0; q < u_star.values.size(); ++q)
      u_star.values[q] = 2.0 * u_.values[q] - u_prev_.values[q];

  Field w_next = implicit_->solve(rhs, u_star);

  if (K.amax(w_next.data(), w_next.size()) > kOverflowLimit)
    throw Overflow("Overflow: state magnitude exceeds 1e15");
  double norm_after = g.quad_norm(w_next);
  if (norm_after > kGrowthLimit * std::max(norm_before, 1e-300))
    throw UnstableStep("UnstableStep: norm grew by more than 1e3 in one step");

  // re-anchor the boundary to the feedback of the new state, then advance the
  // memory with begin/end Laplacians (each under its own boundary data)
  u_prev_ = u_;
  u_ = feedback(w_next);
  mem_prev_ = st_.mem;
  st_.w = std::move(w_next);
  Field lap_prev = std::move(lap_);
  refresh_boundary_and_lap();
  if (!opt_.memory_off) memory_update(st_.mem, lap_prev, lap_, dt, p_.delta);
  if (opt_.nonlinear) f_prev_ = std::move(f_now);
  st_.t += dt;
  first_ = false;
}

double Simulator::control_energy() const { return u_.norm_sq(); }

Field steady_operator(const Field& y, const PhysicalParams& p, const Grid& g) {
  BoundaryTrace zero = g.make_trace();
  Field lap = discrete_laplacian(y, g, zero);
  Field yb = y;
  for (int j = 0; j < g.nyt(); ++j) yb.at(0, j) = 0.0;
  Field gx = gradient_x(yb, g);
  Field gy = gradient_y(yb, g);
  const double dcoef = p.eta + 1.0 / p.delta;
  Field out = g.make_field();
  for (size_t q = 0; q < out.size(); ++q) {
    double yv = yb.v[q];
    double yk = powi(yv, p.kappa);
    out.v[q] = -dcoef * lap.v[q] + p.a * yk * (gx.v[q] + gy.v[q]) +
               p.beta * yv * (yk - 1.0) * (yk - p.gamma);
  }
  for (int j = 0; j < g.nyt(); ++j) out.at(0, j) = 0.0;
  return out;
}

SteadyState solve_steady_state(const Field& f_s, const PhysicalParams& p, const Grid& g) {
  const int n = g.dof_count();
  const double ihx2 = 1.0 / (g.hx() * g.hx());
  const double ihy2 = (g.dim() == 2) ? 1.0 / (g.hy() * g.hy()) : 0.0;
  const double ih2x = 1.0 / (2.0 * g.hx());
  const double ih2y = (g.dim() == 2) ? 1.0 / (2.0 * g.hy()) : 0.0;
  const double dcoef = p.eta + 1.0 / p.delta;
  const int nxt = g.nxt(), nyt = g.nyt();

  Field y = g.make_field();

  auto residual = [&](const Field& yy) {
    Field r = steady_operator(yy, p, g);
    for (size_t q = 0; q < r.size(); ++q) r.v[q] -= f_s.v[q];
    for (int j = 0; j < nyt; ++j) r.at(0, j) = 0.0;
    return r;
  };

  auto weighted_norm = [&](const Field& r) { return g.quad_norm(r); };

  Field r = residual(y);
  double rn = weighted_norm(r);
  const double tol = 1e-10;
  int it = 0;
  for (; it < 50 && rn > tol; ++it) {
    // Jacobian: diffusion stencil + convection (product rule) + reaction slope
    Field yb = y;
    for (int j = 0; j < nyt; ++j) yb.at(0, j) = 0.0;
    Field gx = gradient_x(yb, g);
    Field gy = gradient_y(yb, g);

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(n) * 8);
    auto add = [&](int row, int i, int j, double v) {
      int col = g.dof_of(i, j);
      if (col >= 0) trip.emplace_back(row, col, v);  // Dirichlet neighbors drop out
    };
    for (int dof = 0; dof < n; ++dof) {
      auto [i, j] = g.node_of(dof);
      double yv = yb.at(i, j);
      double yk = powi(yv, p.kappa);
      double ykm1 = (p.kappa >= 1) ? powi(yv, p.kappa - 1) : 0.0;

      // diffusion part: dcoef * (-Lap)
      double diag = 0.0;
      if (i == nxt - 1) {
        diag += 2.0 * dcoef * ihx2;
        add(dof, i - 1, j, -2.0 * dcoef * ihx2);
      } else {
        diag += 2.0 * dcoef * ihx2;
        add(dof, i - 1, j, -dcoef * ihx2);
        add(dof, i + 1, j, -dcoef * ihx2);
      }
      if (g.dim() == 2) {
        diag += 2.0 * dcoef * ihy2;
        if (j == 0) add(dof, i, 1, -2.0 * dcoef * ihy2);
        else if (j == nyt - 1) add(dof, i, j - 1, -2.0 * dcoef * ihy2);
        else {
          add(dof, i, j - 1, -dcoef * ihy2);
          add(dof, i, j + 1, -dcoef * ihy2);
        }
      }

      // convection: a kappa y^{k-1} (gx+gy) on the diagonal plus a y^k D
      diag += p.a * p.kappa * ykm1 * (gx.at(i, j) + gy.at(i, j));
      double ayk = p.a * yk;
      if (i == 0) {
        // not a dof
      } else if (i == nxt - 1) {
        diag += ayk * 3.0 * ih2x;
        add(dof, i - 1, j, -ayk * 4.0 * ih2x);
        add(dof, i - 2, j, ayk * ih2x);
      } else {
        add(dof, i + 1, j, ayk * ih2x);
        add(dof, i - 1, j, -ayk * ih2x);
      }
      if (g.dim() == 2) {
        if (j == 0) {
          diag += -ayk * 3.0 * ih2y;
          add(dof, i, 1, ayk * 4.0 * ih2y);
          add(dof, i, 2, -ayk * ih2y);
        } else if (j == nyt - 1) {
          diag += ayk * 3.0 * ih2y;
          add(dof, i, j - 1, -ayk * 4.0 * ih2y);
          add(dof, i, j - 2, ayk * ih2y);
        } else {
          add(dof, i, j + 1, ayk * ih2y);
          add(dof, i, j - 1, -ayk * ih2y);
        }
      }

      // reaction slope: beta ((2k+1) y^{2k} - (k+1)(1+gamma) y^k + gamma)
      diag += p.beta * ((2 * p.kappa + 1) * yk * yk -
                        (p.kappa + 1) * (1.0 + p.gamma) * yk + p.gamma);
      trip.emplace_back(dof, dof, diag);
    }

    Eigen::SparseMatrix<double> J(n, n);
    J.setFromTriplets(trip.begin(), trip.end());
    J.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(J);
    if (lu.info() != Eigen::Success)
      throw NewtonDiverged("NewtonDiverged: singular Jacobian");

    Eigen::VectorXd b(n);
    for (int dof = 0; dof < n; ++dof) {
      auto [ii, jj] = g.node_of(dof);
      b(dof) = -r.at(ii, jj);
    }
    Eigen::VectorXd dy = lu.solve(b);

    // damped update: halve until the residual decreases
    double s = 1.0;
    Field y_try;
    double rn_try = 0.0;
    Field r_try;
    bool accepted = false;
    for (int half = 0; half < 30; ++half) {
      y_try = y;
      for (int dof = 0; dof < n; ++dof) {
        auto [ii, jj] = g.node_of(dof);
        y_try.at(ii, jj) += s * dy(dof);
      }
      r_try = residual(y_try);
      rn_try = weighted_norm(r_try);
      if (rn_try < rn || rn_try <= tol) {
        accepted = true;
        break;
      }
      s *= 0.5;
    }
    if (!accepted) throw NewtonDiverged("NewtonDiverged: damping failed to reduce the residual");
    y = std::move(y_try);
    r = std::move(r_try);
    rn = rn_try;
    if (!std::isfinite(rn)) throw NewtonDiverged("NewtonDiverged: residual is not finite");
  }
  if (rn > tol) throw NewtonDiverged("NewtonDiverged: no convergence in 50 iterations");
  return SteadyState{std::move(y), rn, it};
}

}  // namespace gbh
