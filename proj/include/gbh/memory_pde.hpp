#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "gbh/controller.hpp"
#include "gbh/grid.hpp"
#include "gbh/lifting.hpp"
#include "gbh/params.hpp"

namespace gbh {

/// 5-point Laplacian of a field whose Dirichlet slots are overwritten with
/// `gamma1_values`; insulated edges use second-order ghost reflection. The
/// output is zero on the Dirichlet edge.
Field discrete_laplacian(const Field& w, const Grid& g, const BoundaryTrace& gamma1_values);

/// One step of the exponential-kernel reduction of the memory convolution:
///   M <- exp(-delta dt) M + dt exp(-delta dt / 2) (lap_prev + lap_next) / 2.
void memory_update(Field& mem, const Field& lap_prev, const Field& lap_next, double dt,
                   double delta);

/// d/dx and d/dy by centered differences, one-sided (second order) on the
/// outermost node lines. The 1-D case has a zero y-derivative.
Field gradient_x(const Field& w, const Grid& g);
Field gradient_y(const Field& w, const Grid& g);

struct EnergyNorms {
  double l2 = 0.0;
  double h1 = 0.0;
};
EnergyNorms energy_norms(const Field& w, const Grid& g);

/// Nonlinear remainder of the rate-shifted fluctuation system (convection and
/// reaction differences around the equilibrium plus the equilibrium-memory
/// transient). `y_inf` and its cached Laplacian may be null for the zero
/// equilibrium. Throws Overflow when field values pass 1e15.
Field nonlinear_F(const Field& w_shifted, const Field* y_inf, const Field* lap_y_inf, double t,
                  const PhysicalParams& p, double omega, const Grid& g);

struct SimState {
  Field w;     ///< fluctuation (or its rate-shifted scaling)
  Field mem;   ///< memory accumulator, zero at t = 0
  double t = 0.0;
  bool shifted = false;
};

struct SimOptions {
  bool shifted = true;       ///< evolve the e^{omega t}-scaled variable
  bool nonlinear = false;    ///< include the nonlinear remainder
  bool memory_off = false;   ///< force M = 0 (memory-free reference runs)
  double omega = 0.0;        ///< rate used by the shifted variants
  double dt = 1e-3;
  enum class Scheme { CN, BE } scheme = Scheme::CN;
};

/// Time integrator for the linear principal system and the nonlinear
/// fluctuation system. Diffusion and the linear reaction are implicit
/// (factored once); memory, convection and the reaction remainder are
/// explicit; boundary values come from the controller feedback evaluated on
/// the running state (zero for open loop). A run owns its state; steps are
/// sequential.
class Simulator {
 public:
  Simulator(const Grid& g, const PhysicalParams& p, const Controller* ctrl, SimOptions opt,
            const Field* y_inf = nullptr, const Field* source = nullptr);

  void init(const Field& w0);
  void step();  ///< throws UnstableStep / Overflow

  const SimState& state() const { return st_; }
  const BoundaryTrace& control() const { return u_; }
  double control_energy() const;  ///< ||u||^2 on the controlled edge
  const Grid& grid() const { return *g_; }
  double omega() const { return opt_.omega; }

 private:
  BoundaryTrace feedback(const Field& w) const;
  void refresh_boundary_and_lap();

  const Grid* g_;
  PhysicalParams p_;
  const Controller* ctrl_;
  SimOptions opt_;
  const Field* y_inf_;
  const Field* source_;
  Field lap_y_inf_;
  double c_r_ = 0.0;  ///< linear reaction coefficient on the right-hand side
  std::unique_ptr<EllipticSolver> implicit_;
  SimState st_;
  Field lap_;        // Laplacian of the current state with its own boundary
  Field mem_prev_;   // previous memory field (explicit extrapolation)
  Field f_prev_;     // previous nonlinear remainder
  BoundaryTrace u_, u_prev_;
  bool first_ = true;
  double theta_ = 0.5;
};

struct SteadyState {
  Field y_inf;
  double residual = 0.0;
  int iterations = 0;
};

/// Damped Newton iteration on the stationary equation
///   (eta + 1/delta)(-Lap y) + a y^kappa (dx+dy) y + beta y (y^kappa - 1)(y^kappa - gamma) = f_s
/// with zero Dirichlet data on the controlled edge. Analytic Jacobian, step
/// halving, residual tolerance 1e-10, at most 50 iterations.
SteadyState solve_steady_state(const Field& f_s, const PhysicalParams& p, const Grid& g);

/// The same stationary operator applied to a field (manufactured-source and
/// residual checks).
Field steady_operator(const Field& y, const PhysicalParams& p, const Grid& g);

}  // namespace gbh
