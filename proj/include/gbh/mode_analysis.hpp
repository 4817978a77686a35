#pragma once

#include <vector>

#include "gbh/controller.hpp"
#include "gbh/params.hpp"

namespace gbh {

/// One decoupled mode of the feedback-coupled memory system, reduced to the
/// augmented pair z' = A z + B m, m' = z - delta m. Stability is governed by
/// the companion matrix [[A, B], [1, -delta]] with characteristic polynomial
/// xi^2 + (delta - A) xi + (-A delta - B).
struct ModeSystem {
  int index = 1;
  double A = 0.0;
  double B = 0.0;
  double delta = 1.0;
};

/// Controlled-mode system (index <= N) built from the synthesis formulas.
ModeSystem controlled_mode(int index, const ControllerSpec& spec, const PhysicalParams& p,
                           const std::vector<double>& lambdas);

/// Uncontrolled tail mode: A = -(eta lambda + beta gamma - omega), B = -lambda.
ModeSystem tail_mode(int index, double lambda, double omega, const PhysicalParams& p);

/// Largest real part of the companion eigenvalues.
double spectral_abscissa(const ModeSystem& ms);

/// Predicted decay rate of the feedback-coupled system: the slowest companion
/// abscissa over the controlled modes and the first tail_depth uncontrolled
/// modes. Requires the gain conditions to hold (throws GainConditionFailed).
double predict_decay(const Controller& c, const PhysicalParams& p, int tail_depth = 5);

/// Integrates z' = A z + B m, m' = z - delta m by the closed-form 2x2 matrix
/// exponential per step; returns z at t = 0, dt, ..., T.
std::vector<double> simulate_mode_ode(const ModeSystem& ms, double z0, double dt, double T);

}  // namespace gbh
