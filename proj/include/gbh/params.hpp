#pragma once

#include <string>
#include <vector>

#include "gbh/errors.hpp"

namespace gbh {

/// Physical constants of the evolution model. The source term is kept as a
/// recipe here (sampled onto a grid later) so params stay grid-independent.
struct PhysicalParams {
  double eta = 1.0;    ///< diffusion coefficient, > 0
  double delta = 1.0;  ///< memory kernel decay rate, > 0
  double a = 1.0;      ///< convection coefficient, > 0
  double beta = 1.0;   ///< reaction coefficient, > 0
  double gamma = 0.5;  ///< reaction root parameter
  int kappa = 1;       ///< nonlinearity exponent, positive integer

  enum class Source { Zero, Manufactured };
  Source source = Source::Zero;
  double source_amplitude = 1e-2;  ///< amplitude of the manufactured target
};

/// Rectangle (0,Lx) x (0,Ly) with the controlled edge at x = 0.
/// dim == 1 degenerates to the interval (0,Lx) with a single control point.
struct DomainSpec {
  int dim = 2;
  double Lx = 1.0;
  double Ly = 2.0;
};

struct ValidatedConfig {
  PhysicalParams physics;
  DomainSpec domain;
};

/// Checks sign constraints and the admissible nonlinearity exponents
/// (any positive integer for d = 2; 1 or 2 for d = 3, which we do not build).
/// Throws ValidationError listing every violated constraint.
ValidatedConfig validate_params(const PhysicalParams& p, const DomainSpec& d);

}  // namespace gbh
