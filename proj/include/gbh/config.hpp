#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "gbh/memory_pde.hpp"
#include "gbh/params.hpp"

namespace gbh {

/// Initial-condition recipe: a single eigenmode by rank, or a seeded random
/// truncated eigen-expansion.
struct InitialCondition {
  enum class Kind { Mode, Random } kind = Kind::Mode;
  int mode_rank = 1;   ///< 1-based rank in the sorted eigenbasis
  int n_modes = 6;     ///< expansion length for random fields
  double amplitude = 1e-2;
};

/// Everything a scenario needs, parsed from the `key = value` config file.
struct RunConfig {
  PhysicalParams physics;
  DomainSpec domain;
  int nx = 63, ny = 63;

  double omega = 6.0;
  double epsilon = 0.1;
  std::optional<double> k;  ///< absent -> logarithmic sweep picks it

  double dt = 1e-3;
  double horizon = 3.0;
  SimOptions::Scheme scheme = SimOptions::Scheme::CN;
  InitialCondition w0;
  std::optional<double> fit_start, fit_end;
};

/// Parses the line-oriented `[section]` / `key = value` format. Sections
/// [physics], [domain], [grid], [controller], [sim]; unknown sections or keys
/// are errors, as are malformed lines. '#' starts a comment.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

}  // namespace gbh
