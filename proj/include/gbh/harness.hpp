#pragma once

#include <string>
#include <vector>

#include "gbh/config.hpp"
#include "gbh/controller.hpp"
#include "gbh/grid.hpp"
#include "gbh/memory_pde.hpp"

namespace gbh {

/// Exponential rate fitted to a norm history by least squares on -log(n(t)).
struct DecayFit {
  double rate = 0.0;
  double t_start = 0.0, t_end = 0.0;
  double r2 = 0.0;
  int n_points = 0;
};

/// Plain log-linear least squares over the window. Requires at least 10
/// samples with positive norms inside it (DegenerateSeries otherwise).
DecayFit fit_decay_rate(const std::vector<double>& t, const std::vector<double>& norm,
                        double t_start, double t_end);

/// Envelope variant for oscillatory decays: fits the local maxima of the
/// norm inside the window when at least three exist, otherwise falls back to
/// the plain fit.
DecayFit fit_decay_envelope(const std::vector<double>& t, const std::vector<double>& norm,
                            double t_start, double t_end);

/// Truncated eigen-expansion with seeded coefficients; deterministic per
/// (seed, n_modes).
Field random_eigen_field(const Grid& g, const DomainSpec& d, uint64_t seed, int n_modes,
                         double amplitude);

/// Norm history of one simulation run, plus everything the CSV needs.
struct Trajectory {
  std::vector<double> t;
  std::vector<double> l2, h1;            ///< of the evolved variable
  std::vector<double> l2_unshifted;      ///< e^{-omega t}-rescaled when shifted
  std::vector<std::vector<double>> amp;  ///< (w, phi_j), j = 1..n_amp
  std::vector<double> u_energy;
  bool shifted = false;
  double omega = 0.0;
  std::string failure;  ///< empty, or the guard that stopped the run early
};

/// Runs a configured simulator from w0 for `horizon` time. Guard trips are
/// recorded in `failure` instead of propagating (runs outside the smallness
/// regime are themselves results).
Trajectory run_simulation(Simulator& sim, const Field& w0, double horizon, int n_amp);

struct Scenario {
  enum class Kind { Synthesize, SimulateLinear, SimulateNonlinear, AnalyzeModes, Validate,
                    Compare } kind = Kind::SimulateLinear;
  std::string config_path;
  std::string out_dir;
  uint64_t seed = 0;
  std::string validate_which = "all";  ///< eigen | lift | all
};

/// Executes one scenario end to end (synthesis, simulation, fitting, CSV and
/// report output). Returns the process exit code (0 on success) and prints a
/// one-line summary per artifact written.
int run_scenario(const Scenario& s);

/// Open-versus-closed-loop comparison on the linear system; also measures the
/// memory-free reference run. Returns the report text (also written to disk
/// by run_scenario).
struct CompareResult {
  DecayFit closed, open_envelope, open_plain, no_memory;
  double predicted_closed = 0.0;      ///< omega + slowest companion margin
  double predicted_open = 0.0;        ///< slowest open-loop companion abscissa
  double no_memory_expected = 0.0;    ///< eta lambda_1 + beta gamma
  bool controller_unnecessary = false;
};
CompareResult compare_open_closed(const RunConfig& cfg, uint64_t seed);

/// Writes rows of doubles with a header, '.' decimal point, 17 significant
/// digits.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace gbh
