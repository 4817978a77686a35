#pragma once

#include <string>
#include <vector>

#include "gbh/eigenbasis.hpp"
#include "gbh/grid.hpp"
#include "gbh/params.hpp"

namespace gbh {

/// Target decay rate and the two synthesis constants.
struct ControllerSpec {
  double omega = 6.0;    ///< prescribed decay rate, > 0
  double epsilon = 0.1;  ///< stability margin, > 0
  double k = 0.1;        ///< elliptic-lift gain parameter, > 0
};

/// Per-mode gain-condition evaluation. `pass` is the conjunction of the two
/// conditions over all controlled modes.
struct ConditionReport {
  int N = 0;
  double omega0 = 0.0;
  std::vector<double> A, B;
  std::vector<bool> cond_c;  ///< A_i + epsilon < 0
  std::vector<bool> cond_d;  ///< B_i < 0
  bool pass = true;
  std::vector<std::string> warnings;
};

/// Number of modes that must be actuated for the prescribed rate: the
/// smallest N with -eta*lambda_j + omega + epsilon < 0 for every j > N.
/// Throws ListTooShort if the supplied spectrum cannot certify the tail.
int compute_N_omega(double omega, double epsilon, double eta,
                    const std::vector<double>& lambdas);

/// omega_0 = 2 eta lambda_1 + beta gamma + lambda_1^2 eta^2 / (k + eta (lambda_N - lambda_1)).
double compute_omega0(double k, double eta, double beta, double gamma, double lambda1,
                      double lambdaN);

/// Drift/memory coefficients of controlled mode i (1-based, i <= N):
///   A_i = [-(eta l_i + beta gamma - omega)(k + eta l_i) - (omega + k - beta gamma) l_1 eta]
///         / (k + eta l_i - l_1 eta)
///   B_i = [-l_i (k + eta l_i) - k l_1] / (k + eta l_i - l_1 eta)
std::pair<double, double> mode_coefficients(int i, const ControllerSpec& spec,
                                            const PhysicalParams& p,
                                            const std::vector<double>& lambdas);

ConditionReport check_gain_conditions(const ControllerSpec& spec, const PhysicalParams& p,
                                      const std::vector<double>& lambdas);

/// Synthesized boundary feedback: actuator profiles Phi_i biorthogonal to the
/// eigenfunction normal derivatives, plus the per-mode gains mu_j. Immutable
/// after synthesis; evaluation is pure.
class Controller {
 public:
  Controller(ControllerSpec spec, const PhysicalParams& p, const Grid& g,
             std::vector<EigenMode> modes, double gram_condition_limit = 1e8);

  const ControllerSpec& spec() const { return spec_; }
  int N() const { return static_cast<int>(modes_.size()); }
  const std::vector<EigenMode>& modes() const { return modes_; }
  double lambda1() const { return lambda1_; }
  double mu(int j) const { return mu_[j]; }
  const std::vector<double>& gram() const { return gram_; }
  const std::vector<double>& gram_inv() const { return gram_inv_; }
  double gram_condition_number() const { return gram_cond_; }
  const BoundaryTrace& actuator(int i) const { return Phi_[i]; }
  const Field& eigenfield(int j) const { return phi_fields_[j]; }
  const Grid& grid() const { return *grid_; }

  /// u = lambda_1 sum_j mu_j (w, phi_j) Phi_j  (mu-gain form, state variable).
  BoundaryTrace feedback_trace(const Field& w) const;

  /// u = lambda_1 sum_j (z, phi_j) Phi_j  (lifted-variable form, no mu).
  BoundaryTrace feedback_trace_z(const Field& z) const;

 private:
  ControllerSpec spec_;
  const Grid* grid_;
  std::vector<EigenMode> modes_;
  double lambda1_ = 0.0;
  std::vector<double> mu_;
  std::vector<double> gram_, gram_inv_;
  double gram_cond_ = 1.0;
  std::vector<BoundaryTrace> Phi_;
  std::vector<Field> phi_fields_;
};

/// Full synthesis pipeline: mode count from the spectrum, gain conditions,
/// independence check of the boundary traces, Gram inversion.
/// Throws GainConditionFailed / DependentTraces / DegenerateController.
Controller synthesize(const ControllerSpec& spec, const PhysicalParams& p, const DomainSpec& d,
                      const Grid& g);

/// Synthesis with an explicit mode set (validation hook; skips the gain
/// conditions tied to the natural mode ordering but keeps the independence
/// check).
Controller synthesize_with_modes(const ControllerSpec& spec, const PhysicalParams& p,
                                 const Grid& g, std::vector<EigenMode> modes);

/// Smallest k in a logarithmic sweep of [1e-3, 10] whose gain conditions
/// pass (omega_0 is monotone decreasing in k, so this also maximizes it).
double default_k(double omega, double epsilon, const PhysicalParams& p,
                 const std::vector<double>& lambdas);

}  // namespace gbh
