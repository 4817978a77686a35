#include "gbh/controller.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "gbh/errors.hpp"

namespace gbh {

int compute_N_omega(double omega, double epsilon, double eta,
                    const std::vector<double>& lambdas) {
  if (lambdas.empty()) throw ListTooShort("ListTooShort: empty spectrum");
  double threshold = (omega + epsilon) / eta;  // need lambda_j > threshold beyond N
  if (!(lambdas.back() > threshold))
    throw ListTooShort("ListTooShort: spectrum does not certify the stable tail");
  int N = 0;
  for (size_t j = 0; j < lambdas.size(); ++j)
    if (!(lambdas[j] > threshold)) N = static_cast<int>(j) + 1;
  return N;
}

double compute_omega0(double k, double eta, double beta, double gamma, double lambda1,
                      double lambdaN) {
  return 2.0 * eta * lambda1 + beta * gamma +
         lambda1 * lambda1 * eta * eta / (k + eta * (lambdaN - lambda1));
}

std::pair<double, double> mode_coefficients(int i, const ControllerSpec& spec,
                                            const PhysicalParams& p,
                                            const std::vector<double>& lambdas) {
  double l1 = lambdas.front();
  double li = lambdas[i - 1];
  double bg = p.beta * p.gamma;
  double denom = spec.k + p.eta * li - l1 * p.eta;
  double A = (-(p.eta * li + bg - spec.omega) * (spec.k + p.eta * li) -
              (spec.omega + spec.k - bg) * l1 * p.eta) / denom;
  double B = (-li * (spec.k + p.eta * li) - spec.k * l1) / denom;
  return {A, B};
}

ConditionReport check_gain_conditions(const ControllerSpec& spec, const PhysicalParams& p,
                                      const std::vector<double>& lambdas) {
  ConditionReport r;
  r.N = compute_N_omega(spec.omega, spec.epsilon, p.eta, lambdas);
  if (r.N == 0) {
    r.warnings.push_back(
        "DegenerateController: no modes require actuation at this rate (feedback is zero)");
    r.omega0 = compute_omega0(spec.k, p.eta, p.beta, p.gamma, lambdas.front(), lambdas.front());
    return r;
  }
  r.omega0 =
      compute_omega0(spec.k, p.eta, p.beta, p.gamma, lambdas.front(), lambdas[r.N - 1]);
  if (!(spec.omega + spec.epsilon < r.omega0)) {
    r.pass = false;
    r.warnings.push_back("rate margin violated: omega + epsilon - omega0 = " +
                         std::to_string(spec.omega + spec.epsilon - r.omega0));
  }
  for (int i = 1; i <= r.N; ++i) {
    auto [A, B] = mode_coefficients(i, spec, p, lambdas);
    r.A.push_back(A);
    r.B.push_back(B);
    r.cond_c.push_back(A + spec.epsilon < 0.0);
    r.cond_d.push_back(B < 0.0);
    if (!r.cond_c.back() || !r.cond_d.back()) r.pass = false;
  }
  if (static_cast<size_t>(r.N) < lambdas.size() &&
      !(lambdas[r.N - 1] < lambdas[r.N]))
    r.warnings.push_back("eigenvalue cluster split: lambda_N equals lambda_{N+1}");
  return r;
}

Controller::Controller(ControllerSpec spec, const PhysicalParams& p, const Grid& g,
                       std::vector<EigenMode> modes, double gram_condition_limit)
    : spec_(spec), grid_(&g), modes_(std::move(modes)) {
  int N = static_cast<int>(modes_.size());
  if (N == 0) {
    lambda1_ = 0.0;
    return;
  }
  lambda1_ = modes_.front().lambda;

  std::vector<BoundaryTrace> dtr;
  dtr.reserve(N);
  for (const auto& m : modes_) dtr.push_back(normal_derivative_trace(m, g));
  gram_ = trace_gram(modes_, g);
  gram_cond_ = gram_condition(gram_, N);
  if (!(gram_cond_ < gram_condition_limit))
    throw DependentTraces("DependentTraces: boundary-trace Gram condition number " +
                     std::to_string(gram_cond_) + " exceeds limit");

  Eigen::MatrixXd G(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) G(i, j) = gram_[static_cast<size_t>(i) * N + j];
  Eigen::MatrixXd Ginv = G.inverse();
  gram_inv_.resize(static_cast<size_t>(N) * N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) gram_inv_[static_cast<size_t>(i) * N + j] = Ginv(i, j);

  Phi_.resize(N);
  for (int i = 0; i < N; ++i) {
    BoundaryTrace t = g.make_trace();
    for (int j = 0; j < N; ++j) {
      double a_ij = gram_inv_[static_cast<size_t>(i) * N + j];
      for (size_t q = 0; q < t.values.size(); ++q) t.values[q] += a_ij * dtr[j].values[q];
    }
    Phi_[i] = std::move(t);
  }

  mu_.resize(N);
  for (int j = 0; j < N; ++j)
    mu_[j] = (spec_.k + p.eta * modes_[j].lambda) /
             (spec_.k + p.eta * (modes_[j].lambda - lambda1_));

  phi_fields_.reserve(N);
  for (const auto& m : modes_) phi_fields_.push_back(eval_eigenfunction(m, g));
}

BoundaryTrace Controller::feedback_trace(const Field& w) const {
  BoundaryTrace u = grid_->make_trace();
  for (int j = 0; j < N(); ++j) {
    double coeff = lambda1_ * mu_[j] * grid_->quad_inner(w, phi_fields_[j]);
    for (size_t q = 0; q < u.values.size(); ++q) u.values[q] += coeff * Phi_[j].values[q];
  }
  return u;
}

BoundaryTrace Controller::feedback_trace_z(const Field& z) const {
  BoundaryTrace u = grid_->make_trace();
  for (int j = 0; j < N(); ++j) {
    double coeff = lambda1_ * grid_->quad_inner(z, phi_fields_[j]);
    for (size_t q = 0; q < u.values.size(); ++q) u.values[q] += coeff * Phi_[j].values[q];
  }
  return u;
}

Controller synthesize(const ControllerSpec& spec, const PhysicalParams& p, const DomainSpec& d,
                      const Grid& g) {
  auto modes = enumerate_modes(d, 64);
  std::vector<double> lambdas;
  lambdas.reserve(modes.size());
  for (const auto& m : modes) lambdas.push_back(m.lambda);
  ConditionReport rep = check_gain_conditions(spec, p, lambdas);
  if (!rep.pass)
    throw GainConditionFailed("GainConditionFailed: " +
                              (rep.warnings.empty() ? std::string("per-mode conditions violated")
                                                    : rep.warnings.front()));
  modes.resize(rep.N);
  return Controller(spec, p, g, std::move(modes));
}

Controller synthesize_with_modes(const ControllerSpec& spec, const PhysicalParams& p,
                                 const Grid& g, std::vector<EigenMode> modes) {
  return Controller(spec, p, g, std::move(modes));
}

double default_k(double omega, double epsilon, const PhysicalParams& p,
                 const std::vector<double>& lambdas) {
  // omega_0 decreases in k, so the smallest passing k also maximizes the
  // achievable-rate margin.
  const int steps = 64;
  for (int s = 0; s < steps; ++s) {
    double k = 1e-3 * std::pow(10.0 / 1e-3, static_cast<double>(s) / (steps - 1));
    ControllerSpec spec{omega, epsilon, k};
    ConditionReport r = check_gain_conditions(spec, p, lambdas);
    if (r.pass) return k;
  }
  throw GainConditionFailed("GainConditionFailed: no k in [1e-3, 10] satisfies the conditions");
}

}  // namespace gbh
