#include "gbh/mode_analysis.hpp"

#include <cmath>

#include "gbh/errors.hpp"

namespace gbh {
namespace {

// Closed-form exponential of dt * [[A, B], [1, -delta]]: write M = mu I + N
// with tr N = 0, N^2 = q^2 I, q^2 = mu^2 - det M; then
// exp(M dt) = e^{mu dt} (cosh(q dt) I + sinh(q dt)/q N).
struct Propagator {
  double e00, e01, e10, e11;
};

Propagator make_propagator(const ModeSystem& ms, double dt) {
  const double mu = 0.5 * (ms.A - ms.delta);
  const double det = -ms.A * ms.delta - ms.B;
  const double q2 = mu * mu - det;
  double ch, shq;  // cosh(q dt), sinh(q dt)/q
  const double q2dt2 = q2 * dt * dt;
  if (std::fabs(q2dt2) < 1e-12) {
    ch = 1.0 + q2dt2 / 2.0;
    shq = dt * (1.0 + q2dt2 / 6.0);
  } else if (q2 > 0.0) {
    double q = std::sqrt(q2);
    ch = std::cosh(q * dt);
    shq = std::sinh(q * dt) / q;
  } else {
    double w = std::sqrt(-q2);
    ch = std::cos(w * dt);
    shq = std::sin(w * dt) / w;
  }
  const double s = std::exp(mu * dt);
  // N = [[A - mu, B], [1, -delta - mu]]
  return Propagator{s * (ch + shq * (ms.A - mu)), s * shq * ms.B, s * shq,
                    s * (ch + shq * (-ms.delta - mu))};
}

}  // namespace

ModeSystem controlled_mode(int index, const ControllerSpec& spec, const PhysicalParams& p,
                           const std::vector<double>& lambdas) {
  auto [A, B] = mode_coefficients(index, spec, p, lambdas);
  return ModeSystem{index, A, B, p.delta};
}

ModeSystem tail_mode(int index, double lambda, double omega, const PhysicalParams& p) {
  return ModeSystem{index, -(p.eta * lambda + p.beta * p.gamma - omega), -lambda, p.delta};
}

double spectral_abscissa(const ModeSystem& ms) {
  // roots of xi^2 + (delta - A) xi + (-A delta - B)
  const double b = ms.delta - ms.A;
  const double c = -ms.A * ms.delta - ms.B;
  const double disc = b * b - 4.0 * c;
  if (disc >= 0.0) return 0.5 * (-b + std::sqrt(disc));
  return -0.5 * b;
}

double predict_decay(const Controller& c, const PhysicalParams& p, int tail_depth) {
  const ControllerSpec& spec = c.spec();
  auto all = enumerate_modes(c.grid().domain(), c.N() + tail_depth);
  std::vector<double> lambdas;
  for (const auto& m : all) lambdas.push_back(m.lambda);

  ConditionReport rep = check_gain_conditions(spec, p, lambdas);
  if (!rep.pass)
    throw GainConditionFailed("GainConditionFailed: predict_decay requires passing conditions");

  double worst = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= c.N(); ++i)
    worst = std::min(worst, -spectral_abscissa(controlled_mode(i, spec, p, lambdas)));
  for (int i = c.N() + 1; i <= c.N() + tail_depth && i <= static_cast<int>(lambdas.size()); ++i)
    worst = std::min(worst, -spectral_abscissa(tail_mode(i, lambdas[i - 1], spec.omega, p)));
  return worst;
}

std::vector<double> simulate_mode_ode(const ModeSystem& ms, double z0, double dt, double T) {
  if (!(dt > 0.0)) throw Error("simulate_mode_ode: dt must be positive");
  Propagator P = make_propagator(ms, dt);
  const int n = static_cast<int>(std::llround(T / dt));
  std::vector<double> out;
  out.reserve(n + 1);
  double z = z0, m = 0.0;
  out.push_back(z);
  for (int s = 0; s < n; ++s) {
    double zn = P.e00 * z + P.e01 * m;
    double mn = P.e10 * z + P.e11 * m;
    z = zn;
    m = mn;
    out.push_back(z);
  }
  return out;
}

}  // namespace gbh
