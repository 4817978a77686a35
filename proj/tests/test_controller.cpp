#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "gbh/controller.hpp"
#include "gbh/lifting.hpp"
#include "gbh/memory_pde.hpp"
#include "gbh/rng.hpp"

using namespace gbh;

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kLam1 = kPi * kPi / 4.0;
const double kLam2 = kPi * kPi / 2.0;

PhysicalParams canonical_physics() { return PhysicalParams{}; }

std::vector<double> canonical_lambdas() {
  std::vector<double> l;
  for (auto& m : enumerate_modes(DomainSpec{}, 16)) l.push_back(m.lambda);
  return l;
}

// Direct long-double transcription of the synthesis formulas, kept separate
// from the library so regressions in either copy show up.
long double omega0_ref(long double k, long double eta, long double bg, long double l1,
                       long double lN) {
  return 2.0L * eta * l1 + bg + l1 * l1 * eta * eta / (k + eta * (lN - l1));
}

std::pair<long double, long double> coeffs_ref(long double li, long double l1, long double k,
                                               long double eta, long double bg,
                                               long double om) {
  long double den = k + eta * li - l1 * eta;
  long double A = (-(eta * li + bg - om) * (k + eta * li) - (om + k - bg) * l1 * eta) / den;
  long double B = (-li * (k + eta * li) - k * l1) / den;
  return {A, B};
}

}  // namespace

TEST_CASE("mode count for a prescribed rate") {
  auto lam = canonical_lambdas();
  CHECK(compute_N_omega(6.0, 0.1, 1.0, lam) == 2);  // lambda_3 > 6.1 > lambda_2
  CHECK(compute_N_omega(3.0, 0.1, 1.0, lam) == 1);
  CHECK(compute_N_omega(0.5, 0.1, 1.0, lam) == 0);
  CHECK_THROWS_AS(compute_N_omega(6.0, 0.1, 1.0, std::vector<double>{1.0, 2.0}), ListTooShort);

  // monotone nondecreasing in omega
  int prev = 0;
  for (double om = 0.5; om < 30.0; om += 0.7) {
    int N = compute_N_omega(om, 0.1, 1.0, lam);
    CHECK(N >= prev);
    prev = N;
  }
}

TEST_CASE("achievable-rate bound") {
  double v = compute_omega0(0.1, 1.0, 1.0, 0.5, kLam1, kLam2);
  CHECK(v == doctest::Approx(static_cast<double>(
                 omega0_ref(0.1L, 1.0L, 0.5L, kLam1, kLam2))).epsilon(1e-14));
  CHECK(v == doctest::Approx(7.8060983).epsilon(1e-6));

  // large k: the lift term vanishes
  CHECK(compute_omega0(1e9, 1.0, 1.0, 0.5, kLam1, kLam2) ==
        doctest::Approx(2.0 * kLam1 + 0.5).epsilon(1e-8));
  // lambda_N = lambda_1 collapses the denominator to k
  CHECK(compute_omega0(0.2, 1.0, 1.0, 0.5, kLam1, kLam1) ==
        doctest::Approx(2.0 * kLam1 + 0.5 + kLam1 * kLam1 / 0.2).epsilon(1e-14));
}

TEST_CASE("gain conditions on the canonical configuration") {
  auto lam = canonical_lambdas();
  ControllerSpec spec{6.0, 0.1, 0.1};
  auto p = canonical_physics();
  ConditionReport r = check_gain_conditions(spec, p, lam);
  REQUIRE(r.N == 2);
  CHECK(r.pass);
  auto [A1, B1] = coeffs_ref(kLam1, kLam1, 0.1L, 1.0L, 0.5L, 6.0L);
  auto [A2, B2] = coeffs_ref(kLam2, kLam1, 0.1L, 1.0L, 0.5L, 6.0L);
  CHECK(r.A[0] == doctest::Approx(static_cast<double>(A1)).epsilon(1e-12));
  CHECK(r.B[0] == doctest::Approx(static_cast<double>(B1)).epsilon(1e-12));
  CHECK(r.A[1] == doctest::Approx(static_cast<double>(A2)).epsilon(1e-12));
  CHECK(r.B[1] == doctest::Approx(static_cast<double>(B2)).epsilon(1e-12));
  CHECK(r.A[0] == doctest::Approx(-60.3154841).epsilon(1e-6));
  CHECK(r.A[1] == doctest::Approx(-4.2734994).epsilon(1e-6));
  CHECK(r.B[1] == doctest::Approx(-9.7734994).epsilon(1e-6));

  SUBCASE("requesting the bound itself fails with margin epsilon") {
    ControllerSpec bad{r.omega0, 0.1, 0.1};
    ConditionReport rb = check_gain_conditions(bad, p, lam);
    CHECK(!rb.pass);
    REQUIRE(!rb.warnings.empty());
    CHECK(rb.warnings.front().find("margin") != std::string::npos);
  }
  SUBCASE("degenerate rate needs no modes") {
    ControllerSpec low{0.5, 0.1, 0.1};
    ConditionReport rl = check_gain_conditions(low, p, lam);
    CHECK(rl.N == 0);
    REQUIRE(!rl.warnings.empty());
    CHECK(rl.warnings.front().find("DegenerateController") != std::string::npos);
  }
}

TEST_CASE("memory coefficient is negative across parameter sweeps") {
  auto p = canonical_physics();
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    double k = std::pow(10.0, -3.0 + 4.0 * rng.uniform());
    double l1 = 0.1 + 10.0 * rng.uniform();
    double li = l1 + 30.0 * rng.uniform();
    ControllerSpec spec{1.0, 0.1, k};
    std::vector<double> lam{l1, li, li + 100.0};
    auto [A, B] = mode_coefficients(2, spec, p, lam);
    (void)A;
    CHECK(B < 0.0);
  }
}

TEST_CASE("synthesis on the canonical domain") {
  DomainSpec d;
  Grid g = build_grid(d, 63, 63);
  auto p = canonical_physics();
  ControllerSpec spec{6.0, 0.1, 0.1};
  Controller c = synthesize(spec, p, d, g);
  REQUIRE(c.N() == 2);

  // Gram is diag(pi^2/2) for the constant and single-cosine traces
  CHECK(c.gram()[0] == doctest::Approx(kPi * kPi / 2.0).epsilon(1e-10));
  CHECK(c.gram()[3] == doctest::Approx(kPi * kPi / 2.0).epsilon(1e-10));
  CHECK(std::fabs(c.gram()[1]) < 1e-12);
  CHECK(c.gram_inv()[0] == doctest::Approx(2.0 / (kPi * kPi)).epsilon(1e-10));
  CHECK(c.gram_inv()[0] == doctest::Approx(0.2026).epsilon(1e-3));

  CHECK(c.mu(0) == doctest::Approx(25.674011).epsilon(1e-8));
  CHECK(c.mu(1) == doctest::Approx(1.9610501).epsilon(1e-7));
  CHECK(c.mu(0) >= 1.0);
  CHECK(c.mu(1) >= 1.0);

  // biorthogonality of actuators against the eigen normal derivatives
  double tol = 10.0 * g.hx() * g.hx();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      BoundaryTrace dphi = normal_derivative_trace(c.modes()[j], g);
      double ip = c.actuator(i).inner(dphi);
      CHECK(std::fabs(ip - (i == j ? 1.0 : 0.0)) <= tol);
    }
  }
}

TEST_CASE("independence check rejects proportional traces") {
  DomainSpec sq{2, 1.0, 1.0};
  Grid g = build_grid(sq, 31, 31);
  auto p = canonical_physics();
  ControllerSpec spec{6.0, 0.1, 0.1};

  auto all = enumerate_modes(sq, 10);
  std::vector<EigenMode> good{all[0], all[1]};  // (1,0), (1,1)
  CHECK_NOTHROW(synthesize_with_modes(spec, p, g, good));

  EigenMode m20;
  for (auto& m : all)
    if (m.m == 2 && m.n == 0) m20 = m;
  std::vector<EigenMode> bad{all[0], m20};
  CHECK_THROWS_AS(synthesize_with_modes(spec, p, g, bad), DependentTraces);
}

TEST_CASE("feedback trace evaluation") {
  DomainSpec d;
  Grid g = build_grid(d, 63, 63);
  auto p = canonical_physics();
  Controller c = synthesize(ControllerSpec{6.0, 0.1, 0.1}, p, d, g);
  auto modes = enumerate_modes(d, 3);

  SUBCASE("zero field gives a zero trace") {
    Field z = g.make_field();
    for (double v : c.feedback_trace(z).values) CHECK(v == 0.0);
  }
  SUBCASE("an eigenfield picks out its own actuator") {
    Field phi1 = eval_eigenfunction(modes[0], g);
    BoundaryTrace u = c.feedback_trace(phi1);
    double lam1 = modes[0].lambda;
    for (size_t q = 0; q < u.values.size(); ++q)
      CHECK(u.values[q] ==
            doctest::Approx(lam1 * c.mu(0) * c.actuator(0).values[q]).epsilon(2e-4));

    BoundaryTrace uz = c.feedback_trace_z(phi1);
    for (size_t q = 0; q < uz.values.size(); ++q)
      CHECK(uz.values[q] == doctest::Approx(lam1 * c.actuator(0).values[q]).epsilon(2e-4));
  }
  SUBCASE("fields orthogonal to the controlled span produce nothing") {
    Field phi3 = eval_eigenfunction(modes[2], g);
    BoundaryTrace u = c.feedback_trace(phi3);
    double scale = 0.0;
    for (double v : c.actuator(0).values) scale = std::max(scale, std::fabs(v));
    for (double v : u.values) CHECK(std::fabs(v) < 1e-3 * scale);
  }
  SUBCASE("feedback is exactly linear") {
    Rng rng(5);
    Field w = g.make_field();
    for (auto& v : w.v) v = rng.sym();
    BoundaryTrace u1 = c.feedback_trace(w);
    Field w2 = w;
    for (auto& v : w2.v) v *= -3.25;
    BoundaryTrace u2 = c.feedback_trace(w2);
    for (size_t q = 0; q < u1.values.size(); ++q)
      CHECK(u2.values[q] == doctest::Approx(-3.25 * u1.values[q]).epsilon(1e-13));
  }
}

TEST_CASE("the two feedback forms agree through the lifted fixed point") {
  // Substituting z = w - D u into the lifted-form feedback and solving the
  // resulting N x N relation with the measured duality matrix must reproduce
  // the mu-gain form.
  DomainSpec d;
  Grid g = build_grid(d, 63, 63);
  auto p = canonical_physics();
  ControllerSpec spec{6.0, 0.1, 0.1};
  Controller c = synthesize(spec, p, d, g);
  const int N = c.N();

  auto M = verify_duality(c, spec.k, p.eta, g);

  Rng rng(42);
  Field w = g.make_field();
  for (auto& v : w.v) v = rng.sym();

  Eigen::VectorXd wvec(N);
  for (int i = 0; i < N; ++i) wvec(i) = g.quad_inner(w, c.eigenfield(i));
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) A(i, j) += c.lambda1() * M[static_cast<size_t>(i) * N + j];
  Eigen::VectorXd cvec = A.partialPivLu().solve(wvec);

  BoundaryTrace expect = g.make_trace();
  for (int j = 0; j < N; ++j)
    for (size_t q = 0; q < expect.values.size(); ++q)
      expect.values[q] += c.lambda1() * cvec(j) * c.actuator(j).values[q];

  BoundaryTrace got = c.feedback_trace(w);
  double scale = 0.0;
  for (double v : expect.values) scale = std::max(scale, std::fabs(v));
  for (size_t q = 0; q < got.values.size(); ++q)
    CHECK(std::fabs(got.values[q] - expect.values[q]) <= 1e-3 * scale);
}

TEST_CASE("automatic gain sweep picks the smallest passing k") {
  auto lam = canonical_lambdas();
  auto p = canonical_physics();
  double k = default_k(6.0, 0.1, p, lam);
  CHECK(k > 0.0);
  ConditionReport r = check_gain_conditions(ControllerSpec{6.0, 0.1, k}, p, lam);
  CHECK(r.pass);
  // the sweep starts at 1e-3 and 6 + 0.1 < omega0 holds there already
  CHECK(k == doctest::Approx(1e-3));
}

TEST_CASE("one-dimensional interval supports a single actuated mode") {
  DomainSpec d{1, 1.0, 0.0};
  Grid g = build_grid(d, 63, 0);
  auto p = canonical_physics();
  std::vector<double> lam;
  for (auto& m : enumerate_modes(d, 16)) lam.push_back(m.lambda);
  // lambda_1 = pi^2/4, lambda_2 = 9 pi^2/4: omega = 3 actuates exactly one mode
  CHECK(compute_N_omega(3.0, 0.1, 1.0, lam) == 1);
  Controller c = synthesize(ControllerSpec{3.0, 0.1, 0.1}, p, d, g);
  CHECK(c.N() == 1);

  // requesting two modes violates independence on the single-point edge
  auto modes = enumerate_modes(d, 2);
  CHECK_THROWS_AS(synthesize_with_modes(ControllerSpec{3.0, 0.1, 0.1}, p, g, modes),
                  DependentTraces);

  // closed-loop 1-D run drives the state down
  SimOptions opt{true, false, false, 3.0, 1e-3, SimOptions::Scheme::CN};
  Simulator sim(g, p, &c, opt);
  Field w0 = eval_eigenfunction(enumerate_modes(d, 1)[0], g);
  sim.init(w0);
  while (sim.state().t < 2.0 - 1e-12) sim.step();
  EnergyNorms en = energy_norms(sim.state().w, g);
  CHECK(en.l2 < 0.2);  // shifted variable still decays
}

TEST_CASE("achievable-rate bound is monotone decreasing in k and lambda_N") {
  double prev = 1e300;
  for (double k : {1e-3, 1e-2, 1e-1, 1.0, 10.0}) {
    double v = compute_omega0(k, 1.0, 1.0, 0.5, kLam1, kLam2);
    CHECK(v < prev);
    prev = v;
  }
  prev = 1e300;
  for (double lN : {kLam1, kLam2, 2 * kLam2, 4 * kLam2}) {
    double v = compute_omega0(0.1, 1.0, 1.0, 0.5, kLam1, lN);
    CHECK(v < prev);
    prev = v;
  }
}
