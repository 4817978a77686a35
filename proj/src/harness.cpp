#include "gbh/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gbh/errors.hpp"
#include "gbh/kernels.hpp"
#include "gbh/lifting.hpp"
#include "gbh/mode_analysis.hpp"
#include "gbh/rng.hpp"

namespace gbh {
namespace {

DecayFit lsq_log_fit(const std::vector<double>& t, const std::vector<double>& logn, double t0,
                     double t1) {
  // slope of -log(n) against t
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = static_cast<int>(t.size());
  for (int i = 0; i < n; ++i) {
    sx += t[i];
    sy += logn[i];
    sxx += t[i] * t[i];
    sxy += t[i] * logn[i];
  }
  double det = n * sxx - sx * sx;
  double slope = (n * sxy - sx * sy) / det;
  double intercept = (sy * sxx - sx * sxy) / det;
  double ss_res = 0, ss_tot = 0, mean = sy / n;
  for (int i = 0; i < n; ++i) {
    double fit = slope * t[i] + intercept;
    ss_res += (logn[i] - fit) * (logn[i] - fit);
    ss_tot += (logn[i] - mean) * (logn[i] - mean);
  }
  DecayFit f;
  f.rate = -slope;
  f.t_start = t0;
  f.t_end = t1;
  f.r2 = (ss_tot > 0) ? 1.0 - ss_res / ss_tot : 1.0;
  f.n_points = n;
  return f;
}

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

DecayFit fit_decay_rate(const std::vector<double>& t, const std::vector<double>& norm,
                        double t_start, double t_end) {
  std::vector<double> tt, ll;
  for (size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_start || t[i] > t_end) continue;
    if (!(norm[i] > 0.0))
      throw DegenerateSeries("DegenerateSeries: nonpositive norm inside the fit window");
    tt.push_back(t[i]);
    ll.push_back(std::log(norm[i]));
  }
  if (tt.size() < 10)
    throw DegenerateSeries("DegenerateSeries: fewer than 10 samples in the fit window");
  return lsq_log_fit(tt, ll, t_start, t_end);
}

DecayFit fit_decay_envelope(const std::vector<double>& t, const std::vector<double>& norm,
                            double t_start, double t_end) {
  std::vector<double> tp, lp;
  for (size_t i = 1; i + 1 < t.size(); ++i) {
    if (t[i] < t_start || t[i] > t_end) continue;
    if (norm[i] > norm[i - 1] && norm[i] > norm[i + 1] && norm[i] > 0.0) {
      tp.push_back(t[i]);
      lp.push_back(std::log(norm[i]));
    }
  }
  if (tp.size() >= 3) {
    DecayFit f = lsq_log_fit(tp, lp, t_start, t_end);
    f.n_points = static_cast<int>(tp.size());
    return f;
  }
  return fit_decay_rate(t, norm, t_start, t_end);
}

Field random_eigen_field(const Grid& g, const DomainSpec& d, uint64_t seed, int n_modes,
                         double amplitude) {
  Rng rng(seed);
  auto modes = enumerate_modes(d, n_modes);
  Field f = g.make_field();
  for (int j = 0; j < n_modes; ++j) {
    double c = amplitude * rng.sym() / (1.0 + j);
    Field phi = eval_eigenfunction(modes[j], g);
    kernels::active().axpby(c, phi.data(), 1.0, f.data(), f.size());
  }
  return f;
}

Trajectory run_simulation(Simulator& sim, const Field& w0, double horizon, int n_amp) {
  const Grid& g = sim.grid();
  Trajectory tr;
  tr.shifted = sim.state().shifted;
  tr.omega = sim.omega();
  auto modes = enumerate_modes(g.domain(), n_amp);
  std::vector<Field> phis;
  for (auto& m : modes) phis.push_back(eval_eigenfunction(m, g));
  tr.amp.resize(n_amp);

  sim.init(w0);
  auto record = [&]() {
    const SimState& s = sim.state();
    EnergyNorms en = energy_norms(s.w, g);
    tr.t.push_back(s.t);
    tr.l2.push_back(en.l2);
    tr.h1.push_back(en.h1);
    tr.l2_unshifted.push_back(tr.shifted ? std::exp(-tr.omega * s.t) * en.l2 : en.l2);
    for (int j = 0; j < n_amp; ++j) tr.amp[j].push_back(g.quad_inner(s.w, phis[j]));
    tr.u_energy.push_back(sim.control_energy());
  };
  record();
  try {
    while (sim.state().t < horizon - 1e-12) {
      sim.step();
      record();
    }
  } catch (const Error& e) {
    tr.failure = e.what();
  }
  return tr;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open for writing: " + path);
  for (size_t i = 0; i < header.size(); ++i) f << (i ? "," : "") << header[i];
  f << "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) f << (i ? "," : "") << format_g17(row[i]);
    f << "\n";
  }
}

namespace {

std::vector<std::vector<double>> trajectory_rows(const Trajectory& tr) {
  std::vector<std::vector<double>> rows;
  for (size_t i = 0; i < tr.t.size(); ++i) {
    std::vector<double> row{tr.t[i], tr.l2[i], tr.h1[i], tr.l2_unshifted[i]};
    for (const auto& a : tr.amp) row.push_back(a[i]);
    row.push_back(tr.u_energy[i]);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::string> trajectory_header(int n_amp) {
  std::vector<std::string> h{"t", "l2", "h1", "l2_unshifted"};
  for (int j = 1; j <= n_amp; ++j) h.push_back("amp_" + std::to_string(j));
  h.push_back("u_energy_gamma1");
  return h;
}

Field build_w0(const RunConfig& cfg, const Grid& g, uint64_t seed) {
  if (cfg.w0.kind == InitialCondition::Kind::Random)
    return random_eigen_field(g, cfg.domain, seed, cfg.w0.n_modes, cfg.w0.amplitude);
  auto modes = enumerate_modes(cfg.domain, cfg.w0.mode_rank);
  Field f = eval_eigenfunction(modes[cfg.w0.mode_rank - 1], g);
  kernels::active().axpby(0.0, f.data(), cfg.w0.amplitude, f.data(), f.size());
  return f;
}

struct Prepared {
  ValidatedConfig vc;
  Grid grid;
  std::vector<EigenMode> spectrum;
  std::vector<double> lambdas;
  ControllerSpec spec;
};

Prepared prepare(const RunConfig& cfg) {
  ValidatedConfig vc = validate_params(cfg.physics, cfg.domain);
  Grid g = build_grid(cfg.domain, cfg.nx, cfg.ny);
  auto spectrum = enumerate_modes(cfg.domain, 64);
  std::vector<double> lambdas;
  for (auto& m : spectrum) lambdas.push_back(m.lambda);
  double k = cfg.k ? *cfg.k : default_k(cfg.omega, cfg.epsilon, cfg.physics, lambdas);
  return Prepared{vc, std::move(g), std::move(spectrum), std::move(lambdas),
                  ControllerSpec{cfg.omega, cfg.epsilon, k}};
}

Field sample_source(const RunConfig& cfg, const Grid& g) {
  if (cfg.physics.source == PhysicalParams::Source::Zero) return g.make_field();
  auto modes = enumerate_modes(cfg.domain, 1);
  Field target = eval_eigenfunction(modes[0], g);
  kernels::active().axpby(0.0, target.data(), cfg.physics.source_amplitude, target.data(),
                          target.size());
  return steady_operator(target, cfg.physics, g);
}

}  // namespace

CompareResult compare_open_closed(const RunConfig& cfg, uint64_t seed) {
  Prepared pr = prepare(cfg);
  CompareResult res;
  res.no_memory_expected = cfg.physics.eta * pr.lambdas[0] + cfg.physics.beta * cfg.physics.gamma;
  res.controller_unnecessary = !(cfg.omega > res.no_memory_expected);

  Controller ctrl = synthesize(pr.spec, cfg.physics, cfg.domain, pr.grid);
  res.predicted_closed = cfg.omega + predict_decay(ctrl, cfg.physics);
  res.predicted_open = -spectral_abscissa(tail_mode(1, pr.lambdas[0], 0.0, cfg.physics));

  Field w0 = build_w0(cfg, pr.grid, seed);
  const double T_closed = cfg.horizon;
  const double T_open = std::max(cfg.horizon, 8.0);
  double fit0 = cfg.fit_start.value_or(0.2 * T_closed);
  double fit1 = cfg.fit_end.value_or(T_closed);

  {
    SimOptions opt{true, false, false, cfg.omega, cfg.dt, cfg.scheme};
    Simulator sim(pr.grid, cfg.physics, &ctrl, opt);
    Trajectory tr = run_simulation(sim, w0, T_closed, ctrl.N() + 2);
    res.closed = fit_decay_rate(tr.t, tr.l2_unshifted, fit0, fit1);
  }
  {
    SimOptions opt{false, false, false, 0.0, cfg.dt, cfg.scheme};
    Simulator sim(pr.grid, cfg.physics, nullptr, opt);
    Trajectory tr = run_simulation(sim, w0, T_open, ctrl.N() + 2);
    res.open_plain = fit_decay_rate(tr.t, tr.l2, fit0, fit1);
    res.open_envelope = fit_decay_envelope(tr.t, tr.l2, fit0, T_open);
  }
  {
    SimOptions opt{false, false, true, 0.0, cfg.dt, cfg.scheme};
    Simulator sim(pr.grid, cfg.physics, nullptr, opt);
    Trajectory tr = run_simulation(sim, w0, T_closed, ctrl.N() + 2);
    res.no_memory = fit_decay_rate(tr.t, tr.l2, fit0, fit1);
  }
  return res;
}

int run_scenario(const Scenario& s) {
  namespace fs = std::filesystem;
  try {
    fs::create_directories(s.out_dir);
    RunConfig cfg = load_config(s.config_path);
    std::ofstream report(fs::path(s.out_dir) / "report.txt");
    report << "kernels: " << kernels::active_name() << "\n";
    report << "seed: " << s.seed << "\n";

    Prepared pr = prepare(cfg);

    auto synth_csv = [&](const Controller& ctrl, const ConditionReport& rep) {
      std::vector<std::vector<double>> rows;
      for (int i = 1; i <= ctrl.N(); ++i) {
        rows.push_back({static_cast<double>(i), ctrl.modes()[i - 1].lambda, ctrl.mu(i - 1),
                        rep.A[i - 1], rep.B[i - 1], rep.omega0,
                        ctrl.gram_condition_number()});
      }
      write_csv((fs::path(s.out_dir) / "controller.csv").string(),
                {"j", "lambda", "mu", "A", "B", "omega0", "gram_condition"}, rows);
    };

    switch (s.kind) {
      case Scenario::Kind::Synthesize: {
        ConditionReport rep = check_gain_conditions(pr.spec, cfg.physics, pr.lambdas);
        Controller ctrl = synthesize(pr.spec, cfg.physics, cfg.domain, pr.grid);
        synth_csv(ctrl, rep);
        report << "N = " << ctrl.N() << "\nomega = " << pr.spec.omega
               << "\nepsilon = " << pr.spec.epsilon << "\nk = " << pr.spec.k
               << "\nomega0 = " << rep.omega0
               << "\ngram_condition = " << ctrl.gram_condition_number()
               << "\npredicted_decay_margin = " << predict_decay(ctrl, cfg.physics)
               << "\nconditions_pass = " << (rep.pass ? "yes" : "no") << "\n";
        for (const auto& w : rep.warnings) report << "warning: " << w << "\n";
        report << "columns: controller.csv = j, lambda_j, mu_j, A_j, B_j\n";
        break;
      }
      case Scenario::Kind::SimulateLinear:
      case Scenario::Kind::SimulateNonlinear: {
        const bool nonlinear = (s.kind == Scenario::Kind::SimulateNonlinear);
        ConditionReport rep = check_gain_conditions(pr.spec, cfg.physics, pr.lambdas);
        Controller ctrl = synthesize(pr.spec, cfg.physics, cfg.domain, pr.grid);
        synth_csv(ctrl, rep);

        Field y_inf = pr.grid.make_field();
        bool have_yinf = false;
        if (nonlinear && cfg.physics.source == PhysicalParams::Source::Manufactured) {
          Field f_s = sample_source(cfg, pr.grid);
          SteadyState st = solve_steady_state(f_s, cfg.physics, pr.grid);
          y_inf = std::move(st.y_inf);
          have_yinf = true;
          report << "steady_state_residual = " << st.residual
                 << "\nsteady_state_iterations = " << st.iterations << "\n";
        }

        SimOptions opt{true, nonlinear, false, cfg.omega, cfg.dt, cfg.scheme};
        Simulator sim(pr.grid, cfg.physics, &ctrl, opt, have_yinf ? &y_inf : nullptr);
        Field w0 = build_w0(cfg, pr.grid, s.seed);
        Trajectory tr = run_simulation(sim, w0, cfg.horizon, ctrl.N() + 2);
        write_csv((fs::path(s.out_dir) / "trajectory.csv").string(),
                  trajectory_header(ctrl.N() + 2), trajectory_rows(tr));

        double fit0 = cfg.fit_start.value_or(0.2 * cfg.horizon);
        double fit1 = cfg.fit_end.value_or(cfg.horizon);
        if (!tr.failure.empty()) {
          report << "run stopped early: " << tr.failure << "\n";
          report << "status = unstable\n";
        } else {
          DecayFit fit = fit_decay_rate(tr.t, tr.l2_unshifted, fit0, fit1);
          report << "fitted_rate = " << fit.rate << "\nfit_r2 = " << fit.r2
                 << "\nfit_window = [" << fit.t_start << ", " << fit.t_end << "]\n"
                 << "target_omega = " << cfg.omega << "\n";
        }
        report << "columns: trajectory.csv = t, l2, h1, l2_unshifted, amp_j (j = 1.."
               << ctrl.N() + 2 << "), u_energy_gamma1\n";
        break;
      }
      case Scenario::Kind::AnalyzeModes: {
        ConditionReport rep = check_gain_conditions(pr.spec, cfg.physics, pr.lambdas);
        std::vector<std::vector<double>> rows;
        for (int i = 1; i <= rep.N + 5; ++i) {
          ModeSystem ms = (i <= rep.N)
                              ? controlled_mode(i, pr.spec, cfg.physics, pr.lambdas)
                              : tail_mode(i, pr.lambdas[i - 1], pr.spec.omega, cfg.physics);
          rows.push_back({static_cast<double>(i), pr.lambdas[i - 1], ms.A, ms.B,
                          spectral_abscissa(ms), i <= rep.N ? 1.0 : 0.0});
        }
        write_csv((fs::path(s.out_dir) / "modes.csv").string(),
                  {"i", "lambda", "A", "B", "abscissa", "controlled"}, rows);
        report << "N = " << rep.N << "\nomega0 = " << rep.omega0 << "\n";
        report << "columns: modes.csv = i, lambda_i, A_i, B_i, abscissa, controlled(1)|tail(0)\n";
        break;
      }
      case Scenario::Kind::Validate: {
        bool all = (s.validate_which == "all");
        if (all || s.validate_which == "eigen") {
          auto modes = enumerate_modes(cfg.domain, 8);
          std::vector<std::vector<double>> rows;
          std::vector<double> lam3;
          for (int r = 0; r < 8; ++r) {
            double resid = eigen_residual(modes[r], pr.grid);
            double cond = 0.0;
            if (r < 3) {
              std::vector<EigenMode> head(modes.begin(), modes.begin() + r + 1);
              cond = gram_condition(trace_gram(head, pr.grid), r + 1);
            }
            rows.push_back({static_cast<double>(modes[r].rank),
                            static_cast<double>(modes[r].m), static_cast<double>(modes[r].n),
                            modes[r].lambda, resid, cond});
            lam3.push_back(modes[r].lambda);
          }
          write_csv((fs::path(s.out_dir) / "eigen.csv").string(),
                    {"rank", "m", "n", "lambda", "residual", "gram_condition"}, rows);
          bool ok = true;
          for (auto& row : rows) ok = ok && row[4] <= 1e-2 * row[3];
          report << "eigen residuals within 1e-2*lambda: " << (ok ? "pass" : "FAIL") << "\n";
        }
        if (all || s.validate_which == "lift") {
          Controller ctrl = synthesize(pr.spec, cfg.physics, cfg.domain, pr.grid);
          auto M = verify_duality(ctrl, pr.spec.k, cfg.physics.eta, pr.grid);
          int N = ctrl.N();
          std::vector<std::vector<double>> rows;
          double defect = 0.0;
          for (int i = 0; i < N; ++i) {
            std::vector<double> row{static_cast<double>(i + 1)};
            for (int j = 0; j < N; ++j) {
              row.push_back(M[static_cast<size_t>(i) * N + j]);
              double target = (i == j) ? -cfg.physics.eta /
                                             (pr.spec.k + cfg.physics.eta * ctrl.modes()[i].lambda)
                                       : 0.0;
              defect = std::max(defect, std::fabs(M[static_cast<size_t>(i) * N + j] - target));
            }
            rows.push_back(std::move(row));
          }
          std::vector<std::string> header{"i"};
          for (int j = 1; j <= N; ++j) header.push_back("DPhi_" + std::to_string(j));
          write_csv((fs::path(s.out_dir) / "duality.csv").string(), header, rows);
          report << "duality defect (max abs) = " << defect << ": "
                 << (defect <= 5e-3 ? "pass" : "FAIL") << "\n";

          double biorth = 0.0;
          for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) {
              BoundaryTrace dphi = normal_derivative_trace(ctrl.modes()[j], pr.grid);
              biorth = std::max(
                  biorth, std::fabs(ctrl.actuator(i).inner(dphi) - (i == j ? 1.0 : 0.0)));
            }
          double h2 = 10.0 * pr.grid.hx() * pr.grid.hx();
          report << "actuator biorthogonality defect = " << biorth << ": "
                 << (biorth <= h2 ? "pass" : "FAIL") << "\n";
        }
        if (all) {
          ConditionReport rep = check_gain_conditions(pr.spec, cfg.physics, pr.lambdas);
          report << "gain conditions: " << (rep.pass ? "pass" : "FAIL") << "\n";

          // memory recursion against direct quadrature on a short history
          Grid small = build_grid(cfg.domain, 3, 3);
          Field mem = small.make_field(), prev = small.make_field(), next = small.make_field();
          double direct = 0.0;
          const double dtm = 1e-3;
          for (int step = 0; step < 500; ++step) {
            double va = std::cos(3.0 * step * dtm), vb = std::cos(3.0 * (step + 1) * dtm);
            for (auto& v : prev.v) v = va;
            for (auto& v : next.v) v = vb;
            memory_update(mem, prev, next, dtm, cfg.physics.delta);
          }
          for (int step = 0; step <= 500; ++step) {
            double wq = (step == 0 || step == 500) ? 0.5 : 1.0;
            direct += wq * dtm * std::exp(-cfg.physics.delta * (500 - step) * dtm) *
                      std::cos(3.0 * step * dtm);
          }
          double mrel = std::fabs(mem.v[0] - direct) / std::fabs(direct);
          report << "memory recursion vs quadrature rel = " << mrel << ": "
                 << (mrel <= 1e-4 ? "pass" : "FAIL") << "\n";
        }
        break;
      }
      case Scenario::Kind::Compare: {
        CompareResult res = compare_open_closed(cfg, s.seed);
        report << "closed_rate = " << res.closed.rate << " (r2 = " << res.closed.r2 << ")\n"
               << "open_envelope_rate = " << res.open_envelope.rate << "\n"
               << "open_plain_rate = " << res.open_plain.rate << "\n"
               << "no_memory_rate = " << res.no_memory.rate << "\n"
               << "predicted_closed = " << res.predicted_closed << "\n"
               << "predicted_open = " << res.predicted_open << "\n"
               << "no_memory_expected = " << res.no_memory_expected << "\n"
               << "closed_exceeds_open = "
               << (res.closed.rate > res.open_envelope.rate ? "yes" : "no") << "\n";
        if (res.controller_unnecessary)
          report << "note: controller unnecessary at this omega (open loop already faster)\n";
        break;
      }
    }
    return 0;
  } catch (const Error& e) {
    std::ofstream err(std::filesystem::path(s.out_dir) / "error.txt");
    err << e.what() << "\n";
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

}  // namespace gbh
