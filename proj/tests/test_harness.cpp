#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gbh/harness.hpp"
#include "gbh/rng.hpp"

using namespace gbh;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path write_config(const std::string& body, const std::string& name) {
  fs::path p = fs::temp_directory_path() / name;
  std::ofstream f(p);
  f << body;
  return p;
}

const char* kSmallConfig = R"(
[physics]
eta = 1
delta = 1
a = 1
beta = 1
gamma = 0.5
kappa = 1
[domain]
dim = 2
Lx = 1
Ly = 2
[grid]
nx = 15
ny = 15
[controller]
omega = 6
epsilon = 0.1
k = 0.1
[sim]
dt = 1e-3
T = 0.05
w0 = random 4
w0_amplitude = 1.0
)";

}  // namespace

TEST_CASE("decay fitting") {
  std::vector<double> t, n;
  for (int i = 0; i <= 500; ++i) {
    t.push_back(i * 0.01);
    n.push_back(std::exp(-2.0 * t.back()));
  }
  DecayFit f = fit_decay_rate(t, n, 0.0, 5.0);
  CHECK(f.rate == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-9));

  SUBCASE("modulated exponential over a transient-free window") {
    std::vector<double> nm;
    for (double ti : t) nm.push_back(std::exp(-2.0 * ti) * (1.0 + 0.1 * std::sin(10.0 * ti)));
    DecayFit fm = fit_decay_rate(t, nm, 1.0, 5.0);
    CHECK(fm.rate == doctest::Approx(2.0).epsilon(0.025));
  }
  SUBCASE("zero series is degenerate") {
    std::vector<double> z(t.size(), 0.0);
    CHECK_THROWS_AS(fit_decay_rate(t, z, 0.0, 5.0), DegenerateSeries);
  }
  SUBCASE("too few samples is degenerate") {
    CHECK_THROWS_AS(fit_decay_rate(t, n, 0.0, 0.05), DegenerateSeries);
  }
  SUBCASE("envelope fit on a rectified oscillation") {
    std::vector<double> nm;
    for (double ti : t) nm.push_back(std::exp(-2.0 * ti) * std::fabs(std::cos(4.0 * ti)) + 1e-30);
    DecayFit fe = fit_decay_envelope(t, nm, 0.0, 5.0);
    CHECK(fe.rate == doctest::Approx(2.0).epsilon(0.02));
  }
}

TEST_CASE("seeded eigen-expansion fields are reproducible") {
  DomainSpec d;
  Grid g = build_grid(d, 15, 15);
  Field a = random_eigen_field(g, d, 42, 6, 1.0);
  Field b = random_eigen_field(g, d, 42, 6, 1.0);
  Field c = random_eigen_field(g, d, 43, 6, 1.0);
  double diff_same = 0.0, diff_other = 0.0;
  for (size_t q = 0; q < a.size(); ++q) {
    diff_same = std::max(diff_same, std::fabs(a.v[q] - b.v[q]));
    diff_other = std::max(diff_other, std::fabs(a.v[q] - c.v[q]));
  }
  CHECK(diff_same == 0.0);
  CHECK(diff_other > 1e-6);
}

TEST_CASE("csv writing: header plus 17 significant digits round-trip") {
  fs::path p = fs::temp_directory_path() / "gbh_csv_test.csv";
  double val = 0.1234567890123456789;
  write_csv(p.string(), {"t", "x"}, {{1.0, val}, {2.0, -val}});
  std::ifstream f(p);
  std::string header, row;
  std::getline(f, header);
  CHECK(header == "t,x");
  std::getline(f, row);
  double back = std::stod(row.substr(row.find(',') + 1));
  CHECK(back == val);
}

TEST_CASE("scenario runner writes deterministic artifacts") {
  fs::path cfg = write_config(kSmallConfig, "gbh_small.cfg");
  Scenario s;
  s.kind = Scenario::Kind::SimulateLinear;
  s.config_path = cfg.string();
  s.seed = 7;

  fs::path out1 = fs::temp_directory_path() / "gbh_run1";
  fs::path out2 = fs::temp_directory_path() / "gbh_run2";
  fs::remove_all(out1);
  fs::remove_all(out2);
  s.out_dir = out1.string();
  REQUIRE(run_scenario(s) == 0);
  s.out_dir = out2.string();
  REQUIRE(run_scenario(s) == 0);

  CHECK(slurp(out1 / "trajectory.csv") == slurp(out2 / "trajectory.csv"));
  CHECK(!slurp(out1 / "trajectory.csv").empty());
  std::string header = slurp(out1 / "trajectory.csv").substr(0, 2);
  CHECK(header == "t,");  // header row present

  SUBCASE("different seed, different trajectory") {
    Scenario s3 = s;
    s3.seed = 8;
    fs::path out3 = fs::temp_directory_path() / "gbh_run3";
    fs::remove_all(out3);
    s3.out_dir = out3.string();
    REQUIRE(run_scenario(s3) == 0);
    CHECK(slurp(out1 / "trajectory.csv") != slurp(out3 / "trajectory.csv"));
  }
}

TEST_CASE("scenario runner surfaces config errors as nonzero exits") {
  fs::path cfg = write_config("[domain]\nLx = 1\n[grid]\nnx = 5\nny = 5\n", "gbh_bad.cfg");
  Scenario s;
  s.kind = Scenario::Kind::Synthesize;
  s.config_path = cfg.string();
  s.out_dir = (fs::temp_directory_path() / "gbh_bad_out").string();
  CHECK(run_scenario(s) == 1);
}

TEST_CASE("analyze and synthesize scenarios emit their tables") {
  fs::path cfg = write_config(kSmallConfig, "gbh_small2.cfg");
  Scenario s;
  s.config_path = cfg.string();

  fs::path out = fs::temp_directory_path() / "gbh_modes_out";
  fs::remove_all(out);
  s.kind = Scenario::Kind::AnalyzeModes;
  s.out_dir = out.string();
  REQUIRE(run_scenario(s) == 0);
  std::string csv = slurp(out / "modes.csv");
  CHECK(csv.find("i,lambda,A,B,abscissa,controlled") == 0);

  fs::path out2 = fs::temp_directory_path() / "gbh_synth_out";
  fs::remove_all(out2);
  s.kind = Scenario::Kind::Synthesize;
  s.out_dir = out2.string();
  REQUIRE(run_scenario(s) == 0);
  CHECK(slurp(out2 / "controller.csv").find("j,lambda,mu,A,B") == 0);
  CHECK(slurp(out2 / "report.txt").find("omega0") != std::string::npos);
}
