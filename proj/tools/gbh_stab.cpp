// Command-line front end: scenario runner over a key = value config file.
//
//   gbh-stab <subcommand> --config <path> --out <dir> [--seed <n>]
//
// Subcommands: synthesize, simulate-linear, simulate-nonlinear,
// analyze-modes, validate [eigen|lift|all], compare.

#include <CLI11.hpp>
#include <cstdio>

#include "gbh/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"boundary feedback synthesis and closed-loop simulation"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  uint64_t seed = 0;
  std::string which = "all";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "config file path")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "seed for random-field generation");
  };

  auto* synth = app.add_subcommand("synthesize", "synthesize the boundary feedback");
  auto* simlin = app.add_subcommand("simulate-linear", "closed-loop linear run");
  auto* simnl = app.add_subcommand("simulate-nonlinear", "closed-loop nonlinear run");
  auto* modes = app.add_subcommand("analyze-modes", "per-mode coefficients and abscissas");
  auto* validate = app.add_subcommand("validate", "module validation checks");
  auto* compare = app.add_subcommand("compare", "open versus closed loop comparison");
  for (auto* sub : {synth, simlin, simnl, modes, validate, compare}) add_common(sub);
  validate->add_option("which", which, "eigen | lift | all")
      ->check(CLI::IsMember({"eigen", "lift", "all"}));

  CLI11_PARSE(app, argc, argv);

  gbh::Scenario s;
  s.config_path = config_path;
  s.out_dir = out_dir;
  s.seed = seed;
  s.validate_which = which;
  if (synth->parsed()) s.kind = gbh::Scenario::Kind::Synthesize;
  else if (simlin->parsed()) s.kind = gbh::Scenario::Kind::SimulateLinear;
  else if (simnl->parsed()) s.kind = gbh::Scenario::Kind::SimulateNonlinear;
  else if (modes->parsed()) s.kind = gbh::Scenario::Kind::AnalyzeModes;
  else if (validate->parsed()) s.kind = gbh::Scenario::Kind::Validate;
  else if (compare->parsed()) s.kind = gbh::Scenario::Kind::Compare;

  int rc = gbh::run_scenario(s);
  if (rc == 0) std::printf("wrote %s\n", out_dir.c_str());
  return rc;
}
