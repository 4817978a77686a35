#include "gbh/config.hpp"

#include <fstream>
#include <istream>
#include <sstream>

#include "gbh/errors.hpp"

namespace gbh {
namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_number(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' expects a number, got '" + v + "'");
  }
}

int parse_int(const std::string& key, const std::string& v) {
  double x = parse_number(key, v);
  int i = static_cast<int>(x);
  if (static_cast<double>(i) != x)
    throw ConfigError("config: key '" + key + "' expects an integer, got '" + v + "'");
  return i;
}

}  // namespace

RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  std::string line, section;
  int lineno = 0;
  bool seen_physics = false, seen_domain = false, seen_grid = false;

  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(lineno) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section == "physics") seen_physics = true;
      else if (section == "domain") seen_domain = true;
      else if (section == "grid") seen_grid = true;
      else if (section != "controller" && section != "sim")
        throw ConfigError("config line " + std::to_string(lineno) + ": unknown section [" +
                          section + "]");
      continue;
    }

    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (section.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": key outside any section");

    auto unknown = [&]() -> ConfigError {
      return ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key +
                         "' in section [" + section + "]");
    };

    if (section == "physics") {
      if (key == "eta") cfg.physics.eta = parse_number(key, val);
      else if (key == "delta") cfg.physics.delta = parse_number(key, val);
      else if (key == "a") cfg.physics.a = parse_number(key, val);
      else if (key == "beta") cfg.physics.beta = parse_number(key, val);
      else if (key == "gamma") cfg.physics.gamma = parse_number(key, val);
      else if (key == "kappa") cfg.physics.kappa = parse_int(key, val);
      else if (key == "f_s") {
        if (val == "zero") cfg.physics.source = PhysicalParams::Source::Zero;
        else if (val == "manufactured") cfg.physics.source = PhysicalParams::Source::Manufactured;
        else throw ConfigError("config: f_s must be 'zero' or 'manufactured'");
      } else if (key == "f_s_amplitude") cfg.physics.source_amplitude = parse_number(key, val);
      else throw unknown();
    } else if (section == "domain") {
      if (key == "dim") cfg.domain.dim = parse_int(key, val);
      else if (key == "Lx") cfg.domain.Lx = parse_number(key, val);
      else if (key == "Ly") cfg.domain.Ly = parse_number(key, val);
      else throw unknown();
    } else if (section == "grid") {
      if (key == "nx") cfg.nx = parse_int(key, val);
      else if (key == "ny") cfg.ny = parse_int(key, val);
      else throw unknown();
    } else if (section == "controller") {
      if (key == "omega") cfg.omega = parse_number(key, val);
      else if (key == "epsilon") cfg.epsilon = parse_number(key, val);
      else if (key == "k") {
        if (val == "auto") cfg.k.reset();
        else cfg.k = parse_number(key, val);
      } else throw unknown();
    } else if (section == "sim") {
      if (key == "dt") cfg.dt = parse_number(key, val);
      else if (key == "T") cfg.horizon = parse_number(key, val);
      else if (key == "scheme") {
        if (val == "cn") cfg.scheme = SimOptions::Scheme::CN;
        else if (val == "be") cfg.scheme = SimOptions::Scheme::BE;
        else throw ConfigError("config: scheme must be 'cn' or 'be'");
      } else if (key == "w0") {
        std::istringstream ss(val);
        std::string kind;
        ss >> kind;
        if (kind == "mode") {
          cfg.w0.kind = InitialCondition::Kind::Mode;
          if (!(ss >> cfg.w0.mode_rank)) cfg.w0.mode_rank = 1;
        } else if (kind == "random") {
          cfg.w0.kind = InitialCondition::Kind::Random;
          if (!(ss >> cfg.w0.n_modes)) cfg.w0.n_modes = 6;
        } else {
          throw ConfigError("config: w0 must be 'mode <rank>' or 'random <n>'");
        }
      } else if (key == "w0_amplitude") cfg.w0.amplitude = parse_number(key, val);
      else if (key == "fit_start") cfg.fit_start = parse_number(key, val);
      else if (key == "fit_end") cfg.fit_end = parse_number(key, val);
      else throw unknown();
    }
  }

  if (!seen_physics) throw ConfigError("config: missing [physics] section");
  if (!seen_domain) throw ConfigError("config: missing [domain] section");
  if (!seen_grid) throw ConfigError("config: missing [grid] section");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot open '" + path + "'");
  return parse_config(f);
}

}  // namespace gbh
