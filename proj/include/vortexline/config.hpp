#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "vortexline/evolution.hpp"
#include "vortexline/format.hpp"
#include "vortexline/grid.hpp"
#include "vortexline/state.hpp"

namespace vortexline {

enum class ScenarioKind {
  evolve,
  dispersion,
  validity,
  observables,
  propagate,
  biot_savart_compare,
  phase_divergence,
};

inline const char* to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::evolve: return "evolve";
    case ScenarioKind::dispersion: return "dispersion";
    case ScenarioKind::validity: return "validity";
    case ScenarioKind::observables: return "observables";
    case ScenarioKind::propagate: return "propagate";
    case ScenarioKind::biot_savart_compare: return "biot-savart-compare";
    case ScenarioKind::phase_divergence: return "phase-divergence";
  }
  return "?";
}

inline ScenarioKind scenario_from_string(const std::string& s) {
  for (ScenarioKind k :
       {ScenarioKind::evolve, ScenarioKind::dispersion, ScenarioKind::validity,
        ScenarioKind::observables, ScenarioKind::propagate,
        ScenarioKind::biot_savart_compare, ScenarioKind::phase_divergence})
    if (s == to_string(k)) return k;
  throw std::invalid_argument("unknown scenario '" + s + "'");
}

enum class InitKind { kelvin, wavepacket, file };

// Fully validated description of one run. Field defaults are the
// nondimensional test setup (Gamma = rho = 1, log_eps = 0.8, L = 2 pi).
struct ScenarioConfig {
  ScenarioKind scenario = ScenarioKind::evolve;
  ZGrid grid{2.0 * std::numbers::pi, 64};
  FluidParams fluid;

  InitKind init_type = InitKind::kelvin;
  KelvinWaveSpec init_kelvin{0.1, 1, 0.0};
  double init_center = 0.0;  // wavepacket; 0 means L/2
  double init_width = 0.0;
  int init_carrier = 0;
  std::string init_path;  // file

  SolverConfig solver;
  long output_cadence = 1;
  bool output_snapshots = false;

  double validity_amplitude = 0.0;
  double validity_wavenumber = 0.0;
  double validity_horizon = 0.0;

  double dispersion_amplitude = 0.1;
  int dispersion_max_mode = 0;  // 0 means grid.count/3

  double propagate_time = 0.0;
  int propagate_slices = 1;

  int biot_images = 1;

  // every key=value pair after defaulting, in canonical order
  std::vector<std::pair<std::string, std::string>> resolved;
};

namespace detail {

struct RawConfig {
  // key -> (value, line number)
  std::map<std::string, std::pair<std::string, int>> entries;

  std::optional<std::string> take(const std::string& key) {
    auto it = entries.find(key);
    if (it == entries.end()) return std::nullopt;
    std::string v = it->second.first;
    entries.erase(it);
    return v;
  }
};

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline RawConfig parse_raw(const std::string& text) {
  RawConfig raw;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected 'key = value', got '" +
                                  stripped + "'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": empty key");
    if (value.empty())
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": empty value for '" + key + "'");
    if (raw.entries.count(key))
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": duplicate key '" + key + "'");
    raw.entries.emplace(key, std::make_pair(value, lineno));
  }
  return raw;
}

inline double parse_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const char* begin = v.data();
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr != end)
    throw std::invalid_argument("config key '" + key + "': '" + v +
                                "' is not a number");
  return out;
}

inline long parse_long(const std::string& key, const std::string& v) {
  long out = 0;
  const char* begin = v.data();
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr != end)
    throw std::invalid_argument("config key '" + key + "': '" + v +
                                "' is not an integer");
  return out;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  throw std::invalid_argument("config key '" + key + "': '" + v +
                              "' is not a boolean (true/false)");
}

}  // namespace detail

// Parse and validate the flat key = value scenario description. Unknown
// keys are rejected; every referenced parameter is checked against its
// module precondition with a field-level message.
inline ScenarioConfig load_config(const std::string& text) {
  detail::RawConfig raw = detail::parse_raw(text);
  ScenarioConfig cfg;

  auto take_double = [&raw](const std::string& key, double def) {
    auto v = raw.take(key);
    return v ? detail::parse_double(key, *v) : def;
  };
  auto take_long = [&raw](const std::string& key, long def) {
    auto v = raw.take(key);
    return v ? detail::parse_long(key, *v) : def;
  };
  auto take_bool = [&raw](const std::string& key, bool def) {
    auto v = raw.take(key);
    return v ? detail::parse_bool(key, *v) : def;
  };

  {
    auto v = raw.take("scenario");
    if (!v) throw std::invalid_argument("config: missing required key 'scenario'");
    cfg.scenario = scenario_from_string(*v);
  }

  const double length = take_double("grid.length", 2.0 * std::numbers::pi);
  const long count = take_long("grid.count", 64);
  try {
    cfg.grid = ZGrid(length, static_cast<int>(count));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("config key 'grid.count'/'grid.length': ") +
                                e.what());
  }

  cfg.fluid.circulation = take_double("fluid.circulation", 1.0);
  cfg.fluid.density = take_double("fluid.density", 1.0);
  cfg.fluid.log_eps = take_double("fluid.log_eps", 0.8);
  cfg.fluid.core_radius = take_double("fluid.core_radius", 1e-4);
  try {
    cfg.fluid.validate();
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("config section 'fluid': ") + e.what());
  }

  {
    auto v = raw.take("init.type");
    if (v) {
      if (*v == "kelvin") cfg.init_type = InitKind::kelvin;
      else if (*v == "wavepacket") cfg.init_type = InitKind::wavepacket;
      else if (*v == "file") cfg.init_type = InitKind::file;
      else
        throw std::invalid_argument("config key 'init.type': unknown value '" +
                                    *v + "'");
    }
  }
  cfg.init_kelvin.amplitude = take_double("init.amplitude", 0.1);
  cfg.init_kelvin.mode = static_cast<int>(take_long("init.mode", 1));
  cfg.init_kelvin.phase = take_double("init.phase", 0.0);
  cfg.init_center = take_double("init.center", cfg.grid.length / 2.0);
  cfg.init_width = take_double("init.width", cfg.grid.length / 20.0);
  cfg.init_carrier = static_cast<int>(take_long("init.carrier", 0));
  {
    auto v = raw.take("init.path");
    if (v) cfg.init_path = *v;
  }
  if (cfg.init_type == InitKind::kelvin) {
    if (cfg.init_kelvin.amplitude < 0.0)
      throw std::invalid_argument("config key 'init.amplitude': must be >= 0");
    if (std::abs(cfg.init_kelvin.mode) > cfg.grid.count / 2 - 1)
      throw std::invalid_argument(
          "config key 'init.mode': mode not resolvable on grid.count = " +
          std::to_string(cfg.grid.count));
  }
  if (cfg.init_type == InitKind::wavepacket) {
    if (!(cfg.init_width >= 4.0 * cfg.grid.dz()))
      throw std::invalid_argument("config key 'init.width': must be >= 4 dz");
    if (!(cfg.init_center > 0.0) || !(cfg.init_center < cfg.grid.length))
      throw std::invalid_argument(
          "config key 'init.center': must lie inside (0, grid.length)");
  }
  if (cfg.init_type == InitKind::file && cfg.init_path.empty())
    throw std::invalid_argument(
        "config key 'init.path': required when init.type = file");

  cfg.solver.dt = take_double("solver.dt", 1e-3);
  cfg.solver.steps = take_long("solver.steps", 1000);
  {
    auto v = raw.take("solver.scheme");
    if (v) {
      if (*v == "linear-spectral") cfg.solver.scheme = Scheme::linear_spectral;
      else if (*v == "nonlinear-rk4") cfg.solver.scheme = Scheme::nonlinear_rk4;
      else
        throw std::invalid_argument(
            "config key 'solver.scheme': unknown value '" + *v + "'");
    }
  }
  cfg.solver.dealias = take_bool("solver.dealias", true);
  try {
    cfg.solver.validate();
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("config key 'solver.dt'/'solver.steps': ") +
                                e.what());
  }

  cfg.output_cadence = take_long("output.cadence", 1);
  if (cfg.output_cadence < 1)
    throw std::invalid_argument("config key 'output.cadence': must be >= 1");
  cfg.output_snapshots = take_bool("output.snapshots", false);

  cfg.validity_amplitude = take_double("validity.amplitude", 0.0);
  cfg.validity_wavenumber = take_double("validity.wavenumber", 0.0);
  cfg.validity_horizon = take_double("validity.horizon", 0.0);
  if (cfg.scenario == ScenarioKind::validity) {
    if (!(cfg.validity_amplitude > 0.0))
      throw std::invalid_argument("config key 'validity.amplitude': must be > 0");
    if (!(cfg.validity_wavenumber > 0.0))
      throw std::invalid_argument("config key 'validity.wavenumber': must be > 0");
    if (!(cfg.validity_horizon > 0.0))
      throw std::invalid_argument("config key 'validity.horizon': must be > 0");
    const double d = cfg.validity_wavenumber * cfg.validity_wavenumber *
                     cfg.validity_horizon * cfg.fluid.circulation *
                     cfg.fluid.log_eps;
    if (!(d > 2.0 * std::numbers::pi * std::numbers::pi))
      throw std::invalid_argument(
          "config key 'validity.horizon': k^2 T0 Gamma log_eps = " +
          std::to_string(d) + " must exceed 2 pi^2");
  }

  cfg.dispersion_amplitude = take_double("dispersion.amplitude", 0.1);
  cfg.dispersion_max_mode =
      static_cast<int>(take_long("dispersion.max_mode", 0));
  if (cfg.scenario == ScenarioKind::dispersion) {
    if (cfg.dispersion_amplitude < 0.0)
      throw std::invalid_argument("config key 'dispersion.amplitude': must be >= 0");
    if (cfg.dispersion_max_mode == 0) cfg.dispersion_max_mode = cfg.grid.count / 3;
    if (cfg.dispersion_max_mode < 1 ||
        cfg.dispersion_max_mode > cfg.grid.count / 2 - 1)
      throw std::invalid_argument(
          "config key 'dispersion.max_mode': must be in [1, grid.count/2 - 1]");
  }

  cfg.propagate_time = take_double("propagate.time", 0.0);
  cfg.propagate_slices = static_cast<int>(take_long("propagate.slices", 1));
  if (cfg.scenario == ScenarioKind::propagate) {
    if (!(cfg.propagate_time > 0.0))
      throw std::invalid_argument("config key 'propagate.time': must be > 0");
    if (cfg.propagate_slices < 1)
      throw std::invalid_argument("config key 'propagate.slices': must be >= 1");
  }

  cfg.biot_images = static_cast<int>(take_long("biot.images", 1));
  if (cfg.biot_images < 1)
    throw std::invalid_argument("config key 'biot.images': must be >= 1");
  if (cfg.scenario == ScenarioKind::biot_savart_compare) {
    if (cfg.init_type != InitKind::kelvin)
      throw std::invalid_argument(
          "config key 'init.type': biot-savart-compare requires a kelvin "
          "initial condition");
    if (!(cfg.init_kelvin.amplitude > 0.0) || cfg.init_kelvin.mode == 0)
      throw std::invalid_argument(
          "config key 'init.amplitude'/'init.mode': biot-savart-compare "
          "requires a non-degenerate helix");
  }
  if (cfg.scenario == ScenarioKind::phase_divergence &&
      cfg.init_type != InitKind::kelvin)
    throw std::invalid_argument(
        "config key 'init.type': phase-divergence requires a kelvin initial "
        "condition");

  if (!raw.entries.empty()) {
    const auto& [key, value_line] = *raw.entries.begin();
    throw std::invalid_argument("config line " +
                                std::to_string(value_line.second) +
                                ": unknown key '" + key + "'");
  }

  // canonical resolved form, sufficient to reproduce the run
  auto put = [&cfg](const std::string& k, const std::string& v) {
    cfg.resolved.emplace_back(k, v);
  };
  put("scenario", to_string(cfg.scenario));
  put("grid.length", format_double(cfg.grid.length));
  put("grid.count", std::to_string(cfg.grid.count));
  put("fluid.circulation", format_double(cfg.fluid.circulation));
  put("fluid.density", format_double(cfg.fluid.density));
  put("fluid.log_eps", format_double(cfg.fluid.log_eps));
  put("fluid.core_radius", format_double(cfg.fluid.core_radius));
  put("init.type", cfg.init_type == InitKind::kelvin      ? "kelvin"
                   : cfg.init_type == InitKind::wavepacket ? "wavepacket"
                                                            : "file");
  if (cfg.init_type == InitKind::kelvin) {
    put("init.amplitude", format_double(cfg.init_kelvin.amplitude));
    put("init.mode", std::to_string(cfg.init_kelvin.mode));
    put("init.phase", format_double(cfg.init_kelvin.phase));
  } else if (cfg.init_type == InitKind::wavepacket) {
    put("init.center", format_double(cfg.init_center));
    put("init.width", format_double(cfg.init_width));
    put("init.carrier", std::to_string(cfg.init_carrier));
  } else {
    put("init.path", cfg.init_path);
  }
  put("solver.dt", format_double(cfg.solver.dt));
  put("solver.steps", std::to_string(cfg.solver.steps));
  put("solver.scheme", cfg.solver.scheme == Scheme::linear_spectral
                           ? "linear-spectral"
                           : "nonlinear-rk4");
  put("solver.dealias", cfg.solver.dealias ? "true" : "false");
  put("output.cadence", std::to_string(cfg.output_cadence));
  put("output.snapshots", cfg.output_snapshots ? "true" : "false");
  if (cfg.scenario == ScenarioKind::validity) {
    put("validity.amplitude", format_double(cfg.validity_amplitude));
    put("validity.wavenumber", format_double(cfg.validity_wavenumber));
    put("validity.horizon", format_double(cfg.validity_horizon));
  }
  if (cfg.scenario == ScenarioKind::dispersion) {
    put("dispersion.amplitude", format_double(cfg.dispersion_amplitude));
    put("dispersion.max_mode", std::to_string(cfg.dispersion_max_mode));
  }
  if (cfg.scenario == ScenarioKind::propagate) {
    put("propagate.time", format_double(cfg.propagate_time));
    put("propagate.slices", std::to_string(cfg.propagate_slices));
  }
  if (cfg.scenario == ScenarioKind::biot_savart_compare)
    put("biot.images", std::to_string(cfg.biot_images));
  return cfg;
}

}  // namespace vortexline
