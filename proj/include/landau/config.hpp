#ifndef LANDAU_CONFIG_HPP
#define LANDAU_CONFIG_HPP

// JSON run configuration.
//
//   {
//     "gamma": -2, "eta": 0.1,            // or "eta_c": 1, "eta_kappa": 0.25
//     "theta": 0.99, "dt": 1e-3, "t_end": 0.5, "n_particles": 256,
//     "seed": 1, "energy_mode": "none",   // or "rescale"
//     "snapshot_stride": 10, "initial": "maxwellian(1)", "workers": 1
//   }

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "landau/dynamics.hpp"
#include "landau/types.hpp"

namespace landau {

struct RunConfig {
  SimConfig sim;
  std::string initial = "maxwellian(1)";
  /// Non-alignment scale used by the iota diagnostic.
  double delta = 0.05;
  double radius = 3.0;
  double kappa = 1e-3;
};

inline nlohmann::json to_json(const RunConfig& rc) {
  const auto& c = rc.sim;
  nlohmann::json j;
  j["gamma"] = c.gamma;
  if (c.eta_rule.fixed) {
    j["eta"] = *c.eta_rule.fixed;
  } else {
    j["eta_c"] = c.eta_rule.c;
    j["eta_kappa"] = c.eta_rule.kappa;
  }
  j["theta"] = c.theta;
  j["dt"] = c.dt;
  j["t_end"] = c.t_end;
  j["n_particles"] = c.n_particles;
  j["seed"] = c.seed;
  j["energy_mode"] = to_string(c.energy_mode);
  j["snapshot_stride"] = c.snapshot_stride;
  j["workers"] = c.workers;
  j["initial"] = rc.initial;
  j["delta"] = rc.delta;
  j["radius"] = rc.radius;
  j["kappa"] = rc.kappa;
  return j;
}

inline RunConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known{
      "gamma", "eta", "eta_c", "eta_kappa", "theta", "dt", "t_end", "n_particles", "seed",
      "energy_mode", "snapshot_stride", "workers", "initial", "delta", "radius", "kappa"};
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");

  RunConfig rc;
  auto& c = rc.sim;
  auto num = [&](const char* key, auto& dst) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_number()) throw ConfigError(std::string("config key '") + key + "' must be a number");
    v.get_to(dst);
  };
  num("gamma", c.gamma);
  if (j.contains("eta") && (j.contains("eta_c") || j.contains("eta_kappa")))
    throw ConfigError("give either 'eta' or 'eta_c'/'eta_kappa', not both");
  if (j.contains("eta")) {
    double eta = 0.0;
    num("eta", eta);
    c.eta_rule.fixed = eta;
  }
  num("eta_c", c.eta_rule.c);
  num("eta_kappa", c.eta_rule.kappa);
  num("theta", c.theta);
  num("dt", c.dt);
  num("t_end", c.t_end);
  num("n_particles", c.n_particles);
  num("seed", c.seed);
  num("snapshot_stride", c.snapshot_stride);
  num("workers", c.workers);
  num("delta", rc.delta);
  num("radius", rc.radius);
  num("kappa", rc.kappa);
  if (j.contains("energy_mode")) {
    const auto m = j.at("energy_mode").get<std::string>();
    if (m == "none")
      c.energy_mode = EnergyMode::none;
    else if (m == "rescale")
      c.energy_mode = EnergyMode::rescale;
    else
      throw ConfigError("energy_mode must be 'none' or 'rescale', got '" + m + "'");
  }
  if (j.contains("initial")) rc.initial = j.at("initial").get<std::string>();
  c.validate();
  return rc;
}

/// Parses a config file; syntax errors carry line and column.
inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  try {
    return config_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace landau

#endif  // LANDAU_CONFIG_HPP
