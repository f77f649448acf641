#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "limitlab/coefficient_bridge.hpp"
#include "limitlab/spectral_fields.hpp"
#include "json.hpp"

namespace limitlab {

struct InitialRecipe {
  std::string name = "smooth";  // equilibrium | smooth | random
  double amplitude_n = 0.2;
  double amplitude_v = 0.1;
  double amplitude_q = 0.0;     // extra random tensor perturbation for Q-tensor runs
  double amplitude_ndot = 0.0;  // random tangential director rate (random recipe)
  int modes = 2;                // largest wavenumber of random perturbations
  std::uint64_t seed = 1;
};

struct LabConfig {
  std::string preset = "paper-demo";
  MaterialParams material;
  PeriodicGrid grid{32, 32};
  double dt = 1e-3;
  double t_end = 1.0;
  double imex_theta = 0.5;
  int output_every = 10;
  int snapshot_every = 0;
  std::string dt_rule = "fixed";  // fixed | proportional
  double stiffness_safety = 1.0;
  InitialRecipe initial;
  std::vector<double> epsilons{0.1, 0.05, 0.025, 0.0125};
  int order = 1;
};

std::vector<std::string> preset_names();
MaterialParams preset_material(const std::string& name);

// Parses a JSON document; unknown keys raise InvalidConfig.
LabConfig parse_config(const std::string& json_text);
LabConfig load_config(const std::string& path);
nlohmann::json to_json(const LabConfig& cfg);
nlohmann::json to_json(const MaterialParams& p);
nlohmann::json to_json(const LeslieParams& lp);
nlohmann::json to_json(const Certificate& c);

}  // namespace limitlab
