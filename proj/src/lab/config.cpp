#include "limitlab/lab/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace limitlab {

using nlohmann::json;

std::vector<std::string> preset_names() { return {"paper-demo", "anisotropic-elastic"}; }

MaterialParams preset_material(const std::string& name) {
  MaterialParams p;
  p.bulk = {1.0, 1.0, 1.0};
  p.elastic = {1.0, 0.0, 0.0};
  p.viscosity = {1.0, 2.0, 0.5, 2.5, 1.0, 2.0, 2.0, 0.1};
  p.eps = 0.5;
  if (name == "paper-demo") return p;
  if (name == "anisotropic-elastic") {
    p.elastic = {1.0, 0.5, 0.3};
    return p;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown preset '" + name + "'");
}

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw Error(ErrorCode::InvalidConfig, where + " must be an object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) throw Error(ErrorCode::InvalidConfig, "unknown key '" + key + "' in " + where);
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("bad value for '") + key + "' in " + where + ": " + e.what());
  }
}

}  // namespace

LabConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("malformed JSON: ") + e.what());
  }
  reject_unknown(doc, {"preset", "material", "grid", "time", "initial", "sweep"}, "config");

  LabConfig cfg;
  read(doc, "preset", cfg.preset, "config");
  cfg.material = preset_material(cfg.preset);

  if (doc.contains("material")) {
    const json& m = doc["material"];
    reject_unknown(m, {"a", "b", "c", "L1", "L2", "L3", "eps", "beta1", "beta4", "beta5", "beta6", "beta7", "mu1",
                       "mu2", "J"},
                   "material");
    MaterialParams& p = cfg.material;
    read(m, "a", p.bulk.a, "material");
    read(m, "b", p.bulk.b, "material");
    read(m, "c", p.bulk.c, "material");
    read(m, "L1", p.elastic.L1, "material");
    read(m, "L2", p.elastic.L2, "material");
    read(m, "L3", p.elastic.L3, "material");
    read(m, "eps", p.eps, "material");
    read(m, "beta1", p.viscosity.beta1, "material");
    read(m, "beta4", p.viscosity.beta4, "material");
    read(m, "beta5", p.viscosity.beta5, "material");
    read(m, "beta6", p.viscosity.beta6, "material");
    read(m, "beta7", p.viscosity.beta7, "material");
    read(m, "mu1", p.viscosity.mu1, "material");
    read(m, "mu2", p.viscosity.mu2, "material");
    read(m, "J", p.viscosity.J, "material");
  }
  if (doc.contains("grid")) {
    const json& g = doc["grid"];
    reject_unknown(g, {"nx", "ny", "lx", "ly"}, "grid");
    int nx = cfg.grid.nx, ny = cfg.grid.ny;
    double lx = cfg.grid.lx, ly = cfg.grid.ly;
    read(g, "nx", nx, "grid");
    read(g, "ny", ny, "grid");
    read(g, "lx", lx, "grid");
    read(g, "ly", ly, "grid");
    try {
      cfg.grid = PeriodicGrid(nx, ny, lx, ly);
    } catch (const Error& e) {
      throw Error(ErrorCode::InvalidConfig, e.what());
    }
  }
  if (doc.contains("time")) {
    const json& t = doc["time"];
    reject_unknown(t, {"dt", "t_end", "imex_theta", "output_every", "snapshot_every", "dt_rule", "stiffness_safety"},
                   "time");
    read(t, "dt", cfg.dt, "time");
    read(t, "t_end", cfg.t_end, "time");
    read(t, "imex_theta", cfg.imex_theta, "time");
    read(t, "output_every", cfg.output_every, "time");
    read(t, "snapshot_every", cfg.snapshot_every, "time");
    read(t, "dt_rule", cfg.dt_rule, "time");
    read(t, "stiffness_safety", cfg.stiffness_safety, "time");
  }
  if (doc.contains("initial")) {
    const json& i = doc["initial"];
    reject_unknown(i, {"recipe", "amplitude_n", "amplitude_v", "amplitude_q", "amplitude_ndot", "modes", "seed"},
                   "initial");
    read(i, "recipe", cfg.initial.name, "initial");
    read(i, "amplitude_n", cfg.initial.amplitude_n, "initial");
    read(i, "amplitude_v", cfg.initial.amplitude_v, "initial");
    read(i, "amplitude_q", cfg.initial.amplitude_q, "initial");
    read(i, "amplitude_ndot", cfg.initial.amplitude_ndot, "initial");
    read(i, "modes", cfg.initial.modes, "initial");
    read(i, "seed", cfg.initial.seed, "initial");
  }
  if (doc.contains("sweep")) {
    const json& s = doc["sweep"];
    reject_unknown(s, {"epsilons", "order"}, "sweep");
    read(s, "epsilons", cfg.epsilons, "sweep");
    read(s, "order", cfg.order, "sweep");
  }

  if (!(cfg.dt > 0.0) || !(cfg.t_end > 0.0)) throw Error(ErrorCode::InvalidConfig, "dt and t_end must be positive");
  if (cfg.imex_theta < 0.0 || cfg.imex_theta > 1.0) throw Error(ErrorCode::InvalidConfig, "imex_theta must lie in [0,1]");
  if (cfg.output_every < 1) throw Error(ErrorCode::InvalidConfig, "output_every must be >= 1");
  if (cfg.snapshot_every < 0) throw Error(ErrorCode::InvalidConfig, "snapshot_every must be >= 0");
  if (cfg.dt_rule != "fixed" && cfg.dt_rule != "proportional")
    throw Error(ErrorCode::InvalidConfig, "dt_rule must be 'fixed' or 'proportional'");
  if (cfg.initial.name != "equilibrium" && cfg.initial.name != "smooth" && cfg.initial.name != "random")
    throw Error(ErrorCode::InvalidConfig, "unknown initial recipe '" + cfg.initial.name + "'");
  if (cfg.initial.modes < 1) throw Error(ErrorCode::InvalidConfig, "modes must be >= 1");
  if (!(cfg.material.eps > 0.0)) throw Error(ErrorCode::InvalidConfig, "eps must be positive");
  if (cfg.order != 0 && cfg.order != 1) throw Error(ErrorCode::InvalidConfig, "order must be 0 or 1");
  for (size_t i = 0; i < cfg.epsilons.size(); ++i) {
    if (!(cfg.epsilons[i] > 0.0)) throw Error(ErrorCode::InvalidConfig, "epsilons must be positive");
    if (i > 0 && !(cfg.epsilons[i] < cfg.epsilons[i - 1]))
      throw Error(ErrorCode::InvalidConfig, "epsilons must be strictly decreasing");
  }
  return cfg;
}

LabConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

json to_json(const MaterialParams& p) {
  return {{"a", p.bulk.a},         {"b", p.bulk.b},         {"c", p.bulk.c},         {"L1", p.elastic.L1},
          {"L2", p.elastic.L2},    {"L3", p.elastic.L3},    {"eps", p.eps},          {"beta1", p.viscosity.beta1},
          {"beta4", p.viscosity.beta4}, {"beta5", p.viscosity.beta5}, {"beta6", p.viscosity.beta6},
          {"beta7", p.viscosity.beta7}, {"mu1", p.viscosity.mu1},     {"mu2", p.viscosity.mu2},
          {"J", p.viscosity.J}};
}

json to_json(const LeslieParams& lp) {
  return {{"alpha1", lp.alpha1}, {"alpha2", lp.alpha2}, {"alpha3", lp.alpha3}, {"alpha4", lp.alpha4},
          {"alpha5", lp.alpha5}, {"alpha6", lp.alpha6}, {"gamma1", lp.gamma1}, {"gamma2", lp.gamma2},
          {"I", lp.I},           {"k1", lp.k1},         {"k2", lp.k2},         {"k3", lp.k3},
          {"k4", lp.k4}};
}

json to_json(const Certificate& c) {
  json clauses = json::array();
  for (const auto& cl : c.clauses) clauses.push_back({{"clause", cl.name}, {"pass", cl.pass}, {"margin", cl.margin}});
  return {{"pass", c.pass}, {"violated", c.violated}, {"clauses", clauses}, {"mu1_over_J", c.mu1_over_J}};
}

json to_json(const LabConfig& cfg) {
  return {{"preset", cfg.preset},
          {"material", to_json(cfg.material)},
          {"grid", {{"nx", cfg.grid.nx}, {"ny", cfg.grid.ny}, {"lx", cfg.grid.lx}, {"ly", cfg.grid.ly}}},
          {"time",
           {{"dt", cfg.dt},
            {"t_end", cfg.t_end},
            {"imex_theta", cfg.imex_theta},
            {"output_every", cfg.output_every},
            {"snapshot_every", cfg.snapshot_every},
            {"dt_rule", cfg.dt_rule},
            {"stiffness_safety", cfg.stiffness_safety}}},
          {"initial",
           {{"recipe", cfg.initial.name},
            {"amplitude_n", cfg.initial.amplitude_n},
            {"amplitude_v", cfg.initial.amplitude_v},
            {"amplitude_q", cfg.initial.amplitude_q},
            {"amplitude_ndot", cfg.initial.amplitude_ndot},
            {"modes", cfg.initial.modes},
            {"seed", cfg.initial.seed}}},
          {"sweep", {{"epsilons", cfg.epsilons}, {"order", cfg.order}}}};
}

}  // namespace limitlab
