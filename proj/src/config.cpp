#include "rmhd/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace rmhd {

namespace {

void reject_unknown(const YAML::Node& node, const std::string& section,
                    const std::set<std::string>& allowed) {
  if (!node) return;
  require(node.IsMap(), "config section '" + section + "' must be a map");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    require(allowed.count(key) > 0, "unknown config key '" + section + "." + key + "'");
  }
}

template <class T>
void read(const YAML::Node& node, const char* key, T& out, const std::string& section) {
  if (!node || !node[key]) return;
  try {
    out = node[key].as<T>();
  } catch (const YAML::Exception&) {
    throw ContractViolation("config key '" + section + "." + key + "' has the wrong type");
  }
}

}  // namespace

void RunConfig::validate() const {
  grid.validate();
  params.validate();
  solver.validate();
  require(grid.eps == params.eps, "grid eps must equal params eps");
  require(init.amplitude >= 0.0, "init.amplitude must be >= 0");
  require(init.kmax >= 0, "init.kmax must be >= 0");
}

RunConfig default_config() {
  RunConfig c;
  c.params.mu_perp = c.params.mu_par = c.params.lambda_bulk = 0.01;
  c.params.eta_perp = c.params.eta_par = 0.01;
  c.grid.eps = c.params.eps;
  c.solver.snapshot_every = 1.0 / 64.0;
  return c;
}

RunConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ContractViolation(std::string("config is not valid YAML: ") + e.what());
  }
  RunConfig c = default_config();
  if (!root || root.IsNull()) return c;
  require(root.IsMap(), "config must be a map");
  reject_unknown(root, "<root>", {"grid", "params", "init", "solver"});

  const YAML::Node g = root["grid"];
  reject_unknown(g, "grid", {"nx", "ny", "nz"});
  read(g, "nx", c.grid.nx, "grid");
  read(g, "ny", c.grid.ny, "grid");
  read(g, "nz", c.grid.nz, "grid");

  const YAML::Node p = root["params"];
  reject_unknown(p, "params",
                 {"a", "gamma", "eps", "mu_perp", "mu_par", "lambda", "eta_perp", "eta_par"});
  read(p, "a", c.params.a, "params");
  read(p, "gamma", c.params.gamma, "params");
  read(p, "eps", c.params.eps, "params");
  read(p, "mu_perp", c.params.mu_perp, "params");
  read(p, "mu_par", c.params.mu_par, "params");
  read(p, "lambda", c.params.lambda_bulk, "params");
  read(p, "eta_perp", c.params.eta_perp, "params");
  read(p, "eta_par", c.params.eta_par, "params");
  c.grid.eps = c.params.eps;

  const YAML::Node in = root["init"];
  reject_unknown(in, "init", {"kind", "seed", "slope", "amplitude", "kmax", "from_snapshot"});
  std::string kind = "prepared";
  read(in, "kind", kind, "init");
  c.init.kind = init_kind_from_name(kind);
  read(in, "seed", c.init.seed, "init");
  read(in, "slope", c.init.spectrum_slope, "init");
  read(in, "amplitude", c.init.amplitude, "init");
  read(in, "kmax", c.init.kmax, "init");
  if (in && in["from_snapshot"]) {
    std::string path;
    read(in, "from_snapshot", path, "init");
    c.from_snapshot = path;
  }

  const YAML::Node s = root["solver"];
  reject_unknown(s, "solver", {"integrator", "dt", "t_end", "snapshot_every", "linearized",
                               "dealias", "limit_wave_constant"});
  if (s && s["integrator"]) {
    std::string name;
    read(s, "integrator", name, "solver");
    c.solver.integrator = integrator_from_name(name);
  }
  if (s && s["dt"]) {
    std::string text = s["dt"].as<std::string>();
    if (text == "auto") {
      c.solver.dt = 0.0;
    } else {
      read(s, "dt", c.solver.dt, "solver");
      require(c.solver.dt > 0.0, "solver.dt must be positive or 'auto'");
    }
  }
  read(s, "t_end", c.solver.t_end, "solver");
  read(s, "snapshot_every", c.solver.snapshot_every, "solver");
  read(s, "linearized", c.solver.linearized, "solver");
  read(s, "dealias", c.solver.dealias, "solver");
  read(s, "limit_wave_constant", c.solver.limit_wave_constant, "solver");

  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ContractViolation("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const RunConfig& c) {
  YAML::Emitter e;
  e << YAML::BeginMap;
  e << YAML::Key << "grid" << YAML::Value << YAML::BeginMap << YAML::Key << "nx" << YAML::Value
    << c.grid.nx << YAML::Key << "ny" << YAML::Value << c.grid.ny << YAML::Key << "nz"
    << YAML::Value << c.grid.nz << YAML::EndMap;
  e << YAML::Key << "params" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "a" << YAML::Value << c.params.a;
  e << YAML::Key << "gamma" << YAML::Value << c.params.gamma;
  e << YAML::Key << "eps" << YAML::Value << c.params.eps;
  e << YAML::Key << "mu_perp" << YAML::Value << c.params.mu_perp;
  e << YAML::Key << "mu_par" << YAML::Value << c.params.mu_par;
  e << YAML::Key << "lambda" << YAML::Value << c.params.lambda_bulk;
  e << YAML::Key << "eta_perp" << YAML::Value << c.params.eta_perp;
  e << YAML::Key << "eta_par" << YAML::Value << c.params.eta_par;
  e << YAML::EndMap;
  e << YAML::Key << "init" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "kind" << YAML::Value
    << (c.init.kind == InitKind::prepared ? "prepared" : "unprepared");
  e << YAML::Key << "seed" << YAML::Value << c.init.seed;
  e << YAML::Key << "slope" << YAML::Value << c.init.spectrum_slope;
  e << YAML::Key << "amplitude" << YAML::Value << c.init.amplitude;
  e << YAML::Key << "kmax" << YAML::Value << c.init.kmax;
  if (c.from_snapshot) e << YAML::Key << "from_snapshot" << YAML::Value << c.from_snapshot->string();
  e << YAML::EndMap;
  e << YAML::Key << "solver" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "integrator" << YAML::Value << integrator_name(c.solver.integrator);
  if (c.solver.dt > 0.0)
    e << YAML::Key << "dt" << YAML::Value << c.solver.dt;
  else
    e << YAML::Key << "dt" << YAML::Value << "auto";
  e << YAML::Key << "t_end" << YAML::Value << c.solver.t_end;
  e << YAML::Key << "snapshot_every" << YAML::Value << c.solver.snapshot_every;
  e << YAML::Key << "linearized" << YAML::Value << c.solver.linearized;
  e << YAML::Key << "dealias" << YAML::Value << c.solver.dealias;
  e << YAML::Key << "limit_wave_constant" << YAML::Value << c.solver.limit_wave_constant;
  e << YAML::EndMap;
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

State initial_state(const RunConfig& c) {
  if (c.from_snapshot) {
    State s = read_state(*c.from_snapshot);
    require(s.grid().same_shape(c.grid), "snapshot grid differs from the configured grid");
    require(s.grid().eps == c.params.eps, "snapshot eps differs from params.eps");
    return s;
  }
  return make_initial_data(c.grid, c.params, c.init);
}

}  // namespace rmhd
