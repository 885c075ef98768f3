#include "stokeslip/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "stokeslip/errors.hpp"

namespace stokeslip {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("unknown key \"" + it.key() + "\" in " + where);
}

double number_at(const json& obj, const std::string& key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
  return v.get<double>();
}

int int_at(const json& obj, const std::string& key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + " must be an integer");
  return v.get<int>();
}

std::string string_at(const json& obj, const std::string& key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(where + "." + key + " must be a string");
  return v.get<std::string>();
}

void parse_element(const json& root, RunConfig& cfg) {
  std::string kind = cfg.element.bubbles() ? "p1b" : "p1";
  if (root.contains("element")) kind = string_at(root, "element", "config");
  bool eta_given = false;
  double eta = 0.0;
  if (root.contains("eta")) {
    eta = number_at(root, "eta", "config");
    eta_given = true;
  } else if (kind == "p1") {
    eta = cfg.element.bubbles() ? 0.01 : cfg.element.eta;
  }
  if (kind == "p1") {
    if (eta <= 0.0) throw ConfigError("eta must be positive for the p1 element");
    cfg.element = ElementChoice::p1(eta);
  } else if (kind == "p1b") {
    if (eta_given && eta != 0.0)
      throw ConfigError("eta must be 0 (or omitted) for the p1b element");
    cfg.element = ElementChoice::p1b();
  } else {
    throw ConfigError("element must be \"p1\" or \"p1b\"");
  }
}

void parse_epsilon(const json& root, RunConfig& cfg) {
  if (!root.contains("epsilon")) return;
  const json& eps = root.at("epsilon");
  if (!eps.is_object()) throw ConfigError("epsilon must be an object with a \"rule\" key");
  const std::string rule = string_at(eps, "rule", "epsilon");
  if (rule == "0.1h") {
    require_keys(eps, "epsilon", {"rule"});
    cfg.eps_rule = EpsRule::prop_h();
  } else if (rule == "0.1h2") {
    require_keys(eps, "epsilon", {"rule"});
    cfg.eps_rule = EpsRule::prop_h2();
  } else if (rule == "fixed") {
    require_keys(eps, "epsilon", {"rule", "value"});
    if (!eps.contains("value")) throw ConfigError("epsilon.value required for the fixed rule");
    cfg.eps_rule = EpsRule::fixed(number_at(eps, "value", "epsilon"));
  } else {
    throw ConfigError("epsilon.rule must be \"0.1h\", \"0.1h2\", or \"fixed\"");
  }
}

void parse_mesh(const json& root, RunConfig& cfg) {
  if (!root.contains("mesh")) return;
  const json& mesh = root.at("mesh");
  if (!mesh.is_object()) throw ConfigError("mesh must be an object");
  if (mesh.contains("rings")) {
    require_keys(mesh, "mesh", {"rings"});
    cfg.mesh.builtin = true;
    cfg.mesh.rings = int_at(mesh, "rings", "mesh");
    if (cfg.mesh.rings < 1) throw ConfigError("mesh.rings must be at least 1");
  } else if (mesh.contains("node") || mesh.contains("ele")) {
    require_keys(mesh, "mesh", {"node", "ele"});
    if (!mesh.contains("node") || !mesh.contains("ele"))
      throw ConfigError("mesh import needs both \"node\" and \"ele\" paths");
    cfg.mesh.builtin = false;
    cfg.mesh.node_path = string_at(mesh, "node", "mesh");
    cfg.mesh.ele_path = string_at(mesh, "ele", "mesh");
  } else {
    throw ConfigError("mesh must specify either rings or node/ele paths");
  }
}

void parse_solver(const json& root, RunConfig& cfg) {
  if (!root.contains("solver")) return;
  const json& s = root.at("solver");
  if (!s.is_object()) throw ConfigError("solver must be an object");
  require_keys(s, "solver",
               {"method", "restart", "rel_tol", "abs_tol", "max_iter", "precond", "dense_cap"});
  if (s.contains("method")) {
    const std::string m = string_at(s, "method", "solver");
    if (m == "gmres")
      cfg.solver.method = SolveMethod::Gmres;
    else if (m == "bicgstab")
      cfg.solver.method = SolveMethod::Bicgstab;
    else if (m == "lu")
      cfg.solver.method = SolveMethod::DenseLu;
    else
      throw ConfigError("solver.method must be \"gmres\", \"bicgstab\", or \"lu\"");
  }
  if (s.contains("restart")) {
    cfg.solver.restart = int_at(s, "restart", "solver");
    if (cfg.solver.restart < 1) throw ConfigError("solver.restart must be at least 1");
  }
  if (s.contains("rel_tol")) {
    cfg.solver.rel_tol = number_at(s, "rel_tol", "solver");
    if (cfg.solver.rel_tol <= 0.0) throw ConfigError("solver.rel_tol must be positive");
  }
  if (s.contains("abs_tol")) {
    cfg.solver.abs_tol = number_at(s, "abs_tol", "solver");
    if (cfg.solver.abs_tol < 0.0) throw ConfigError("solver.abs_tol must be nonnegative");
  }
  if (s.contains("max_iter")) {
    cfg.solver.max_iter = int_at(s, "max_iter", "solver");
    if (cfg.solver.max_iter < 0) throw ConfigError("solver.max_iter must be nonnegative");
  }
  if (s.contains("precond")) {
    const std::string p = string_at(s, "precond", "solver");
    if (p == "none")
      cfg.solver.precond = PrecondKind::None;
    else if (p == "ilu0")
      cfg.solver.precond = PrecondKind::Ilu0;
    else
      throw ConfigError("solver.precond must be \"none\" or \"ilu0\"");
  }
  if (s.contains("dense_cap")) {
    cfg.solver.dense_cap = int_at(s, "dense_cap", "solver");
    if (cfg.solver.dense_cap < 1) throw ConfigError("solver.dense_cap must be at least 1");
  }
}

}  // namespace

RunConfig parse_config_json(const std::string& text, const RunConfig& base) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config root must be a JSON object");
  require_keys(root, "config",
               {"element", "eta", "scheme", "epsilon", "mesh", "levels", "solver", "case",
                "output_dir"});

  RunConfig cfg = base;
  parse_element(root, cfg);

  if (root.contains("scheme")) {
    const std::string s = string_at(root, "scheme", "config");
    if (s == "full")
      cfg.scheme = PenaltyScheme::Full;
    else if (s == "reduced")
      cfg.scheme = PenaltyScheme::Reduced;
    else
      throw ConfigError("scheme must be \"full\" or \"reduced\"");
  }

  parse_epsilon(root, cfg);
  parse_mesh(root, cfg);

  if (root.contains("levels")) {
    cfg.levels = int_at(root, "levels", "config");
    if (cfg.levels < 1) throw ConfigError("levels must be at least 1");
  }

  parse_solver(root, cfg);

  if (root.contains("case")) {
    cfg.case_name = string_at(root, "case", "config");
    if (cfg.case_name != "builtin_disk")
      throw ConfigError("case must be \"builtin_disk\"");
  }
  if (root.contains("output_dir")) cfg.output_dir = string_at(root, "output_dir", "config");
  return cfg;
}

RunConfig load_config_file(const std::string& path, const RunConfig& base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_json(buf.str(), base);
}

std::string config_json(const RunConfig& cfg) {
  json root;
  root["element"] = cfg.element.bubbles() ? "p1b" : "p1";
  root["eta"] = cfg.element.eta;
  root["scheme"] = cfg.scheme == PenaltyScheme::Full ? "full" : "reduced";
  json eps;
  switch (cfg.eps_rule.kind) {
    case EpsRule::Kind::PropH:
      eps["rule"] = "0.1h";
      break;
    case EpsRule::Kind::PropH2:
      eps["rule"] = "0.1h2";
      break;
    case EpsRule::Kind::Fixed:
      eps["rule"] = "fixed";
      eps["value"] = cfg.eps_rule.value;
      break;
  }
  root["epsilon"] = eps;
  json mesh;
  if (cfg.mesh.builtin) {
    mesh["rings"] = cfg.mesh.rings;
  } else {
    mesh["node"] = cfg.mesh.node_path;
    mesh["ele"] = cfg.mesh.ele_path;
  }
  root["mesh"] = mesh;
  root["levels"] = cfg.levels;
  json solver;
  switch (cfg.solver.method) {
    case SolveMethod::Gmres:
      solver["method"] = "gmres";
      break;
    case SolveMethod::Bicgstab:
      solver["method"] = "bicgstab";
      break;
    case SolveMethod::DenseLu:
      solver["method"] = "lu";
      break;
  }
  solver["restart"] = cfg.solver.restart;
  solver["rel_tol"] = cfg.solver.rel_tol;
  solver["abs_tol"] = cfg.solver.abs_tol;
  solver["max_iter"] = cfg.solver.max_iter;
  solver["precond"] = cfg.solver.precond == PrecondKind::Ilu0 ? "ilu0" : "none";
  solver["dense_cap"] = cfg.solver.dense_cap;
  root["solver"] = solver;
  root["case"] = cfg.case_name;
  root["output_dir"] = cfg.output_dir;
  return root.dump(2) + "\n";
}

}  // namespace stokeslip
