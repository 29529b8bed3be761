#include "rptip/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "rptip/errors.hpp"

namespace rptip {

namespace {

const std::vector<std::string> kKeys = {
    "model.kind",        "model.preset",

    "params.mu",         "params.alpha",         "params.beta",      "params.d",
    "params.v",          "params.sigma_i",       "params.K",         "params.L",
    "params.sigma_M",    "params.n",             "params.q",         "params.k_s",

    "path.kind",         "path.p_plus",          "path.p_minus",     "path.fold",
    "path.side",

    "shift.kind",        "shift.a",              "shift.b",          "shift.r",
    "shift.t_c",         "shift.t_c1",           "shift.t_c2",       "shift.base_level",

    "grid.axis",         "grid.lo",              "grid.hi",          "grid.n",
    "grid.p1_min",       "grid.p1_max",          "grid.p1_n",        "grid.p2_min",
    "grid.p2_max",       "grid.p2_n",            "grid.b_min",       "grid.b_max",
    "grid.b_n",          "grid.r_min",           "grid.r_max",       "grid.r_n",
    "grid.r_log",        "grid.phi_n",           "grid.tc_list",     "grid.critical",

    "integrator.rel_tol", "integrator.abs_tol",  "integrator.max_step", "integrator.t_end",
    "integrator.stride",

    "initial.x",         "initial.y",            "initial.phase",    "initial.list",

    "run.samples",       "run.census_resolution", "run.oracle_samples",
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (trim(text.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("key '" + key + "': expected a number, got '" + text + "'");
}

RunConfig from_tree(const boost::property_tree::ptree& tree) {
  RunConfig cfg;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("key '" + section + "' must live inside a section");
    for (const auto& [key, node] : body) cfg.set(section + "." + key, node.data());
  }
  return cfg;
}

}  // namespace

const std::vector<std::string>& config_keys() { return kKeys; }

std::optional<ModelParams> model_preset(const std::string& name) {
  if (name == "vdp_a093") return VdpParams{1.52, 0.093, 0.0019, -0.03};
  if (name == "vdp_a0938") return VdpParams{1.52, 0.0938, 0.00194, -0.03};
  if (name == "vdp_three_cycles") return VdpParams{0.6, 0.114, 0.003, -0.1};
  if (name == "gly_birhythmic") {
    GlyParams g;
    g.v = 0.275;
    g.sigma_i = 1.226;
    return g;
  }
  return std::nullopt;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str());
}

RunConfig RunConfig::from_string(const std::string& text) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }
  return from_tree(tree);
}

void RunConfig::set(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not of the form key=value");
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) throw ConfigError("unknown key '" + key + "'");
  values_[key] = trim(value);
}

bool RunConfig::has(const std::string& key) const { return values_.count(key) > 0; }

std::string RunConfig::str(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double RunConfig::num(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing key '" + key + "'");
  return parse_number(key, it->second);
}

double RunConfig::num(const std::string& key, double fallback) const {
  return has(key) ? num(key) : fallback;
}

long RunConfig::integer(const std::string& key, long fallback) const {
  if (!has(key)) return fallback;
  const double v = num(key);
  if (v != std::floor(v)) throw ConfigError("key '" + key + "': expected an integer");
  return static_cast<long>(v);
}

bool RunConfig::flag(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string v = str(key, "");
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("key '" + key + "': expected true or false");
}

std::vector<double> RunConfig::list(const std::string& key) const {
  std::vector<double> out;
  std::stringstream ss(str(key, ""));
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!trim(item).empty()) out.push_back(parse_number(key, trim(item)));
  }
  return out;
}

ModelKind RunConfig::model() const {
  const std::string k = str("model.kind", "");
  if (k == "vdp") return ModelKind::vdp;
  if (k == "gly") return ModelKind::gly;
  if (k.empty()) throw ConfigError("missing key 'model.kind'");
  throw ConfigError("key 'model.kind': unknown model '" + k + "'");
}

ModelParams RunConfig::params() const {
  const ModelKind kind = model();
  ModelParams p = kind == ModelKind::vdp ? ModelParams{VdpParams{}} : ModelParams{GlyParams{}};
  if (has("model.preset")) {
    auto preset = model_preset(str("model.preset", ""));
    if (!preset) throw ConfigError("key 'model.preset': unknown preset '" + str("model.preset", "") + "'");
    if (kind_of(*preset) != kind) throw ConfigError("key 'model.preset': preset belongs to another model");
    p = *preset;
  }
  const char* vdp_only[] = {"params.mu", "params.alpha", "params.beta", "params.d"};
  const char* gly_only[] = {"params.v", "params.sigma_i", "params.K", "params.L",
                            "params.sigma_M", "params.n", "params.q", "params.k_s"};
  for (const char* k : kind == ModelKind::vdp ? std::vector<const char*>(std::begin(gly_only), std::end(gly_only))
                                               : std::vector<const char*>(std::begin(vdp_only), std::end(vdp_only))) {
    if (has(k)) throw ConfigError(std::string("key '") + k + "' does not apply to model " +
                                  std::string(model_name(kind)));
  }
  try {
    if (auto* v = std::get_if<VdpParams>(&p)) {
      v->mu = num("params.mu", v->mu);
      v->alpha = num("params.alpha", v->alpha);
      v->beta = num("params.beta", v->beta);
      v->d = num("params.d", v->d);
      v->validate();
    } else {
      auto& g = std::get<GlyParams>(p);
      g.v = num("params.v", g.v);
      g.sigma_i = num("params.sigma_i", g.sigma_i);
      g.K = num("params.K", g.K);
      g.L = num("params.L", g.L);
      g.sigma_M = num("params.sigma_M", g.sigma_M);
      g.n = static_cast<int>(integer("params.n", g.n));
      g.q = num("params.q", g.q);
      g.k_s = num("params.k_s", g.k_s);
      g.validate();
    }
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return p;
}

ParameterPath RunConfig::path() const {
  const ModelParams base = params();
  const double p_plus = num("path.p_plus", input_parameter(base));
  const double p_minus = num("path.p_minus", p_plus);
  const std::string kind = str("path.kind", model() == ModelKind::gly ? "diagonal" : "vertical");
  ParameterPath path;
  if (kind == "vertical") {
    path = ParameterPath(base, p_plus, p_minus);
  } else if (kind == "diagonal") {
    if (model() != ModelKind::gly) throw ConfigError("key 'path.kind': diagonal path exists only for gly");
    path = ParameterPath::gly_diagonal(std::get<GlyParams>(base), p_plus, p_minus);
  } else {
    throw ConfigError("key 'path.kind': expected vertical or diagonal");
  }
  const std::string fold = str("path.fold", "none");
  if (fold != "none" && fold != "auto") path.set_fold(num("path.fold"));
  return path;
}

BaseSide RunConfig::side() const {
  const std::string s = str("path.side", "");
  if (s.empty()) return default_base_side(model());
  if (s == "outer") return BaseSide::outer;
  if (s == "inner") return BaseSide::inner;
  throw ConfigError("key 'path.side': expected outer or inner");
}

IntegratorConfig RunConfig::integrator() const {
  IntegratorConfig c;
  c.rel_tol = num("integrator.rel_tol", c.rel_tol);
  c.abs_tol = num("integrator.abs_tol", c.abs_tol);
  c.max_step = num("integrator.max_step", c.max_step);
  try {
    c.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return c;
}

bool RunConfig::has_shift() const { return has("shift.kind"); }

InputShift RunConfig::shift(double base_period) const {
  ShiftKind kind;
  try {
    kind = parse_shift_kind(str("shift.kind", ""));
  } catch (const Error&) {
    throw ConfigError("key 'shift.kind': expected monotone, nonmonotone or impulse");
  }
  // t_c accepts either a time or a multiple of the base period such as "4T".
  auto time_key = [&](const std::string& key, const std::string& fallback) {
    std::string v = str(key, fallback);
    if (!v.empty() && (v.back() == 'T' || v.back() == 't')) {
      v.pop_back();
      return (v.empty() ? 1.0 : parse_number(key, v)) * base_period;
    }
    return parse_number(key, v);
  };
  InputShift s;
  const double b = num("shift.b", 0.0);
  const double r = num("shift.r", 1.0);
  if (kind == ShiftKind::impulse) {
    if (has("shift.a")) throw ConfigError("key 'shift.a' does not apply to impulse; use shift.base_level");
    const ParameterPath p = path();
    s = InputShift::impulse(num("shift.base_level", p.p_minus()), b, r, time_key("shift.t_c1", "0"),
                            time_key("shift.t_c2", "0"));
  } else {
    if (has("shift.base_level")) throw ConfigError("key 'shift.base_level' applies to impulse only");
    const double a = num("shift.a", input_parameter(params()));
    s = kind == ShiftKind::monotone ? InputShift::monotone(a, b, r, time_key("shift.t_c", "4T"))
                                    : InputShift::nonmonotone(a, b, r, time_key("shift.t_c", "4T"));
  }
  try {
    s.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return s;
}

std::vector<State> RunConfig::initial_list() const {
  std::vector<State> out;
  std::stringstream ss(str("initial.list", ""));
  std::string item;
  while (std::getline(ss, item, ';')) {
    item = trim(item);
    if (item.empty()) continue;
    std::istringstream pair(item);
    State s;
    std::string rest;
    if (!(pair >> s.x >> s.y) || (pair >> rest)) {
      throw ConfigError("key 'initial.list': expected 'x y; x y; ...', got '" + item + "'");
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace rptip
