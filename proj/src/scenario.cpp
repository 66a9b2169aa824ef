#include "smoothsafe/scenario.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

namespace smoothsafe {

using nlohmann::json;

namespace {

std::string join(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || item.key() == a;
    if (!known) throw ConfigError(join(path, item.key()), "unknown key");
  }
}

double number(const json& obj, const std::string& path, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(join(path, key), "expected a number");
  return v.get<double>();
}

bool boolean(const json& obj, const std::string& path, const char* key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_boolean()) throw ConfigError(join(path, key), "expected true or false");
  return v.get<bool>();
}

std::string text(const json& obj, const std::string& path, const char* key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(join(path, key), "expected a string");
  return v.get<std::string>();
}

Eigen::VectorXd vector(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "expected an array of numbers");
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ConfigError(path + "." + std::to_string(i), "expected a number");
    out[static_cast<Eigen::Index>(i)] = v[i].get<double>();
  }
  return out;
}

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (double x : v) out.push_back(x);
  return out;
}

template <class Fn>
auto with_key(const std::string& key, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& ex) {
    throw ConfigError(key, ex.what());
  }
}

TransitionShape shape_of(const json& obj, const std::string& path, TransitionShape fallback) {
  if (!obj.contains("shape")) return fallback;
  const std::string name = text(obj, path, "shape", "");
  return with_key(join(path, "shape"), [&] { return parse_transition_shape(name); });
}

FilterConfig filter_from_json(const json& f, const std::string& path) {
  check_keys(f, path, {"kind", "weight", "gate", "classk", "penalty"});
  FilterConfig cfg;
  if (f.contains("kind")) cfg.kind = parse_filter_kind(text(f, path, "kind", ""));
  if (f.contains("weight")) {
    const std::string key = join(path, "weight");
    const json& w = f.at("weight");
    if (!w.is_array() || w.empty()) throw ConfigError(key, "expected a square array of rows");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(w.size()), static_cast<Eigen::Index>(w.size()));
    for (std::size_t r = 0; r < w.size(); ++r) {
      const Eigen::VectorXd row = vector(w[r], key + "." + std::to_string(r));
      if (row.size() != m.cols()) throw ConfigError(key, "W must be square");
      m.row(static_cast<Eigen::Index>(r)) = row.transpose();
    }
    cfg.weight = WeightMatrix(m, key);
  }
  if (f.contains("gate")) {
    const std::string p = join(path, "gate");
    const json& g = f.at("gate");
    check_keys(g, p, {"epsilon", "delta", "shape"});
    cfg.gate.epsilon = number(g, p, "epsilon", cfg.gate.epsilon);
    cfg.gate.delta = number(g, p, "delta", cfg.gate.delta);
    cfg.gate.shape = shape_of(g, p, cfg.gate.shape);
  }
  if (f.contains("classk")) {
    const std::string p = join(path, "classk");
    const json& k = f.at("classk");
    check_keys(k, p, {"alpha0", "form"});
    cfg.classk.alpha0 = number(k, p, "alpha0", cfg.classk.alpha0);
    if (text(k, p, "form", "Linear") != "Linear") throw ConfigError(join(p, "form"), "only Linear is supported");
  }
  if (f.contains("penalty")) {
    const std::string p = join(path, "penalty");
    const json& k = f.at("penalty");
    check_keys(k, p, {"delta", "mu", "psi_max", "shape"});
    cfg.penalty.delta = number(k, p, "delta", cfg.penalty.delta);
    cfg.penalty.mu = number(k, p, "mu", cfg.penalty.mu);
    cfg.penalty.psi_max = number(k, p, "psi_max", cfg.penalty.psi_max);
    cfg.penalty.shape = shape_of(k, p, cfg.penalty.shape);
  }
  return cfg;
}

}  // namespace

json scenario_to_json(const Scenario& sc) {
  json doc;
  doc["system"] = to_string(sc.system);
  doc["x0"] = vector_json(sc.x0);
  doc["goal"] = vector_json(sc.goal);
  doc["duration"] = sc.duration;
  doc["dt"] = sc.dt;
  doc["feedforward"] = sc.feedforward;
  doc["start_on_field"] = sc.start_on_field;
  const GainSet& g = sc.gains;
  doc["gains"] = {{"k", g.k},         {"k_p", g.k_p},   {"k_v", g.k_v},         {"k_theta", g.k_theta},
                  {"k_omega", g.k_omega}, {"mass", g.mass}, {"inertia", g.inertia}, {"gravity", g.gravity}};
  doc["obstacles"] = json::array();
  for (const Obstacle& o : sc.obstacles)
    doc["obstacles"].push_back({{"center", vector_json(o.center)}, {"radius", o.radius}, {"margin", o.margin}});

  const FilterConfig& f = sc.filter;
  json weight = json::array();
  for (Eigen::Index r = 0; r < f.weight.matrix().rows(); ++r)
    weight.push_back(vector_json(f.weight.matrix().row(r).transpose()));
  doc["filter"] = {
      {"kind", to_string(f.kind)},
      {"weight", weight},
      {"gate", {{"epsilon", f.gate.epsilon}, {"delta", f.gate.delta}, {"shape", to_string(f.gate.shape)}}},
      {"classk", {{"alpha0", f.classk.alpha0}, {"form", "Linear"}}},
      {"penalty",
       {{"delta", f.penalty.delta},
        {"mu", f.penalty.mu},
        {"psi_max", f.penalty.psi_max},
        {"shape", to_string(f.penalty.shape)}}},
  };
  return doc;
}

Scenario scenario_from_json(const json& doc) {
  check_keys(doc, "",
             {"system", "x0", "goal", "duration", "dt", "feedforward", "start_on_field", "gains", "obstacles",
              "filter"});
  Scenario sc;
  if (doc.contains("system")) sc.system = parse_system_kind(text(doc, "", "system", ""));
  sc.x0 = StateVec::Zero(sc.state_dim());
  if (doc.contains("x0")) sc.x0 = vector(doc.at("x0"), "x0");
  if (doc.contains("goal")) sc.goal = vector(doc.at("goal"), "goal");
  sc.duration = number(doc, "", "duration", sc.duration);
  sc.dt = number(doc, "", "dt", sc.dt);
  sc.feedforward = boolean(doc, "", "feedforward", sc.feedforward);
  sc.start_on_field = boolean(doc, "", "start_on_field", sc.start_on_field);

  if (doc.contains("gains")) {
    const json& g = doc.at("gains");
    check_keys(g, "gains", {"k", "k_p", "k_v", "k_theta", "k_omega", "mass", "inertia", "gravity"});
    GainSet& s = sc.gains;
    s.k = number(g, "gains", "k", s.k);
    s.k_p = number(g, "gains", "k_p", s.k_p);
    s.k_v = number(g, "gains", "k_v", s.k_v);
    s.k_theta = number(g, "gains", "k_theta", s.k_theta);
    s.k_omega = number(g, "gains", "k_omega", s.k_omega);
    s.mass = number(g, "gains", "mass", s.mass);
    s.inertia = number(g, "gains", "inertia", s.inertia);
    s.gravity = number(g, "gains", "gravity", s.gravity);
  }

  if (doc.contains("obstacles")) {
    const json& list = doc.at("obstacles");
    if (!list.is_array()) throw ConfigError("obstacles", "expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string p = "obstacles." + std::to_string(i);
      const json& o = list[i];
      check_keys(o, p, {"center", "radius", "margin"});
      Obstacle ob;
      if (!o.contains("center")) throw ConfigError(p + ".center", "required");
      ob.center = vector(o.at("center"), p + ".center");
      ob.radius = number(o, p, "radius", ob.radius);
      ob.margin = number(o, p, "margin", ob.margin);
      sc.obstacles.push_back(ob);
    }
  }

  if (doc.contains("filter")) sc.filter = filter_from_json(doc.at("filter"), "filter");
  return sc;
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError(assignment, "override must look like key.path=value");
  const std::string path = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);

  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;

  json* node = &doc;
  std::istringstream parts(path);
  std::string part;
  std::vector<std::string> segments;
  while (std::getline(parts, part, '.')) segments.push_back(part);
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const std::string& s = segments[i];
    const bool last = i + 1 == segments.size();
    if (node->is_array()) {
      std::size_t idx = 0;
      try {
        std::size_t used = 0;
        idx = std::stoul(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
      } catch (const std::exception&) {
        throw ConfigError(path, "expected an array index at '" + s + "'");
      }
      if (idx >= node->size()) throw ConfigError(path, "index " + s + " out of range");
      node = &(*node)[idx];
    } else if (node->is_object()) {
      if (!node->contains(s)) throw ConfigError(path, "unknown key");
      node = &(*node)[s];
    } else {
      throw ConfigError(path, "cannot descend into a scalar");
    }
    if (last) *node = value;
  }
}

Scenario parse_scenario(const std::string& text, const std::vector<std::string>& overrides) {
  json doc = json::parse(text, nullptr, false, true);
  if (doc.is_discarded()) throw ConfigError("<file>", "not valid JSON");
  Scenario sc = scenario_from_json(doc);
  if (!overrides.empty()) {
    json full = scenario_to_json(sc);
    for (const std::string& o : overrides) apply_override(full, o);
    sc = scenario_from_json(full);
  }
  sc.validate();
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open scenario file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), overrides);
}

std::string dump_scenario(const Scenario& sc) { return scenario_to_json(sc).dump(2) + "\n"; }

}  // namespace smoothsafe
