#include "smalife/config.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "text.hpp"

namespace smalife {

using nlohmann::json;

namespace {

template <typename T>
void read(const json& node, const char* key, T& out) {
  if (!node.is_object() || !node.contains(key)) return;
  try {
    out = node.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

json thermal_json(const ThermalParams& p) {
  return {{"alpha1", p.alpha1}, {"alpha2", p.alpha2}, {"t_amb", p.t_amb}};
}

ThermalParams thermal_from(const json& node, ThermalParams p) {
  read(node, "alpha1", p.alpha1);
  read(node, "alpha2", p.alpha2);
  read(node, "t_amb", p.t_amb);
  return p;
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

double number(const FlatConfig::value_type& kv) {
  if (auto v = text::to_double(kv.second)) return *v;
  throw ConfigError("metadata key '" + kv.first + "' is not a number: '" + kv.second + "'");
}

}  // namespace

SweepConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(line_of(text, e.byte == 0 ? 0 : e.byte - 1), e.what());
  }
  if (!doc.is_object()) throw ParseError(1, "config root must be an object");

  SweepConfig cfg;
  TrialConfig& t = cfg.base;

  if (doc.contains("trial")) {
    const json& n = doc["trial"];
    read(n, "label", t.label);
    read(n, "dt", t.dt);
    read(n, "v_max", t.v_max);
    read(n, "max_duration_s", t.max_duration_s);
    if (n.contains("profile")) t.profile = profile_from_string(n["profile"].get<std::string>());
  }
  t.thermal = thermal_from(doc.value("thermal", json::object()), t.thermal);
  t.thermal.dt = t.dt;

  if (doc.contains("supervisor")) {
    const json& n = doc["supervisor"];
    read(n, "t_set", t.t_set);
    read(n, "gamma", t.gamma);
    if (n.contains("model") && !n["model"].is_null()) {
      ThermalParams m = thermal_from(n["model"], t.thermal);
      m.dt = t.dt;
      t.supervisor_model = m;
    }
  }
  if (doc.contains("fatigue")) {
    const json& n = doc["fatigue"];
    FatigueParams& f = t.fatigue;
    read(n, "f0", f.f0);
    read(n, "t_act", f.t_act);
    read(n, "w", f.w);
    read(n, "t_dmg", f.t_dmg);
    read(n, "t_knee", f.t_knee);
    read(n, "d_plateau", f.d_plateau);
    read(n, "kappa", f.kappa);
    read(n, "d_min", f.d_min);
    read(n, "eta", f.eta);
  }
  if (doc.contains("noise")) {
    const json& n = doc["noise"];
    read(n, "sigma_t", t.noise.sigma_t);
    read(n, "sigma_f", t.noise.sigma_f);
    read(n, "seed", t.noise.seed);
  }

  t.c1.t_cool = t.thermal.t_amb + 1.0;
  if (doc.contains("c1")) {
    const json& n = doc["c1"];
    read(n, "tol", t.c1.tol);
    read(n, "hold_s", t.c1.hold_s);
    read(n, "duty", t.c1.duty);
    read(n, "cool_timeout_s", t.c1.cool_timeout_s);
    read(n, "heat_timeout_s", t.c1.heat_timeout_s);
    if (n.contains("t_cool")) {
      const json& tc = n["t_cool"];
      if (tc.is_string() && tc.get<std::string>() == "auto") {
        t.c1.t_cool = t.thermal.t_amb + 1.0;
      } else if (tc.is_number()) {
        t.c1.t_cool = tc.get<double>();
      } else {
        throw ConfigError("c1.t_cool must be a number or \"auto\"");
      }
    }
  }
  if (doc.contains("c2")) {
    const json& n = doc["c2"];
    read(n, "heat_s", t.c2.heat_s);
    read(n, "cool_s", t.c2.cool_s);
    read(n, "duty", t.c2.duty);
  }
  if (doc.contains("sweep")) {
    const json& n = doc["sweep"];
    read(n, "c1", cfg.c1_t_sets);
    read(n, "c2", cfg.c2_t_sets);
  }

  t.validate();
  return cfg;
}

SweepConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const SweepConfig& cfg) {
  const TrialConfig& t = cfg.base;
  json doc;
  doc["trial"] = {{"label", t.label},
                  {"profile", std::string(to_string(t.profile))},
                  {"dt", t.dt},
                  {"v_max", t.v_max},
                  {"max_duration_s", t.max_duration_s}};
  doc["thermal"] = thermal_json(t.thermal);
  doc["supervisor"] = {{"t_set", t.t_set}, {"gamma", t.gamma}, {"model", nullptr}};
  if (t.supervisor_model) doc["supervisor"]["model"] = thermal_json(*t.supervisor_model);
  const FatigueParams& f = t.fatigue;
  doc["fatigue"] = {{"f0", f.f0},           {"t_act", f.t_act}, {"w", f.w},         {"t_dmg", f.t_dmg},
                    {"t_knee", f.t_knee},   {"d_plateau", f.d_plateau},             {"kappa", f.kappa},
                    {"d_min", f.d_min},     {"eta", f.eta}};
  doc["noise"] = {{"sigma_t", t.noise.sigma_t}, {"sigma_f", t.noise.sigma_f}, {"seed", t.noise.seed}};
  doc["c1"] = {{"tol", t.c1.tol},
               {"hold_s", t.c1.hold_s},
               {"t_cool", t.c1.t_cool},
               {"duty", t.c1.duty},
               {"cool_timeout_s", t.c1.cool_timeout_s},
               {"heat_timeout_s", t.c1.heat_timeout_s}};
  doc["c2"] = {{"heat_s", t.c2.heat_s}, {"cool_s", t.c2.cool_s}, {"duty", t.c2.duty}};
  doc["sweep"] = {{"c1", cfg.c1_t_sets}, {"c2", cfg.c2_t_sets}};
  return doc.dump(2) + "\n";
}

FlatConfig flatten(const TrialConfig& t) {
  using text::exact;
  FlatConfig out{
      {"label", t.label},
      {"profile", std::string(to_string(t.profile))},
      {"t_set", exact(t.t_set)},
      {"gamma", exact(t.gamma)},
      {"v_max", std::to_string(t.v_max)},
      {"dt", exact(t.dt)},
      {"max_duration_s", exact(t.max_duration_s)},
      {"thermal.alpha1", exact(t.thermal.alpha1)},
      {"thermal.alpha2", exact(t.thermal.alpha2)},
      {"thermal.t_amb", exact(t.thermal.t_amb)},
  };
  if (t.supervisor_model) {
    out.emplace_back("supervisor_model.alpha1", exact(t.supervisor_model->alpha1));
    out.emplace_back("supervisor_model.alpha2", exact(t.supervisor_model->alpha2));
    out.emplace_back("supervisor_model.t_amb", exact(t.supervisor_model->t_amb));
  }
  const FatigueParams& f = t.fatigue;
  out.insert(out.end(), {
                            {"fatigue.f0", exact(f.f0)},
                            {"fatigue.t_act", exact(f.t_act)},
                            {"fatigue.w", exact(f.w)},
                            {"fatigue.t_dmg", exact(f.t_dmg)},
                            {"fatigue.t_knee", exact(f.t_knee)},
                            {"fatigue.d_plateau", exact(f.d_plateau)},
                            {"fatigue.kappa", exact(f.kappa)},
                            {"fatigue.d_min", exact(f.d_min)},
                            {"fatigue.eta", exact(f.eta)},
                            {"noise.sigma_t", exact(t.noise.sigma_t)},
                            {"noise.sigma_f", exact(t.noise.sigma_f)},
                            {"noise.seed", std::to_string(t.noise.seed)},
                            {"c1.tol", exact(t.c1.tol)},
                            {"c1.hold_s", exact(t.c1.hold_s)},
                            {"c1.t_cool", exact(t.c1.t_cool)},
                            {"c1.duty", exact(t.c1.duty)},
                            {"c1.cool_timeout_s", exact(t.c1.cool_timeout_s)},
                            {"c1.heat_timeout_s", exact(t.c1.heat_timeout_s)},
                            {"c2.heat_s", exact(t.c2.heat_s)},
                            {"c2.cool_s", exact(t.c2.cool_s)},
                            {"c2.duty", exact(t.c2.duty)},
                        });
  return out;
}

TrialConfig unflatten(const FlatConfig& flat) {
  TrialConfig t;
  ThermalParams model;
  bool has_model = false;
  const std::map<std::string, double*> numeric{
      {"t_set", &t.t_set},
      {"gamma", &t.gamma},
      {"dt", &t.dt},
      {"max_duration_s", &t.max_duration_s},
      {"thermal.alpha1", &t.thermal.alpha1},
      {"thermal.alpha2", &t.thermal.alpha2},
      {"thermal.t_amb", &t.thermal.t_amb},
      {"supervisor_model.alpha1", &model.alpha1},
      {"supervisor_model.alpha2", &model.alpha2},
      {"supervisor_model.t_amb", &model.t_amb},
      {"fatigue.f0", &t.fatigue.f0},
      {"fatigue.t_act", &t.fatigue.t_act},
      {"fatigue.w", &t.fatigue.w},
      {"fatigue.t_dmg", &t.fatigue.t_dmg},
      {"fatigue.t_knee", &t.fatigue.t_knee},
      {"fatigue.d_plateau", &t.fatigue.d_plateau},
      {"fatigue.kappa", &t.fatigue.kappa},
      {"fatigue.d_min", &t.fatigue.d_min},
      {"fatigue.eta", &t.fatigue.eta},
      {"noise.sigma_t", &t.noise.sigma_t},
      {"noise.sigma_f", &t.noise.sigma_f},
      {"c1.tol", &t.c1.tol},
      {"c1.hold_s", &t.c1.hold_s},
      {"c1.t_cool", &t.c1.t_cool},
      {"c1.duty", &t.c1.duty},
      {"c1.cool_timeout_s", &t.c1.cool_timeout_s},
      {"c1.heat_timeout_s", &t.c1.heat_timeout_s},
      {"c2.heat_s", &t.c2.heat_s},
      {"c2.cool_s", &t.c2.cool_s},
      {"c2.duty", &t.c2.duty},
  };
  for (const auto& kv : flat) {
    const auto& [key, value] = kv;
    if (auto it = numeric.find(key); it != numeric.end()) {
      *it->second = number(kv);
      if (key.starts_with("supervisor_model.")) has_model = true;
    } else if (key == "label") {
      t.label = value;
    } else if (key == "profile") {
      t.profile = profile_from_string(value);
    } else if (key == "v_max") {
      auto v = text::to_int<int>(value);
      if (!v) throw ConfigError("metadata key 'v_max' is not an integer: '" + value + "'");
      t.v_max = *v;
    } else if (key == "noise.seed") {
      auto v = text::to_int<std::uint64_t>(value);
      if (!v) throw ConfigError("metadata key 'noise.seed' is not an unsigned integer: '" + value + "'");
      t.noise.seed = *v;
    } else {
      throw ConfigError("unknown metadata key '" + key + "'");
    }
  }
  t.thermal.dt = t.dt;
  if (has_model) {
    model.dt = t.dt;
    t.supervisor_model = model;
  }
  return t;
}

std::string config_hash(const TrialConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::string_view s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& [k, v] : flatten(cfg)) {
    mix(k);
    mix("=");
    mix(v);
    mix("\n");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = hex[h & 0xF];
  return out;
}

}  // namespace smalife
