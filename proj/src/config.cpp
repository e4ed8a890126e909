#include "pisrl/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace pisrl {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_real(const std::string& key, const std::string& value) {
  double v = 0.0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw ConfigError("config key '" + key + "': expected a real number, got '" + value + "'");
  }
  if (!std::isfinite(v)) {
    throw ConfigError("config key '" + key + "': value must be finite");
  }
  return v;
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
  std::uint64_t v = 0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw ConfigError("config key '" + key + "': expected a non-negative integer, got '" +
                      value + "'");
  }
  return v;
}

}  // namespace

ConfigMap ConfigMap::parse_text(const std::string& text) {
  ConfigMap map;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected 'key = value', got '" + stripped + "'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    }
    map.set(key, value);
  }
  return map;
}

ConfigMap ConfigMap::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str());
}

void ConfigMap::set(const std::string& key, const std::string& value) {
  values_[key] = value;
}

bool ConfigMap::has(const std::string& key) const { return values_.count(key) > 0; }

std::string ConfigMap::get_string(const std::string& key, const std::string& fallback) const {
  touched_[key] = true;
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double ConfigMap::get_real(const std::string& key, double fallback) const {
  touched_[key] = true;
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_real(key, it->second);
}

std::uint64_t ConfigMap::get_uint(const std::string& key, std::uint64_t fallback) const {
  touched_[key] = true;
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_uint(key, it->second);
}

bool ConfigMap::get_bool(const std::string& key, bool fallback) const {
  touched_[key] = true;
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (it->second == "true" || it->second == "1" || it->second == "on") return true;
  if (it->second == "false" || it->second == "0" || it->second == "off") return false;
  throw ConfigError("config key '" + key + "': expected a boolean, got '" + it->second + "'");
}

std::vector<double> ConfigMap::get_real_list(const std::string& key,
                                             const std::vector<double>& fallback) const {
  touched_[key] = true;
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<double> out;
  std::string item;
  std::istringstream in(it->second);
  while (std::getline(in, item, ',')) {
    const std::string stripped = trim(item);
    if (stripped.empty()) {
      throw ConfigError("config key '" + key + "': empty list element");
    }
    out.push_back(parse_real(key, stripped));
  }
  if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
  return out;
}

std::vector<std::string> ConfigMap::unused_keys() const {
  std::vector<std::string> out;
  for (const auto& [key, value] : values_) {
    if (!touched_.count(key)) out.push_back(key);
  }
  return out;
}

ExperimentConfig load_experiment_config(ConfigMap map) {
  ExperimentConfig cfg;
  cfg.environment = map.get_string("env", cfg.environment);
  if (cfg.environment != "car" && cfg.environment != "pole") {
    throw ConfigError("config key 'env': expected 'car' or 'pole', got '" + cfg.environment +
                      "'");
  }
  cfg.master_seed = map.get_uint("seed", cfg.master_seed);
  cfg.replicas = map.get_uint("replicas", cfg.replicas);
  if (cfg.replicas == 0) throw ConfigError("config key 'replicas': must be positive");
  cfg.output_dir = map.get_string("out", cfg.output_dir);

  // Per-environment defaults; overridable below. Thresholds sit near the
  // mean inter-step state distance and capacities a little above one
  // route's coverage, so eviction pressure keeps rarely used cases cycling.
  if (cfg.environment == "car") {
    cfg.density_threshold = 0.1;
    cfg.capacity = 600;
  } else {
    cfg.density_threshold = 0.02;
    cfg.capacity = 16000;
  }

  const std::string theta = map.get_string("density_threshold", "");
  if (theta == "auto") {
    cfg.auto_density_threshold = true;
  } else if (!theta.empty()) {
    cfg.density_threshold = map.get_real("density_threshold", cfg.density_threshold);
    if (!(cfg.density_threshold > 0.0)) {
      throw ConfigError("config key 'density_threshold': must be positive");
    }
  }
  const std::string eta = map.get_string("capacity", "");
  if (eta == "auto") {
    cfg.auto_capacity = true;
  } else if (!eta.empty()) {
    cfg.capacity = map.get_uint("capacity", cfg.capacity);
    if (cfg.capacity == 0) throw ConfigError("config key 'capacity': must be positive");
  }
  cfg.estimate_episodes =
      static_cast<std::size_t>(map.get_uint("estimate_episodes", cfg.estimate_episodes));
  if (cfg.estimate_episodes == 0) {
    throw ConfigError("config key 'estimate_episodes': must be positive");
  }

  cfg.sigma = map.get_real("sigma", cfg.sigma);
  if (cfg.sigma < 0.0) throw ConfigError("config key 'sigma': must be non-negative");
  cfg.sigma_list = map.get_real_list("sigma_list", cfg.sigma_list);
  for (double s : cfg.sigma_list) {
    if (s < 0.0) throw ConfigError("config key 'sigma_list': entries must be non-negative");
  }

  const std::string ut = map.get_string("update_threshold", "auto");
  if (ut == "auto") {
    cfg.auto_update_threshold = true;
  } else {
    cfg.auto_update_threshold = false;
    cfg.fixed_update_threshold = map.get_real("update_threshold", 0.0);
    if (cfg.fixed_update_threshold < 0.0) {
      throw ConfigError("config key 'update_threshold': must be non-negative or 'auto'");
    }
  }
  cfg.discount = map.get_real("discount", cfg.discount);
  if (cfg.discount < 0.0 || cfg.discount > 1.0) {
    throw ConfigError("config key 'discount': must lie in [0, 1]");
  }
  cfg.learning_rate = map.get_real("learning_rate", cfg.learning_rate);
  if (!(cfg.learning_rate > 0.0)) {
    throw ConfigError("config key 'learning_rate': must be positive");
  }

  cfg.clone_max_episodes =
      static_cast<std::size_t>(map.get_uint("clone.max_episodes", cfg.clone_max_episodes));
  cfg.clone_stop_window =
      static_cast<std::size_t>(map.get_uint("clone.stop_window", cfg.clone_stop_window));
  cfg.clone_stop_fraction = map.get_real("clone.stop_fraction", cfg.clone_stop_fraction);
  cfg.eval_episodes = static_cast<std::size_t>(map.get_uint("eval_episodes", cfg.eval_episodes));
  cfg.mc_episodes = static_cast<std::size_t>(map.get_uint("mc.episodes", cfg.mc_episodes));
  cfg.improve_episodes =
      static_cast<std::size_t>(map.get_uint("improve.episodes", cfg.improve_episodes));
  cfg.improve_init_max_from_clone =
      map.get_bool("improve.init_max_from_clone", cfg.improve_init_max_from_clone);
  if (cfg.clone_max_episodes == 0 || cfg.clone_stop_window == 0 || cfg.mc_episodes == 0 ||
      cfg.improve_episodes == 0 || cfg.eval_episodes == 0) {
    throw ConfigError("episode budgets must be positive");
  }

  cfg.raw = std::move(map);
  return cfg;
}

}  // namespace pisrl
