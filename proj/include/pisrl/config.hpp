#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pisrl {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flat `key = value` store with `#` comments and dotted keys. Later
// assignments win, so command-line overrides are just extra assignments.
class ConfigMap {
 public:
  static ConfigMap parse_text(const std::string& text);
  static ConfigMap parse_file(const std::string& path);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_real(const std::string& key, double fallback) const;
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_real_list(const std::string& key,
                                    const std::vector<double>& fallback) const;

  // Keys that were never read by any getter; used to reject typos.
  std::vector<std::string> unused_keys() const;

  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
  mutable std::map<std::string, bool> touched_;
};

struct ExperimentConfig {
  std::string environment = "car";  // car | pole
  std::uint64_t master_seed = 1;
  std::uint64_t replicas = 1;
  std::string output_dir = "out";

  bool auto_density_threshold = false;
  double density_threshold = 0.1;
  bool auto_capacity = false;
  std::uint64_t capacity = 2000;
  std::size_t estimate_episodes = 10;

  double sigma = 0.0;
  std::vector<double> sigma_list;

  bool auto_update_threshold = true;
  double fixed_update_threshold = 0.0;
  double discount = 0.95;
  double learning_rate = 0.1;

  std::size_t clone_max_episodes = 100;
  std::size_t clone_stop_window = 10;
  double clone_stop_fraction = 0.01;
  std::size_t eval_episodes = 50;
  std::size_t mc_episodes = 30;
  std::size_t improve_episodes = 500;
  bool improve_init_max_from_clone = false;

  // Raw map kept for environment overrides (car.* / pole.* keys).
  ConfigMap raw;
};

// Builds and validates the experiment configuration. Throws ConfigError with
// the offending key in the message.
ExperimentConfig load_experiment_config(ConfigMap map);

}  // namespace pisrl
