#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "pisrl/behavior_cloning.hpp"
#include "pisrl/harness.hpp"
#include "pisrl/mc_valuation.hpp"
#include "pisrl/metrics.hpp"
#include "pisrl/parameter_estimation.hpp"

namespace {

namespace fs = std::filesystem;
using namespace pisrl;

// Remaining "--dotted.key value" tokens become config assignments.
void apply_overrides(ConfigMap& map, const std::vector<std::string>& extras) {
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& token = extras[i];
    if (token.rfind("--", 0) != 0 || token.size() <= 2) {
      throw ConfigError("unexpected argument '" + token + "' (overrides look like --key value)");
    }
    std::string key = token.substr(2);
    std::string value;
    const std::size_t eq = key.find('=');
    if (eq != std::string::npos) {
      value = key.substr(eq + 1);
      key = key.substr(0, eq);
    } else {
      if (i + 1 >= extras.size()) {
        throw ConfigError("override '--" + key + "' is missing a value");
      }
      value = extras[++i];
    }
    map.set(key, value);
  }
}

ExperimentConfig build_config(const std::string& config_path,
                              const std::vector<std::string>& extras) {
  ConfigMap map = config_path.empty() ? ConfigMap() : ConfigMap::parse_file(config_path);
  apply_overrides(map, extras);
  ExperimentConfig cfg = load_experiment_config(std::move(map));
  // Touch every environment key so typos surface as leftovers.
  make_environment(cfg);
  const auto leftovers = cfg.raw.unused_keys();
  if (!leftovers.empty()) {
    std::string msg = "unknown config key(s):";
    for (const auto& k : leftovers) msg += " '" + k + "'";
    throw ConfigError(msg);
  }
  return cfg;
}

int cmd_estimate(const ExperimentConfig& cfg) {
  EnvBundle bundle = make_environment(cfg);
  ExperimentConfig forced = cfg;
  forced.auto_density_threshold = true;
  forced.auto_capacity = true;
  const ResolvedParameters p =
      resolve_parameters(forced, *bundle.env, *bundle.teacher, cfg.master_seed);
  std::cout << "density_threshold " << format_double(p.density_threshold) << "\n";
  std::cout << "capacity " << p.capacity << "\n";
  return 0;
}

int cmd_clone(const ExperimentConfig& cfg) {
  EnvBundle bundle = make_environment(cfg);
  const ResolvedParameters p =
      resolve_parameters(cfg, *bundle.env, *bundle.teacher, cfg.master_seed);
  CloneLimits limits{cfg.clone_max_episodes, cfg.clone_stop_window, cfg.clone_stop_fraction};
  Rng rng = make_stream(cfg.master_seed, StreamId::clone, NoiseRole::environment);
  auto [base, report] = clone_behavior(*bundle.env, *bundle.teacher, p.density_threshold,
                                       p.capacity, limits, rng);
  fs::create_directories(cfg.output_dir);
  const fs::path out(cfg.output_dir);
  base.save_file((out / "base_clone.cb").string());
  std::vector<MetricsRow> rows;
  for (std::size_t i = 0; i < report.episodes.size(); ++i) {
    const auto& ep = report.episodes[i];
    rows.push_back(MetricsRow{"clone", i, ep.steps_total, ep.cumulative_reward, ep.failure,
                              ep.steps_teacher, ep.base_size, 0, ep.inserted});
  }
  write_text_file((out / "clone.csv").string(), metrics_csv(rows));
  if (report.aborted_on_failure) {
    std::cerr << "warning: cloning hit a failure episode and stopped early\n";
  }
  std::cout << "episodes " << report.episodes_run << "\ncases " << base.size() << "\nsaved "
            << (out / "base_clone.cb").string() << "\n";
  return 0;
}

int cmd_evaluate(const ExperimentConfig& cfg, std::string base_path) {
  EnvBundle bundle = make_environment(cfg);
  const fs::path out(cfg.output_dir);
  if (base_path.empty()) base_path = (out / "base_clone.cb").string();
  CaseBase base = CaseBase::load_file(base_path);
  Rng rng = make_stream(cfg.master_seed, StreamId::mc, NoiseRole::environment);
  const auto mc_rows =
      mc_evaluate(base, *bundle.env, *bundle.teacher, cfg.discount, cfg.mc_episodes, rng);
  fs::create_directories(cfg.output_dir);
  base.save_file((out / "base_valued.cb").string());
  std::vector<MetricsRow> rows;
  for (std::size_t i = 0; i < mc_rows.size(); ++i) {
    const auto& ep = mc_rows[i];
    rows.push_back(MetricsRow{"mc", i, ep.steps, ep.cumulative_reward, ep.failure,
                              ep.steps_teacher, base.size(), 0, 0});
  }
  write_text_file((out / "mc.csv").string(), metrics_csv(rows));
  std::cout << "episodes " << mc_rows.size() << "\nsaved "
            << (out / "base_valued.cb").string() << "\n";
  return 0;
}

int cmd_improve(const ExperimentConfig& cfg, std::string base_path) {
  EnvBundle bundle = make_environment(cfg);
  const fs::path out(cfg.output_dir);
  if (base_path.empty()) base_path = (out / "base_valued.cb").string();
  CaseBase base = CaseBase::load_file(base_path);

  ImproveOptions opts;
  opts.episodes = cfg.improve_episodes;
  opts.sigma = cfg.sigma;
  opts.gamma = cfg.discount;
  opts.alpha = cfg.learning_rate;
  opts.capacity = cfg.raw.has("capacity") && !cfg.auto_capacity ? cfg.capacity : 0;
  opts.auto_update_threshold = cfg.auto_update_threshold;
  opts.fixed_update_threshold = cfg.fixed_update_threshold;
  Rng env_rng = make_stream(cfg.master_seed, StreamId::improve, NoiseRole::environment);
  Rng explore_rng = make_stream(cfg.master_seed, StreamId::improve, NoiseRole::exploration);
  const ImproveResult result =
      improve(base, *bundle.env, *bundle.teacher, opts, env_rng, explore_rng);

  fs::create_directories(cfg.output_dir);
  base.save_file((out / "base_improved.cb").string());
  std::vector<MetricsRow> rows;
  for (const auto& row : result.episodes) {
    rows.push_back(MetricsRow{"improve", row.episode, row.steps, row.total_reward, row.failure,
                              row.teacher_steps, row.base_size, row.replacements,
                              row.insertions});
  }
  write_text_file((out / "improve.csv").string(), metrics_csv(rows));
  std::cout << "episodes " << result.state.episodes_run << "\naccepted "
            << result.state.episodes_accepted << "\nfailures " << result.state.failures
            << "\nsaved " << (out / "base_improved.cb").string() << "\n";
  return 0;
}

int cmd_run(const ExperimentConfig& cfg) {
  const fs::path out(cfg.output_dir);
  for (std::uint64_t rep = 0; rep < cfg.replicas; ++rep) {
    const std::uint64_t replica_seed = cfg.master_seed + rep;
    const fs::path dir = cfg.replicas == 1 ? out : out / ("rep_" + std::to_string(rep));
    const PipelineResult r = run_pipeline(cfg, replica_seed, dir);
    std::cout << "replica " << rep << ": clone_eval_mean "
              << format_double(r.clone_eval_mean) << ", improve_mean "
              << format_double(r.improve_mean) << ", improve_failures "
              << r.improve_failures << ", cases " << r.final_base_size << "\n";
  }
  return 0;
}

int cmd_sweep(const ExperimentConfig& cfg) {
  const SweepResult result = sweep(cfg);
  std::cout << sweep_csv(result.rows);
  const fs::path out(cfg.output_dir);
  std::cout << "saved " << (out / "sweep_summary.csv").string() << "\n";
  return 0;
}

int cmd_export(const std::string& base_path, const std::string& out_file) {
  const CaseBase base = CaseBase::load_file(base_path);
  export_known_space(base, out_file);
  std::cout << "exported " << base.size() << " cases to " << out_file << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Risk-bounded safe policy improvement over a case-based policy"};
  app.require_subcommand(1);

  std::string config_path;
  std::string base_path;
  std::string out_file;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "configuration file (key = value lines)");
    sub->allow_extras();
    return sub;
  };

  auto* sc_estimate = add_common(app.add_subcommand(
      "estimate", "estimate density threshold and capacity from teacher episodes"));
  auto* sc_clone = add_common(app.add_subcommand("clone", "behavioral-cloning phase"));
  auto* sc_evaluate =
      add_common(app.add_subcommand("evaluate", "Monte-Carlo case valuation phase"));
  sc_evaluate->add_option("--base", base_path, "case-base file to value");
  auto* sc_improve = add_common(app.add_subcommand("improve", "risk-bounded improvement phase"));
  sc_improve->add_option("--base", base_path, "case-base file to improve");
  auto* sc_run = add_common(app.add_subcommand("run", "full pipeline (clone, value, improve)"));
  auto* sc_sweep = add_common(app.add_subcommand("sweep", "pipeline per sigma in sigma_list"));
  auto* sc_export = app.add_subcommand("export", "dump case states to CSV");
  sc_export->add_option("--base", base_path, "case-base file to export")->required();
  sc_export->add_option("--out-file", out_file, "destination CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sc_export->parsed()) return cmd_export(base_path, out_file);
    CLI::App* active = app.get_subcommands().front();
    const ExperimentConfig cfg = build_config(config_path, active->remaining());
    if (sc_estimate->parsed()) return cmd_estimate(cfg);
    if (sc_clone->parsed()) return cmd_clone(cfg);
    if (sc_evaluate->parsed()) return cmd_evaluate(cfg, base_path);
    if (sc_improve->parsed()) return cmd_improve(cfg, base_path);
    if (sc_run->parsed()) return cmd_run(cfg);
    if (sc_sweep->parsed()) return cmd_sweep(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
