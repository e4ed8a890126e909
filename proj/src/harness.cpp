#include "pisrl/harness.hpp"

#include <cmath>
#include <fstream>

#include "pisrl/car_parking.hpp"
#include "pisrl/mc_valuation.hpp"
#include "pisrl/parameter_estimation.hpp"
#include "pisrl/pole_balancing.hpp"

namespace pisrl {

namespace {

Rect rect_override(const ConfigMap& map, const std::string& prefix, Rect fallback) {
  Rect r = fallback;
  r.x_min = map.get_real(prefix + ".x_min", r.x_min);
  r.x_max = map.get_real(prefix + ".x_max", r.x_max);
  r.y_min = map.get_real(prefix + ".y_min", r.y_min);
  r.y_max = map.get_real(prefix + ".y_max", r.y_max);
  return r;
}

CarParkingParams car_params(const ConfigMap& map) {
  CarParkingParams p;
  p.length = map.get_real("car.length", p.length);
  p.width = map.get_real("car.width", p.length / 2.0);
  p.speed = map.get_real("car.speed", p.speed);
  p.max_steering = map.get_real("car.max_steering", p.max_steering);
  p.timestep = map.get_real("car.timestep", p.timestep);
  p.start_x = map.get_real("car.start_x", p.start_x);
  p.start_y = map.get_real("car.start_y", p.start_y);
  p.start_heading = map.get_real("car.start_heading", p.start_heading);
  p.goal_x = map.get_real("car.goal_x", p.goal_x);
  p.goal_y = map.get_real("car.goal_y", p.goal_y);
  p.driving_area = rect_override(map, "car.area", p.driving_area);
  p.garage = rect_override(map, "car.garage", p.garage);
  p.obstacle = rect_override(map, "car.obstacle", p.obstacle);
  p.action_noise_std = map.get_real("car.action_noise_std", p.action_noise_std);
  p.reward_noise_std = map.get_real("car.reward_noise_std", p.reward_noise_std);
  p.max_steps = static_cast<std::size_t>(map.get_uint("car.max_steps", p.max_steps));
  return p;
}

PoleBalancingParams pole_params(const ConfigMap& map) {
  PoleBalancingParams p;
  p.angle_limit = map.get_real("pole.angle_limit_deg", 12.0) * M_PI / 180.0;
  p.track_limit = map.get_real("pole.track_limit", p.track_limit);
  p.episode_steps = static_cast<std::size_t>(map.get_uint("pole.episode_steps", p.episode_steps));
  p.cart_mass = map.get_real("pole.cart_mass", p.cart_mass);
  p.pole_mass = map.get_real("pole.pole_mass", p.pole_mass);
  p.pole_half_length = map.get_real("pole.half_length", p.pole_half_length);
  p.gravity = map.get_real("pole.gravity", p.gravity);
  p.timestep = map.get_real("pole.timestep", p.timestep);
  p.force_limit = map.get_real("pole.force_limit", p.force_limit);
  p.action_noise_std = map.get_real("pole.action_noise_std", p.action_noise_std);
  p.reward_noise_std = map.get_real("pole.reward_noise_std", p.reward_noise_std);
  p.reset_jitter = map.get_real("pole.reset_jitter", p.reset_jitter);
  return p;
}

}  // namespace

EnvBundle make_environment(const ExperimentConfig& config) {
  EnvBundle bundle;
  if (config.environment == "car") {
    const CarParkingParams p = car_params(config.raw);
    bundle.env = std::make_unique<CarParkingEnv>(p);
    bundle.teacher = std::make_unique<CarTeacher>(p);
  } else {
    const PoleBalancingParams p = pole_params(config.raw);
    bundle.env = std::make_unique<PoleBalancingEnv>(p);
    bundle.teacher = std::make_unique<PoleTeacher>(p);
  }
  return bundle;
}

ResolvedParameters resolve_parameters(const ExperimentConfig& config, Environment& env,
                                      const Teacher& teacher, std::uint64_t replica_seed) {
  ResolvedParameters out{config.density_threshold, config.capacity};
  if (!config.auto_density_threshold && !config.auto_capacity) return out;

  Rng rng = make_stream(replica_seed, StreamId::estimate, NoiseRole::environment);
  std::vector<Trajectory> trajectories;
  trajectories.reserve(config.estimate_episodes);
  for (std::size_t e = 0; e < config.estimate_episodes; ++e) {
    Trajectory t;
    Vec state = env.reset(rng);
    t.states.push_back(state);
    for (std::size_t k = 0; k < env.max_episode_steps(); ++k) {
      StepOutcome outcome = env.step(state, teacher.action(state), rng);
      state = std::move(outcome.next_state);
      t.states.push_back(state);
      if (outcome.terminal) break;
    }
    trajectories.push_back(std::move(t));
  }
  if (config.auto_density_threshold) {
    out.density_threshold = estimate_density_threshold(trajectories.front());
  }
  if (config.auto_capacity) {
    out.capacity = estimate_capacity(trajectories, out.density_threshold);
  }
  return out;
}

PipelineResult run_pipeline(const ExperimentConfig& config, std::uint64_t replica_seed,
                            const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const auto marker = out_dir / "INCOMPLETE";
  write_text_file(marker.string(), "pipeline running\n");

  PipelineResult result;
  try {
    EnvBundle bundle = make_environment(config);
    Environment& env = *bundle.env;
    const Teacher& teacher = *bundle.teacher;

    result.parameters = resolve_parameters(config, env, teacher, replica_seed);

    // Phase 1: behavioral cloning.
    CloneLimits limits{config.clone_max_episodes, config.clone_stop_window,
                       config.clone_stop_fraction};
    Rng clone_rng = make_stream(replica_seed, StreamId::clone, NoiseRole::environment);
    auto [base, clone_report] =
        clone_behavior(env, teacher, result.parameters.density_threshold,
                       result.parameters.capacity, limits, clone_rng);
    for (std::size_t i = 0; i < clone_report.episodes.size(); ++i) {
      const auto& ep = clone_report.episodes[i];
      result.metrics.rows.push_back(MetricsRow{"clone", i, ep.steps_total,
                                               ep.cumulative_reward, ep.failure,
                                               ep.steps_teacher, ep.base_size, 0, ep.inserted});
    }
    base.save_file((out_dir / "base_clone.cb").string());
    result.metrics.summaries.push_back(
        summarize("clone", result.metrics.phase_rows("clone"), base.size()));

    // Cloned-policy rollout (also feeds the improvement gate when configured).
    Rng eval_rng = make_stream(replica_seed, StreamId::clone_eval, NoiseRole::environment);
    const auto eval_rows = evaluate_policy(base, env, &teacher, config.eval_episodes, eval_rng);
    for (std::size_t i = 0; i < eval_rows.size(); ++i) {
      const auto& ep = eval_rows[i];
      result.metrics.rows.push_back(MetricsRow{"clone_eval", i, ep.steps,
                                               ep.cumulative_reward, ep.failure,
                                               ep.steps_teacher, base.size(), 0, 0});
    }
    result.clone_eval_mean = mean_reward(eval_rows);
    result.metrics.summaries.push_back(
        summarize("clone_eval", result.metrics.phase_rows("clone_eval"), base.size()));

    // Phase 2a: Monte-Carlo valuation of the cloned cases.
    Rng mc_rng = make_stream(replica_seed, StreamId::mc, NoiseRole::environment);
    const auto mc_rows =
        mc_evaluate(base, env, teacher, config.discount, config.mc_episodes, mc_rng);
    for (std::size_t i = 0; i < mc_rows.size(); ++i) {
      const auto& ep = mc_rows[i];
      result.metrics.rows.push_back(MetricsRow{"mc", i, ep.steps, ep.cumulative_reward,
                                               ep.failure, ep.steps_teacher, base.size(), 0,
                                               0});
    }
    base.save_file((out_dir / "base_valued.cb").string());
    result.metrics.summaries.push_back(
        summarize("mc", result.metrics.phase_rows("mc"), base.size()));

    // Phase 2b: risk-bounded improvement.
    ImproveOptions opts;
    opts.episodes = config.improve_episodes;
    opts.sigma = config.sigma;
    opts.gamma = config.discount;
    opts.alpha = config.learning_rate;
    opts.capacity = result.parameters.capacity;
    opts.auto_update_threshold = config.auto_update_threshold;
    opts.fixed_update_threshold = config.fixed_update_threshold;
    opts.initial_max_total_reward =
        config.improve_init_max_from_clone ? result.clone_eval_mean : 0.0;
    Rng improve_env_rng = make_stream(replica_seed, StreamId::improve, NoiseRole::environment);
    Rng improve_explore_rng =
        make_stream(replica_seed, StreamId::improve, NoiseRole::exploration);
    const ImproveResult improved =
        improve(base, env, teacher, opts, improve_env_rng, improve_explore_rng);
    for (const auto& row : improved.episodes) {
      result.metrics.rows.push_back(MetricsRow{"improve", row.episode, row.steps,
                                               row.total_reward, row.failure,
                                               row.teacher_steps, row.base_size,
                                               row.replacements, row.insertions});
    }
    base.save_file((out_dir / "base_improved.cb").string());
    result.metrics.summaries.push_back(
        summarize("improve", result.metrics.phase_rows("improve"), base.size()));

    const auto improve_summary = result.metrics.summaries.back();
    result.improve_mean = improve_summary.mean_reward;
    result.improve_failures = improve_summary.total_failures;
    result.final_base_size = base.size();

    write_text_file((out_dir / "clone.csv").string(),
                    metrics_csv(result.metrics.phase_rows("clone")));
    write_text_file((out_dir / "clone_eval.csv").string(),
                    metrics_csv(result.metrics.phase_rows("clone_eval")));
    write_text_file((out_dir / "mc.csv").string(), metrics_csv(result.metrics.phase_rows("mc")));
    write_text_file((out_dir / "improve.csv").string(),
                    metrics_csv(result.metrics.phase_rows("improve")));
    write_text_file((out_dir / "summary.csv").string(), summary_csv(result.metrics.summaries));
  } catch (const std::exception& e) {
    write_text_file(marker.string(), std::string("pipeline fault: ") + e.what() + "\n");
    throw;
  }
  std::filesystem::remove(marker);
  return result;
}

SweepResult sweep(const ExperimentConfig& config) {
  if (config.sigma_list.empty()) {
    throw ConfigError("config key 'sigma_list': sweep needs at least one sigma");
  }
  SweepResult result;
  const std::filesystem::path out_root(config.output_dir);
  for (double sigma : config.sigma_list) {
    std::vector<double> rewards;
    std::vector<double> failures;
    for (std::uint64_t rep = 0; rep < config.replicas; ++rep) {
      ExperimentConfig cell_config = config;
      cell_config.sigma = sigma;
      const std::uint64_t replica_seed = config.master_seed + rep;
      const auto cell_dir = out_root / ("sigma_" + format_double(sigma)) /
                            ("rep_" + std::to_string(rep));
      const PipelineResult r = run_pipeline(cell_config, replica_seed, cell_dir);
      result.cells.push_back(
          SweepCell{sigma, rep, r.improve_mean, r.improve_failures});
      rewards.push_back(r.improve_mean);
      failures.push_back(static_cast<double>(r.improve_failures));
    }
    const auto stats = [](const std::vector<double>& xs) {
      double mean = 0.0;
      for (double x : xs) mean += x;
      mean /= static_cast<double>(xs.size());
      double var = 0.0;
      for (double x : xs) var += (x - mean) * (x - mean);
      var = xs.size() > 1 ? var / static_cast<double>(xs.size() - 1) : 0.0;
      return std::pair<double, double>{mean, std::sqrt(var)};
    };
    const auto [fail_mean, fail_sd] = stats(failures);
    const auto [rew_mean, rew_sd] = stats(rewards);
    result.rows.push_back(
        SweepRow{sigma, config.replicas, fail_mean, fail_sd, rew_mean, rew_sd});
  }
  std::filesystem::create_directories(out_root);
  write_text_file((out_root / "sweep_summary.csv").string(), sweep_csv(result.rows));
  return result;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "sigma,replicas,mean_failures,stddev_failures,mean_reward,stddev_reward\n";
  for (const auto& r : rows) {
    out += format_double(r.sigma);
    out += ',' + std::to_string(r.replicas);
    out += ',' + format_double(r.mean_failures);
    out += ',' + format_double(r.stddev_failures);
    out += ',' + format_double(r.mean_reward);
    out += ',' + format_double(r.stddev_reward);
    out += '\n';
  }
  return out;
}

std::vector<std::size_t> pareto_front(const std::vector<std::pair<double, double>>& points) {
  std::vector<std::size_t> front;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < points.size() && !dominated; ++j) {
      if (j == i) continue;
      const bool no_worse =
          points[j].first <= points[i].first && points[j].second >= points[i].second;
      const bool strictly_better =
          points[j].first < points[i].first || points[j].second > points[i].second;
      dominated = no_worse && strictly_better;
    }
    if (!dominated) front.push_back(i);
  }
  return front;
}

void export_known_space(const CaseBase& base, const std::filesystem::path& out_file) {
  std::string out;
  for (std::size_t i = 0; i < base.state_dim(); ++i) {
    out += "s" + std::to_string(i) + ",";
  }
  out += "value,use_count\n";
  for (const Case& c : base.cases()) {
    for (double v : c.state) out += format_double(v) + ",";
    out += format_double(c.value) + ',' + std::to_string(c.use_count) + '\n';
  }
  write_text_file(out_file.string(), out);
}

}  // namespace pisrl
