#include "slice/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "slice/config_io.hpp"
#include "slice/csv.hpp"
#include "slice/ddpg.hpp"
#include "slice/des.hpp"
#include "slice/myopic.hpp"
#include "slice/queuing.hpp"
#include "slice/rollout.hpp"
#include "slice/traffic.hpp"

namespace slice {
namespace {

namespace fs = std::filesystem;

// Loads the config (or defaults) and prepares the output directory. Throws
// std::runtime_error with a printable message on any usage-level problem.
ExperimentConfig setup(const CliOptions& opts) {
  ExperimentConfig cfg;
  if (!opts.config_path.empty()) {
    cfg = load_config(opts.config_path);
  } else {
    cfg.validate();
  }
  std::error_code ec;
  fs::create_directories(opts.out_dir, ec);
  if (ec) {
    throw std::runtime_error(opts.out_dir +
                             ": cannot create output directory: " +
                             ec.message());
  }
  return cfg;
}

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

// Training trace: an explicit CSV wins; otherwise a fresh synthetic day per
// episode is drawn from the "trace" stream of the root seed, so the learner
// sees day-to-day traffic variation around the diurnal profile instead of
// memorizing one realization.
TrafficTrace make_training_trace(const ExperimentConfig& cfg,
                                 std::uint64_t seed) {
  if (!cfg.traffic.trace_csv.empty()) {
    return load_trace_csv(cfg.traffic.trace_csv, cfg.scenario);
  }
  SeededStream stream(seed, "trace");
  // One day per episode, capped to keep the trace in memory for very long
  // runs; episodes beyond the cap cycle through the synthesized days.
  const int days = std::clamp(cfg.agent.episodes, 1, 8000);
  return synth_diurnal(days * cfg.horizon.windows_per_episode,
                       cfg.traffic.n_min, cfg.traffic.n_max,
                       cfg.traffic.noise_sd, stream, cfg.scenario);
}

// Episode e starts at day (e mod number-of-days) of the trace: synthetic
// traces hold one day per episode, while a short CSV trace cycles.
int episode_start_for(const TrafficTrace& trace, const PlanningHorizon& horizon,
                      int episode) {
  const int days = trace.window_count() / horizon.windows_per_episode;
  if (days <= 1) return 0;
  return (episode % days) * horizon.windows_per_episode;
}

// Held-out evaluation day: decorrelated from the training day through the
// stream label while still being a pure function of the root seed. An
// explicit override path wins.
TrafficTrace make_eval_trace(const ExperimentConfig& cfg, std::uint64_t seed,
                             const std::string& override_path) {
  if (!override_path.empty()) {
    return load_trace_csv(override_path, cfg.scenario);
  }
  SeededStream stream(seed, "eval-trace");
  return synth_diurnal(cfg.traffic.hours, cfg.traffic.n_min, cfg.traffic.n_max,
                       cfg.traffic.noise_sd, stream, cfg.scenario);
}

void require_covers_horizon(const TrafficTrace& trace,
                            const PlanningHorizon& horizon,
                            const std::string& what) {
  if (trace.window_count() < horizon.windows_per_episode) {
    throw std::runtime_error(what + " has " +
                             std::to_string(trace.window_count()) +
                             " windows but the horizon needs " +
                             std::to_string(horizon.windows_per_episode));
  }
}

int usage_error(const std::exception& e) {
  std::fprintf(stderr, "error: %s\n", e.what());
  return kExitUsage;
}

}  // namespace

int cmd_validate_queuing(const CliOptions& opts) {
  ExperimentConfig cfg;
  try {
    cfg = setup(opts);
  } catch (const std::exception& e) {
    return usage_error(e);
  }
  const std::vector<ValidationPoint> grid = cfg.validation.grid.empty()
                                                ? default_validation_grid()
                                                : cfg.validation.grid;
  std::string csv = "analytic,empirical,rel_err,ci_low,ci_high\n";
  bool all_pass = true;
  int stable_points = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const ValidationPoint& p = grid[i];
    const ApReservation res{p.n_subcarriers, p.n_vms};
    const DelayEstimate tx =
        mm1_sojourn(p.lambda, tx_service_rate(p.n_subcarriers, cfg.scenario));
    const DelayEstimate proc =
        mmc_sojourn(p.lambda, vm_service_rate(cfg.scenario), p.n_vms);
    const bool stable = tx.stable && proc.stable;
    const double analytic = tx.w_total_s + proc.w_total_s;
    if (!stable) {
      // Infinite analytic delay is the row's unstable marker; these rows are
      // excluded from the pass/fail decision.
      csv += "inf,inf,,,\n";
      std::printf("point %zu: lambda=%g (%d,%d) unstable, skipped\n", i,
                  p.lambda, p.n_subcarriers, p.n_vms);
      continue;
    }
    SeededStream stream(opts.seed, "des");
    SeededStream point_stream = stream.derive("point-" + std::to_string(i));
    const LongRunResult sim = long_run_mean_delay(
        res, p.lambda, cfg.scenario, cfg.validation.tasks_per_point,
        point_stream);
    const double rel_err =
        std::abs(sim.mean_delay_s - analytic) / analytic;
    const double ci_low = sim.mean_delay_s - sim.ci_half_width_s;
    const double ci_high = sim.mean_delay_s + sim.ci_half_width_s;
    append_csv_double(csv, analytic);
    csv.push_back(',');
    append_csv_double(csv, sim.mean_delay_s);
    csv.push_back(',');
    append_csv_double(csv, rel_err);
    csv.push_back(',');
    append_csv_double(csv, ci_low);
    csv.push_back(',');
    append_csv_double(csv, ci_high);
    csv.push_back('\n');
    ++stable_points;
    // Pass when the entire 95% interval sits inside the tolerance band
    // around the analytic value.
    const double band = cfg.validation.rel_err_limit * analytic;
    const bool pass = sim.stable &&
                      std::abs(sim.mean_delay_s - analytic) +
                              sim.ci_half_width_s <=
                          band;
    std::printf(
        "point %zu: lambda=%g (%d,%d) analytic=%.6f empirical=%.6f "
        "rel_err=%.4f %s\n",
        i, p.lambda, p.n_subcarriers, p.n_vms, analytic, sim.mean_delay_s,
        rel_err, pass ? "ok" : "FAIL");
    if (!pass) {
      all_pass = false;
    }
  }
  try {
    write_text_file(join(opts.out_dir, "queuing_validation.csv"), csv);
  } catch (const std::exception& e) {
    return usage_error(e);
  }
  std::printf("%d stable points, %s\n", stable_points,
              all_pass ? "all within tolerance" : "tolerance exceeded");
  return all_pass ? kExitOk : kExitThresholdFailure;
}

int cmd_train(const CliOptions& opts) {
  ExperimentConfig cfg;
  TrafficTrace train_trace;
  TrafficTrace eval_trace;
  try {
    cfg = setup(opts);
    train_trace = make_training_trace(cfg, opts.seed);
    eval_trace = make_eval_trace(cfg, opts.seed, "");
    require_covers_horizon(train_trace, cfg.horizon, "training trace");
    require_covers_horizon(eval_trace, cfg.horizon, "evaluation trace");
  } catch (const std::exception& e) {
    return usage_error(e);
  }

  SeededStream init_stream(opts.seed, "init");
  SeededStream noise_stream(opts.seed, "noise");
  SeededStream replay_stream(opts.seed, "replay");
  const int state_dim = EnvState::dimension(cfg.scenario.ap_count());
  const int action_dim = 2 * cfg.scenario.ap_count();
  DdpgAgent agent(state_dim, action_dim, cfg.agent, init_stream);

  EnvFactory make_env = [&](int episode) {
    // Hand each episode its own day as a small standalone trace; the
    // windows keep their absolute hour indices, so the phase encoding is
    // unaffected by the slicing.
    const int start = episode_start_for(train_trace, cfg.horizon, episode);
    TrafficTrace day;
    day.source = train_trace.source;
    day.windows.assign(
        train_trace.windows.begin() + start,
        train_trace.windows.begin() + start + cfg.horizon.windows_per_episode);
    // Day slices start on a day boundary, so re-indexing from 0 keeps both
    // the trace invariant and the hour-of-day phase.
    for (std::size_t i = 0; i < day.windows.size(); ++i) {
      day.windows[i].window_index = static_cast<int>(i);
    }
    return SliceEnv(day, 0, cfg.scenario, cfg.weights, cfg.horizon, cfg.env);
  };
  EvalFn evaluate = [&](const ParameterSet& actor) {
    return evaluate_actor(actor, agent.actor_spec(), eval_trace, 0,
                          cfg.scenario, cfg.weights, cfg.horizon,
                          {.env = cfg.env})
        .cumulative_cost;
  };
  std::string steps_csv = kStepCsvHeader;
  StepLogFn step_log = [&](int episode, const WindowCostRow& row) {
    append_step_csv_rows(steps_csv, episode, row, cfg.weights);
  };

  TrainingLog log =
      train(agent, make_env, evaluate, noise_stream, replay_stream, step_log);

  try {
    write_text_file(join(opts.out_dir, "training_log.csv"),
                    training_log_to_csv(log));
    write_text_file(join(opts.out_dir, "steps.csv"), steps_csv);
    write_text_file(join(opts.out_dir, "config.json"), config_to_json(cfg));
    write_text_file(join(opts.out_dir, "trace_train.csv"),
                    trace_to_csv(train_trace));
    write_text_file(join(opts.out_dir, "trace_eval.csv"),
                    trace_to_csv(eval_trace));
    Checkpoint final_ckpt;
    final_ckpt.spec = agent.actor_spec();
    final_ckpt.params = agent.actor();
    final_ckpt.seed = opts.seed;
    final_ckpt.episode = cfg.agent.episodes - 1;
    if (log.aborted) {
      const std::string abort_path =
          join(opts.out_dir, "checkpoint_abort.json");
      save_checkpoint(abort_path, final_ckpt);
      std::fprintf(stderr, "error: %s; diagnostic checkpoint at %s\n",
                   log.abort_reason.c_str(), abort_path.c_str());
      return kExitNumericalAbort;
    }
    save_checkpoint(join(opts.out_dir, "checkpoint_final.json"), final_ckpt);
    Checkpoint best_ckpt;
    best_ckpt.spec = agent.actor_spec();
    best_ckpt.params = log.best_actor;
    best_ckpt.seed = opts.seed;
    best_ckpt.episode = log.best_episode;
    best_ckpt.eval_cost = log.best_eval_cost;
    save_checkpoint(join(opts.out_dir, "checkpoint_best.json"), best_ckpt);
  } catch (const std::exception& e) {
    return usage_error(e);
  }
  if (!log.rows.empty()) {
    std::printf("trained %zu episodes; final cost %.1f, best eval %.1f "
                "(episode %d)\n",
                log.rows.size(), log.rows.back().cum_cost, log.best_eval_cost,
                log.best_episode);
  } else {
    std::printf("trained 0 episodes; initial checkpoint written\n");
  }
  return kExitOk;
}

int cmd_compare(const CliOptions& opts) {
  ExperimentConfig cfg;
  Checkpoint ckpt;
  TrafficTrace eval_trace;
  try {
    cfg = setup(opts);
    if (opts.checkpoint_path.empty()) {
      throw std::runtime_error("compare requires --checkpoint");
    }
    ckpt = load_checkpoint(opts.checkpoint_path);
    const int state_dim = EnvState::dimension(cfg.scenario.ap_count());
    const int action_dim = 2 * cfg.scenario.ap_count();
    if (ckpt.spec.input_size() != state_dim ||
        ckpt.spec.output_size() != action_dim) {
      throw std::runtime_error(
          opts.checkpoint_path + ": checkpoint expects " +
          std::to_string(ckpt.spec.input_size()) + "->" +
          std::to_string(ckpt.spec.output_size()) +
          " but the scenario needs " + std::to_string(state_dim) + "->" +
          std::to_string(action_dim));
    }
    eval_trace = make_eval_trace(cfg, opts.seed, opts.trace_path);
    require_covers_horizon(eval_trace, cfg.horizon, "evaluation trace");
  } catch (const std::exception& e) {
    return usage_error(e);
  }

  SeededStream ddpg_des(opts.seed, "des");
  SeededStream ddpg_replay = ddpg_des.derive("ddpg");
  SeededStream myopic_replay = ddpg_des.derive("myopic");
  RolloutOptions ddpg_opts{.env = cfg.env,
                           .des_replay = opts.des_replay,
                           .des_model = ServiceModel::kExponential,
                           .des_stream = opts.des_replay ? &ddpg_replay
                                                         : nullptr};
  RolloutOptions myopic_opts{.env = cfg.env,
                             .des_replay = opts.des_replay,
                             .des_model = ServiceModel::kExponential,
                             .des_stream = opts.des_replay ? &myopic_replay
                                                           : nullptr};
  const EpisodeCostReport ddpg_report =
      evaluate_actor(ckpt.params, ckpt.spec, eval_trace, 0, cfg.scenario,
                     cfg.weights, cfg.horizon, ddpg_opts);
  const EpisodeCostReport myopic_report = myopic_episode(
      eval_trace, 0, cfg.scenario, cfg.weights, cfg.horizon, myopic_opts);

  try {
    write_text_file(join(opts.out_dir, "comparison.csv"),
                    comparison_csv(ddpg_report, myopic_report));
    write_text_file(join(opts.out_dir, "ddpg_steps.csv"),
                    report_to_step_csv(ddpg_report, cfg.weights));
    write_text_file(join(opts.out_dir, "myopic_steps.csv"),
                    report_to_step_csv(myopic_report, cfg.weights));
  } catch (const std::exception& e) {
    return usage_error(e);
  }
  const double gap =
      myopic_report.cumulative_cost > 0.0
          ? 100.0 *
                (myopic_report.cumulative_cost - ddpg_report.cumulative_cost) /
                myopic_report.cumulative_cost
          : 0.0;
  std::printf("ddpg cumulative %.1f, myopic cumulative %.1f, gap %.2f%%\n",
              ddpg_report.cumulative_cost, myopic_report.cumulative_cost, gap);
  std::printf("ddpg reconfiguration %.0f vs myopic %.0f\n",
              ddpg_report.sum_c_s, myopic_report.sum_c_s);
  return kExitOk;
}

int cmd_synth_trace(const CliOptions& opts) {
  ExperimentConfig cfg;
  try {
    cfg = setup(opts);
    SeededStream stream(opts.seed, "trace");
    const TrafficTrace trace =
        synth_diurnal(cfg.traffic.hours, cfg.traffic.n_min, cfg.traffic.n_max,
                      cfg.traffic.noise_sd, stream, cfg.scenario);
    const std::string path = join(opts.out_dir, "trace.csv");
    write_text_file(path, trace_to_csv(trace));
    std::printf("wrote %d windows to %s\n", trace.window_count(),
                path.c_str());
  } catch (const std::exception& e) {
    return usage_error(e);
  }
  return kExitOk;
}

int cmd_baseline(const CliOptions& opts) {
  ExperimentConfig cfg;
  TrafficTrace eval_trace;
  try {
    cfg = setup(opts);
    eval_trace = make_eval_trace(cfg, opts.seed, opts.trace_path);
    require_covers_horizon(eval_trace, cfg.horizon, "evaluation trace");
  } catch (const std::exception& e) {
    return usage_error(e);
  }
  const EpisodeCostReport report =
      myopic_episode(eval_trace, 0, cfg.scenario, cfg.weights, cfg.horizon,
                     {.env = cfg.env});
  try {
    write_text_file(join(opts.out_dir, "myopic_steps.csv"),
                    report_to_step_csv(report, cfg.weights));
  } catch (const std::exception& e) {
    return usage_error(e);
  }
  std::printf("myopic cumulative %.1f over %zu windows (c_r %.0f, c_s %.0f,"
              " c_d %.0f)\n",
              report.cumulative_cost, report.windows.size(), report.sum_c_r,
              report.sum_c_s, report.sum_c_d);
  return kExitOk;
}

}  // namespace slice
