#include "slice/rollout.hpp"

#include <stdexcept>

#include "slice/csv.hpp"

namespace slice {

EpisodeCostReport rollout_policy(const TrafficTrace& trace, int episode_start,
                                 const ScenarioConfig& cfg,
                                 const CostWeights& weights,
                                 const PlanningHorizon& horizon,
                                 const DecisionFn& decide,
                                 const RolloutOptions& opts) {
  if (opts.des_replay && opts.des_stream == nullptr) {
    throw std::invalid_argument("DES replay requested without a stream");
  }
  SliceEnv env(trace, episode_start, cfg, weights, horizon, opts.env);
  EnvState state = env.reset();

  EpisodeCostReport report;
  report.windows.reserve(static_cast<std::size_t>(horizon.windows_per_episode));
  std::vector<double> action(static_cast<std::size_t>(env.action_dimension()));
  for (int w = 0; w < horizon.windows_per_episode; ++w) {
    const TrafficWindow& traffic = env.current_window();
    const ReservationDecision prev = env.previous_decision();
    const ReservationDecision wanted = decide(w, state, traffic);
    if (wanted.per_ap.size() != static_cast<std::size_t>(cfg.ap_count())) {
      throw std::invalid_argument("policy returned a decision for " +
                                  std::to_string(wanted.per_ap.size()) +
                                  " APs, expected " +
                                  std::to_string(cfg.ap_count()));
    }
    // Express the decision as plateau-center action components so it passes
    // through the environment's clamping and UAV rules unchanged when legal.
    for (int ap = 0; ap < cfg.ap_count(); ++ap) {
      action[2 * static_cast<std::size_t>(ap)] = units_to_action_component(
          wanted.per_ap[ap].n_subcarriers, cfg.max_subcarriers);
      action[2 * static_cast<std::size_t>(ap) + 1] =
          units_to_action_component(wanted.per_ap[ap].n_vms, cfg.max_vms);
    }
    SliceEnv::StepResult step = env.step(action);

    WindowCostRow row;
    row.window = w;
    row.decision = step.decision;
    row.cost = step.cost;
    row.reward = step.transition.reward;
    row.per_ap.reserve(static_cast<std::size_t>(cfg.ap_count()));
    for (int ap = 0; ap < cfg.ap_count(); ++ap) {
      row.per_ap.push_back(ap_cost_breakdown(prev, step.decision, traffic, ap,
                                             cfg, opts.env.penalty_mode));
    }
    if (opts.des_replay) {
      row.des = run_window(step.decision, traffic, horizon.window_duration_s,
                           cfg, *opts.des_stream, opts.des_model);
    }
    report.cumulative_cost += step.cost.weighted_total;
    row.cumulative = report.cumulative_cost;
    report.sum_c_r += step.cost.c_r;
    report.sum_c_s += step.cost.c_s;
    report.sum_c_d += step.cost.c_d;
    report.windows.push_back(std::move(row));
    state = step.transition.next_state;
  }
  return report;
}

void append_step_csv_rows(std::string& out, int episode,
                          const WindowCostRow& row,
                          const CostWeights& weights) {
  // One row per (window, AP); the per-AP weighted total uses the same helper
  // as the window accounting so audits can reproduce it bit for bit.
  for (std::size_t ap = 0; ap < row.per_ap.size(); ++ap) {
    const ApCostBreakdown& slice = row.per_ap[ap];
    out += std::to_string(episode);
    out.push_back(',');
    out += std::to_string(row.window);
    out.push_back(',');
    out += std::to_string(ap);
    out.push_back(',');
    out += std::to_string(row.decision.per_ap[ap].n_subcarriers);
    out.push_back(',');
    out += std::to_string(row.decision.per_ap[ap].n_vms);
    out.push_back(',');
    append_csv_double(out, slice.c_r);
    out.push_back(',');
    append_csv_double(out, slice.c_s);
    out.push_back(',');
    append_csv_double(out, slice.c_d);
    out.push_back(',');
    append_csv_double(
        out, weighted_total_of(slice.c_r, slice.c_s, slice.c_d, weights));
    out.push_back(',');
    append_csv_double(out, row.reward);
    out.push_back('\n');
  }
}

std::string report_to_step_csv(const EpisodeCostReport& report,
                               const CostWeights& weights, int episode) {
  std::string out = kStepCsvHeader;
  for (const auto& row : report.windows) {
    append_step_csv_rows(out, episode, row, weights);
  }
  return out;
}

std::string comparison_csv(const EpisodeCostReport& ddpg,
                           const EpisodeCostReport& myopic) {
  if (ddpg.windows.size() != myopic.windows.size()) {
    throw std::invalid_argument("comparison requires equal-length reports");
  }
  const bool with_des =
      !ddpg.windows.empty() && ddpg.windows.front().des.has_value() &&
      myopic.windows.front().des.has_value();
  std::string out = with_des ? "window,ddpg_cum,myopic_cum,gap_pct,"
                               "ddpg_satisfaction,myopic_satisfaction\n"
                             : "window,ddpg_cum,myopic_cum,gap_pct\n";
  for (std::size_t w = 0; w < ddpg.windows.size(); ++w) {
    out += std::to_string(ddpg.windows[w].window);
    out.push_back(',');
    append_csv_double(out, ddpg.windows[w].cumulative);
    out.push_back(',');
    append_csv_double(out, myopic.windows[w].cumulative);
    out.push_back(',');
    const double base = myopic.windows[w].cumulative;
    const double gap =
        base > 0.0
            ? 100.0 * (base - ddpg.windows[w].cumulative) / base
            : 0.0;
    append_csv_double(out, gap);
    if (with_des) {
      out.push_back(',');
      append_csv_double(out, ddpg.windows[w].des->satisfaction_rate);
      out.push_back(',');
      append_csv_double(out, myopic.windows[w].des->satisfaction_rate);
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace slice
