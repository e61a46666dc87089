#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "slice/cost.hpp"
#include "slice/des.hpp"
#include "slice/env.hpp"
#include "slice/scenario.hpp"
#include "slice/traffic_types.hpp"

namespace slice {

// One planning window of an evaluated policy: the applied decision, its cost
// breakdown, per-AP component slices, and the running cumulative cost.
struct WindowCostRow {
  int window = 0;
  ReservationDecision decision;
  WindowCostBreakdown cost;
  std::vector<ApCostBreakdown> per_ap;
  double cumulative = 0.0;
  double reward = 0.0;
  std::optional<WindowReport> des;  // filled only under DES replay
};

// Full-day cost accounting for one policy, shared between the learned agent
// and the myopic baseline so comparisons read the same arithmetic.
struct EpisodeCostReport {
  std::vector<WindowCostRow> windows;
  double cumulative_cost = 0.0;
  double sum_c_r = 0.0;
  double sum_c_s = 0.0;
  double sum_c_d = 0.0;
};

// Policy hook: given the window position within the episode, the observation
// and the traffic window, produce a reservation decision. Out-of-range counts
// are clamped and the UAV entry is frozen when the scenario disables it —
// identical treatment to actions taken through the environment.
using DecisionFn = std::function<ReservationDecision(
    int window, const EnvState& state, const TrafficWindow& traffic)>;

struct RolloutOptions {
  EnvOptions env;
  // Replays every applied decision through the event-driven simulator to
  // measure empirical per-window satisfaction rates.
  bool des_replay = false;
  ServiceModel des_model = ServiceModel::kExponential;
  SeededStream* des_stream = nullptr;  // required when des_replay is set
};

// Runs one episode of `decide` through the sequential environment and
// collects the cost report. Identical decision sequences produce identical
// reports regardless of which policy emitted them.
EpisodeCostReport rollout_policy(const TrafficTrace& trace, int episode_start,
                                 const ScenarioConfig& cfg,
                                 const CostWeights& weights,
                                 const PlanningHorizon& horizon,
                                 const DecisionFn& decide,
                                 const RolloutOptions& opts = {});

// Per-window per-AP step log:
// episode,window,ap,n_s,n_v,c_r,c_s,c_d,total,reward
// `total` applies weighted_total_of to that row's components, so an audit
// recomputing it from the parsed columns reproduces the stored value exactly.
inline constexpr const char* kStepCsvHeader =
    "episode,window,ap,n_s,n_v,c_r,c_s,c_d,total,reward\n";

// Appends one AP row per access point of `row` in the schema above.
void append_step_csv_rows(std::string& out, int episode,
                          const WindowCostRow& row,
                          const CostWeights& weights);

std::string report_to_step_csv(const EpisodeCostReport& report,
                               const CostWeights& weights, int episode = 0);

// Per-window comparison series between two reports over the same trace:
// window,ddpg_cum,myopic_cum,gap_pct[,ddpg_satisfaction,myopic_satisfaction]
std::string comparison_csv(const EpisodeCostReport& ddpg,
                           const EpisodeCostReport& myopic);

}  // namespace slice
