#pragma once

#include <span>
#include <vector>

#include "slice/cost.hpp"
#include "slice/scenario.hpp"
#include "slice/traffic_types.hpp"

namespace slice {

// Observation handed to the policy before deciding window t: the window's
// vehicle counts (normalized), the previous decision (normalized), and a
// smooth hour-of-day phase encoding.
struct EnvState {
  std::vector<double> normalized_vehicle_count;  // per AP, in [0, 1]
  std::vector<double> prev_decision_normalized;  // per AP: n_s/max, n_v/max
  double phase_sin = 0.0;
  double phase_cos = 1.0;

  // Flat network input: [veh..., prev..., sin, cos].
  std::vector<double> as_vector() const;
  static int dimension(int ap_count) { return 3 * ap_count + 2; }

  bool operator==(const EnvState&) const = default;
};

struct Transition {
  EnvState state;
  std::vector<double> action;  // raw continuous components in [-1, 1]
  double reward = 0.0;
  EnvState next_state;
  bool terminal = false;
};

struct EnvOptions {
  double reward_scale = 100.0;
  // Calibrated maximum used to normalize per-AP vehicle counts.
  double vehicle_norm_max = 60.0;
  PenaltyMode penalty_mode = PenaltyMode::kPerAp;

  bool operator==(const EnvOptions&) const = default;
};

// Maps one raw action component from [-1, 1] affinely onto [1, max_units]
// and rounds half away from zero. Out-of-range inputs must be clamped by the
// caller first.
int action_component_to_units(double a, int max_units);

// Raw component that maps exactly onto `units` (plateau center).
double units_to_action_component(int units, int max_units);

// Full action vector -> decision, honoring cfg.reserve_at_uav. Components
// are ordered per AP as (n_subcarriers, n_vms). Returns the number of
// components that had to be clamped into [-1, 1] through *clamped.
ReservationDecision action_to_decision(std::span<const double> action,
                                       const ScenarioConfig& cfg,
                                       int* clamped = nullptr);

// Sequential decision environment over one episode of planning windows.
class SliceEnv {
 public:
  SliceEnv(const TrafficTrace& trace, int episode_start,
           const ScenarioConfig& cfg, const CostWeights& weights,
           const PlanningHorizon& horizon, const EnvOptions& opts = {});

  EnvState reset();

  struct StepResult {
    Transition transition;
    ReservationDecision decision;
    WindowCostBreakdown cost;
    int clamped_components = 0;
  };

  // Applies one reservation decision expressed as a raw action vector.
  StepResult step(std::span<const double> action);

  bool done() const { return window_ >= horizon_.windows_per_episode; }
  int window() const { return window_; }
  int action_dimension() const { return 2 * cfg_.ap_count(); }
  int state_dimension() const { return EnvState::dimension(cfg_.ap_count()); }
  const ReservationDecision& previous_decision() const { return prev_; }
  const TrafficWindow& current_window() const;
  const ScenarioConfig& config() const { return cfg_; }
  const EnvOptions& options() const { return opts_; }

 private:
  EnvState observe(int window, const ReservationDecision& prev) const;

  TrafficTrace trace_;
  int episode_start_;
  ScenarioConfig cfg_;
  CostWeights weights_;
  PlanningHorizon horizon_;
  EnvOptions opts_;
  ReservationDecision prev_;
  int window_ = 0;
  bool started_ = false;
};

}  // namespace slice
