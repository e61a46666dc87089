#include "slice/env.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace slice {

std::vector<double> EnvState::as_vector() const {
  std::vector<double> v;
  v.reserve(normalized_vehicle_count.size() +
            prev_decision_normalized.size() + 2);
  v.insert(v.end(), normalized_vehicle_count.begin(),
           normalized_vehicle_count.end());
  v.insert(v.end(), prev_decision_normalized.begin(),
           prev_decision_normalized.end());
  v.push_back(phase_sin);
  v.push_back(phase_cos);
  return v;
}

int action_component_to_units(double a, int max_units) {
  const double mapped = 1.0 + (a + 1.0) / 2.0 * (max_units - 1);
  const long n = std::lround(mapped);  // rounds half away from zero
  return static_cast<int>(std::clamp<long>(n, 1, max_units));
}

double units_to_action_component(int units, int max_units) {
  if (max_units <= 1) return 0.0;
  return 2.0 * (units - 1) / static_cast<double>(max_units - 1) - 1.0;
}

ReservationDecision action_to_decision(std::span<const double> action,
                                       const ScenarioConfig& cfg,
                                       int* clamped) {
  const int n_ap = cfg.ap_count();
  if (static_cast<int>(action.size()) != 2 * n_ap) {
    throw std::invalid_argument(
        "action_to_decision: action length must be 2 * ap_count");
  }
  int clamp_count = 0;
  auto component = [&](double a, int max_units) {
    if (a < -1.0 || a > 1.0) {
      ++clamp_count;
      a = std::clamp(a, -1.0, 1.0);
    }
    return action_component_to_units(a, max_units);
  };
  ReservationDecision d;
  d.per_ap.resize(n_ap);
  for (int ap = 0; ap < n_ap; ++ap) {
    d.per_ap[ap].n_subcarriers =
        component(action[2 * ap], cfg.max_subcarriers);
    d.per_ap[ap].n_vms = component(action[2 * ap + 1], cfg.max_vms);
  }
  if (!cfg.reserve_at_uav) {
    d.per_ap[cfg.uav_index()] = ApReservation{1, 1};
  }
  if (clamped) *clamped = clamp_count;
  return d;
}

SliceEnv::SliceEnv(const TrafficTrace& trace, int episode_start,
                   const ScenarioConfig& cfg, const CostWeights& weights,
                   const PlanningHorizon& horizon, const EnvOptions& opts)
    : trace_(trace),
      episode_start_(episode_start),
      cfg_(cfg),
      weights_(weights),
      horizon_(horizon),
      opts_(opts),
      prev_(ReservationDecision::all_minimum(cfg.ap_count())) {
  cfg_.validate();
  weights_.validate();
  horizon_.validate();
  if (episode_start_ < 0) {
    throw std::invalid_argument("SliceEnv: episode_start must be >= 0");
  }
  if (trace_.window_count() <
      episode_start_ + horizon_.windows_per_episode) {
    throw std::invalid_argument(
        "SliceEnv: trace too short for one episode from episode_start");
  }
  for (const auto& w : trace_.windows) {
    if (static_cast<int>(w.lambda_per_ap.size()) != cfg_.ap_count()) {
      throw std::invalid_argument("SliceEnv: trace/config AP count mismatch");
    }
  }
}

const TrafficWindow& SliceEnv::current_window() const {
  return trace_.windows.at(episode_start_ + window_);
}

EnvState SliceEnv::observe(int window, const ReservationDecision& prev) const {
  // Past-the-end observations (terminal next_state) reuse the final
  // window's counts; the value is never bootstrapped from.
  const int idx =
      episode_start_ +
      std::min(window, horizon_.windows_per_episode - 1);
  const TrafficWindow& w = trace_.windows.at(idx);
  EnvState s;
  s.normalized_vehicle_count.reserve(w.vehicles_per_ap.size());
  for (int v : w.vehicles_per_ap) {
    s.normalized_vehicle_count.push_back(
        std::clamp(v / opts_.vehicle_norm_max, 0.0, 1.0));
  }
  s.prev_decision_normalized.reserve(2 * prev.per_ap.size());
  for (const auto& r : prev.per_ap) {
    s.prev_decision_normalized.push_back(
        static_cast<double>(r.n_subcarriers) / cfg_.max_subcarriers);
    s.prev_decision_normalized.push_back(static_cast<double>(r.n_vms) /
                                         cfg_.max_vms);
  }
  // Phase advances with the logical window even past the horizon so the
  // terminal observation carries the next hour.
  const int hour =
      (trace_.windows.at(episode_start_).window_index + window) % 24;
  const double angle = 2.0 * std::numbers::pi * hour / 24.0;
  s.phase_sin = std::sin(angle);
  s.phase_cos = std::cos(angle);
  return s;
}

EnvState SliceEnv::reset() {
  prev_ = ReservationDecision::all_minimum(cfg_.ap_count());
  window_ = 0;
  started_ = true;
  return observe(0, prev_);
}

SliceEnv::StepResult SliceEnv::step(std::span<const double> action) {
  if (!started_) throw std::logic_error("SliceEnv::step before reset");
  if (done()) throw std::logic_error("SliceEnv::step after episode end");

  StepResult out;
  out.transition.state = observe(window_, prev_);
  out.transition.action.assign(action.begin(), action.end());
  for (double& a : out.transition.action) a = std::clamp(a, -1.0, 1.0);

  out.decision = action_to_decision(action, cfg_, &out.clamped_components);
  out.cost = window_cost(prev_, out.decision, current_window(), weights_,
                         cfg_, opts_.penalty_mode);
  out.transition.reward = -out.cost.weighted_total / opts_.reward_scale;

  prev_ = out.decision;
  ++window_;
  out.transition.terminal = done();
  out.transition.next_state = observe(window_, prev_);
  return out;
}

}  // namespace slice
