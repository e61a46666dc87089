#include "slice/myopic.hpp"

#include <algorithm>
#include <stdexcept>

#include "slice/queuing.hpp"

namespace slice {

bool MyopicDecision::any_infeasible() const {
  return std::any_of(infeasible_ap.begin(), infeasible_ap.end(),
                     [](bool f) { return f; });
}

ApSearchResult myopic_search_ap(double lambda, const ScenarioConfig& cfg) {
  // Delay decreases in both counts, so for each subcarrier count the first
  // feasible VM count is also the cheapest one. Scanning subcarriers in
  // ascending order with a strict cost comparison realizes the documented
  // tie-break (fewer subcarriers, then fewer VMs).
  ApSearchResult best;
  best.reservation = {cfg.max_subcarriers, cfg.max_vms};
  double best_cost = 0.0;
  TrafficWindow probe;
  probe.window_index = 0;
  probe.vehicles_per_ap = {0};
  probe.lambda_per_ap = {lambda};
  ReservationDecision candidate;
  candidate.per_ap = {{1, 1}};
  for (int n_s = 1; n_s <= cfg.max_subcarriers; ++n_s) {
    if (best.feasible) {
      // No later pair can beat the incumbent: cost grows with n_s and at
      // least one VM must be reserved.
      const double floor_cost =
          n_s * cfg.unit_price_subcarrier + cfg.unit_price_vm;
      if (floor_cost >= best_cost) {
        break;
      }
    }
    candidate.per_ap[0].n_subcarriers = n_s;
    for (int n_v = 1; n_v <= cfg.max_vms; ++n_v) {
      candidate.per_ap[0].n_vms = n_v;
      const DelayEstimate est = slice_delay(candidate, probe, 0, cfg);
      if (!est.stable || est.bounded_delay(cfg) > cfg.delay_bound_s) {
        continue;
      }
      const double cost =
          n_s * cfg.unit_price_subcarrier + n_v * cfg.unit_price_vm;
      if (!best.feasible || cost < best_cost) {
        best.feasible = true;
        best_cost = cost;
        best.reservation = {n_s, n_v};
      }
      break;  // first feasible VM count is the cheapest for this n_s
    }
  }
  return best;
}

MyopicDecision myopic_decide(const TrafficWindow& window,
                             const ScenarioConfig& cfg) {
  const int aps = cfg.ap_count();
  if (window.lambda_per_ap.size() != static_cast<std::size_t>(aps)) {
    throw std::invalid_argument("traffic window does not cover every AP");
  }
  MyopicDecision out;
  out.decision.per_ap.resize(static_cast<std::size_t>(aps));
  out.infeasible_ap.assign(static_cast<std::size_t>(aps), false);
  for (int ap = 0; ap < aps; ++ap) {
    if (!cfg.reserve_at_uav && ap == cfg.uav_index()) {
      out.decision.per_ap[ap] = {1, 1};
      continue;
    }
    const ApSearchResult res = myopic_search_ap(window.lambda_per_ap[ap], cfg);
    out.decision.per_ap[ap] = res.reservation;
    out.infeasible_ap[ap] = !res.feasible;
  }
  return out;
}

EpisodeCostReport myopic_episode(const TrafficTrace& trace, int episode_start,
                                 const ScenarioConfig& cfg,
                                 const CostWeights& weights,
                                 const PlanningHorizon& horizon,
                                 const RolloutOptions& opts) {
  DecisionFn decide = [&cfg](int, const EnvState&,
                             const TrafficWindow& traffic) {
    return myopic_decide(traffic, cfg).decision;
  };
  return rollout_policy(trace, episode_start, cfg, weights, horizon, decide,
                        opts);
}

}  // namespace slice
