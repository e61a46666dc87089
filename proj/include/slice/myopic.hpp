#pragma once

#include <vector>

#include "slice/rollout.hpp"
#include "slice/scenario.hpp"
#include "slice/traffic_types.hpp"

namespace slice {

// Result of the per-window exhaustive minimization. A flagged AP had no
// feasible pair anywhere on the grid and was assigned the maximum counts.
struct MyopicDecision {
  ReservationDecision decision;
  std::vector<bool> infeasible_ap;

  bool any_infeasible() const;
};

// Cheapest feasible (n_subcarriers, n_vms) for one AP's arrival rate, by
// exhaustive search over the full grid; ties prefer fewer subcarriers, then
// fewer VMs. Returns feasible == false with maximum counts when nothing on
// the grid meets the delay bound.
struct ApSearchResult {
  ApReservation reservation;
  bool feasible = false;
};
ApSearchResult myopic_search_ap(double lambda, const ScenarioConfig& cfg);

// Per-window minimum-reservation-cost decision subject to the delay bound;
// the reservation cost decomposes per AP, so each AP is searched
// independently. A disabled UAV is pinned at (1, 1) and never flagged.
MyopicDecision myopic_decide(const TrafficWindow& window,
                             const ScenarioConfig& cfg);

// Applies myopic_decide to every window of one trace day through the shared
// rollout, accumulating reconfiguration and penalty costs along the way.
EpisodeCostReport myopic_episode(const TrafficTrace& trace, int episode_start,
                                 const ScenarioConfig& cfg,
                                 const CostWeights& weights,
                                 const PlanningHorizon& horizon,
                                 const RolloutOptions& opts = {});

}  // namespace slice
