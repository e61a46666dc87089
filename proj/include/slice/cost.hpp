#pragma once

#include "slice/scenario.hpp"
#include "slice/traffic_types.hpp"

namespace slice {

// How the delay-violation penalty aggregates across access points.
enum class PenaltyMode {
  kPerAp,         // one penalty unit per violating AP (default)
  kPerWindow,     // single indicator: any AP violating
  kProportional,  // per AP, max(0, (delay - bound)/bound); 1 when unstable
};

// The three cost components of one planning window and their weighted sum.
struct WindowCostBreakdown {
  double c_r = 0.0;
  double c_s = 0.0;
  double c_d = 0.0;
  double weighted_total = 0.0;
};

// Shared by producer and audits so the weighted sum is computed identically
// everywhere it is checked.
inline double weighted_total_of(double c_r, double c_s, double c_d,
                                const CostWeights& w) {
  return w.w_r * c_r + w.w_s * c_s + w.w_d * c_d;
}

// Price-weighted count of reserved units across APs.
double reservation_cost(const ReservationDecision& decision,
                        const ScenarioConfig& cfg);

// Total absolute change between consecutive decisions.
double reconfiguration_cost(const ReservationDecision& prev,
                            const ReservationDecision& curr);

// Delay-requirement violation penalty under the analytic queuing model.
double violation_penalty(const ReservationDecision& decision,
                         const TrafficWindow& window,
                         const ScenarioConfig& cfg,
                         PenaltyMode mode = PenaltyMode::kPerAp);

// Per-AP slices of the same three components (sum to the window values).
struct ApCostBreakdown {
  double c_r = 0.0;
  double c_s = 0.0;
  double c_d = 0.0;
};

ApCostBreakdown ap_cost_breakdown(const ReservationDecision& prev,
                                  const ReservationDecision& curr,
                                  const TrafficWindow& window, int ap,
                                  const ScenarioConfig& cfg,
                                  PenaltyMode mode = PenaltyMode::kPerAp);

WindowCostBreakdown window_cost(const ReservationDecision& prev,
                                const ReservationDecision& curr,
                                const TrafficWindow& window,
                                const CostWeights& weights,
                                const ScenarioConfig& cfg,
                                PenaltyMode mode = PenaltyMode::kPerAp);

}  // namespace slice
