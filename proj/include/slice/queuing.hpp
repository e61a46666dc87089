#pragma once

#include "slice/scenario.hpp"
#include "slice/traffic_types.hpp"

namespace slice {

// Analytic mean sojourn time of the two-stage reserved slice at one AP:
// a pooled-subcarrier M/M/1 transmission stage feeding an M/M/c processing
// stage. Unstable inputs carry infinite delays and stable == false.
struct DelayEstimate {
  double w_tx_s = 0.0;
  double w_proc_s = 0.0;
  double w_total_s = 0.0;
  bool stable = false;

  // Delay compared against the bound, honoring cfg.delay_scope.
  double bounded_delay(const ScenarioConfig& cfg) const {
    return cfg.delay_scope == DelayScope::kProcessingOnly ? w_proc_s
                                                          : w_total_s;
  }
};

// Aggregate uplink service rate of n pooled subcarriers, in tasks/second.
double tx_service_rate(int n_subcarriers, const ScenarioConfig& cfg);

// Per-VM processing rate in tasks/second.
double vm_service_rate(const ScenarioConfig& cfg);

// Erlang-C waiting probability for offered load a = lambda/mu and c servers,
// computed through the Erlang-B recurrence. Requires a < c.
double erlang_c(double a, int c);

// M/M/1 mean sojourn. Returns stable == false when lambda >= mu.
DelayEstimate mm1_sojourn(double lambda, double mu);

// M/M/c mean sojourn. Returns stable == false when lambda >= c * mu.
DelayEstimate mmc_sojourn(double lambda, double mu_per_server, int c);

// Tandem mean sojourn for one AP's reservation against one traffic window.
DelayEstimate slice_delay(const ReservationDecision& decision,
                          const TrafficWindow& window, int ap,
                          const ScenarioConfig& cfg);

}  // namespace slice
