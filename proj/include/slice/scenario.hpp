#pragma once

#include <string>
#include <vector>

namespace slice {

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

// Which stages count against the delay bound when checking violations.
enum class DelayScope { kTotal, kProcessingOnly };

// Static description of the highway air-ground scenario: geometry, task
// model, resource units, and decision bounds. Values are immutable after
// validation; all delay/cost computations read from here.
struct ScenarioConfig {
  double highway_length_m = 2000.0;
  std::vector<double> bs_positions_m = {500.0, 1500.0};
  double uav_position_m = 1000.0;
  double uav_height_m = 100.0;
  double task_size_bits = 6.0e5;   // 0.6 Mbit
  double task_cycles = 6.0e8;
  double per_vehicle_rate_hz = 1.0;
  double delay_bound_s = 0.1;
  double subcarrier_bw_hz = 5.0e6;
  double vm_rate_cps = 1.0e10;
  double spectral_efficiency_bps_per_hz = 2.0;
  int max_subcarriers = 20;
  int max_vms = 20;
  double unit_price_subcarrier = 1.0;
  double unit_price_vm = 1.0;
  // When false the UAV entry of every decision is frozen at (1, 1).
  bool reserve_at_uav = true;
  DelayScope delay_scope = DelayScope::kTotal;

  // Access points are the base stations followed by the single UAV.
  int ap_count() const { return static_cast<int>(bs_positions_m.size()) + 1; }
  int uav_index() const { return static_cast<int>(bs_positions_m.size()); }

  void validate() const;  // throws std::invalid_argument

  bool operator==(const ScenarioConfig&) const = default;
};

struct CostWeights {
  double w_r = 1.0;
  double w_s = 20.0;
  double w_d = 200.0;

  void validate() const;

  bool operator==(const CostWeights&) const = default;
};

struct ApReservation {
  int n_subcarriers = 1;
  int n_vms = 1;

  bool operator==(const ApReservation&) const = default;
};

// The per-window action: integer resource counts per access point.
struct ReservationDecision {
  std::vector<ApReservation> per_ap;

  static ReservationDecision all_minimum(int ap_count);

  bool operator==(const ReservationDecision&) const = default;
  void validate(const ScenarioConfig& cfg) const;
};

struct PlanningHorizon {
  int windows_per_episode = 24;
  double window_duration_s = 3600.0;
  double operation_slot_s = 0.1;

  void validate() const;

  bool operator==(const PlanningHorizon&) const = default;
};

// Closed highway interval owned by one access point. Empty regions are
// represented with hi == lo.
struct ApInterval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
};

// 3D positions of all access points, base stations first, UAV last.
std::vector<Point3> ap_positions(const ScenarioConfig& cfg);

// Nearest-AP ownership intervals on [0, highway_length]. Ties in 3D distance
// go to the lower-indexed AP; a point on a shared boundary belongs to the
// lower-indexed interval containing it.
std::vector<ApInterval> nearest_ap_partition(const ScenarioConfig& cfg);

// Which AP owns highway position x under the partition's tie rule.
int owner_ap(const std::vector<ApInterval>& partition, double x);

}  // namespace slice
