#include "slice/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace slice {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

void ScenarioConfig::validate() const {
  require(highway_length_m > 0.0, "highway_length_m must be > 0");
  require(uav_height_m >= 0.0, "uav_height_m must be >= 0");
  require(uav_position_m >= 0.0 && uav_position_m <= highway_length_m,
          "uav_position_m must lie within [0, highway_length]");
  for (std::size_t i = 0; i < bs_positions_m.size(); ++i) {
    require(bs_positions_m[i] >= 0.0 && bs_positions_m[i] <= highway_length_m,
            "bs_positions_m must lie within [0, highway_length]");
    if (i > 0) {
      require(bs_positions_m[i] > bs_positions_m[i - 1],
              "bs_positions_m must be strictly increasing");
    }
  }
  require(task_size_bits > 0.0, "task_size_bits must be > 0");
  require(task_cycles > 0.0, "task_cycles must be > 0");
  require(per_vehicle_rate_hz > 0.0, "per_vehicle_rate_hz must be > 0");
  require(delay_bound_s > 0.0, "delay_bound_s must be > 0");
  require(subcarrier_bw_hz > 0.0, "subcarrier_bw_hz must be > 0");
  require(vm_rate_cps > 0.0, "vm_rate_cps must be > 0");
  require(spectral_efficiency_bps_per_hz > 0.0,
          "spectral_efficiency_bps_per_hz must be > 0");
  require(max_subcarriers >= 1, "max_subcarriers must be >= 1");
  require(max_vms >= 1, "max_vms must be >= 1");
  require(unit_price_subcarrier >= 0.0, "unit_price_subcarrier must be >= 0");
  require(unit_price_vm >= 0.0, "unit_price_vm must be >= 0");
}

void CostWeights::validate() const {
  require(w_r >= 0.0 && w_s >= 0.0 && w_d >= 0.0,
          "cost weights must be >= 0");
}

ReservationDecision ReservationDecision::all_minimum(int ap_count) {
  ReservationDecision d;
  d.per_ap.assign(static_cast<std::size_t>(ap_count), ApReservation{1, 1});
  return d;
}

void ReservationDecision::validate(const ScenarioConfig& cfg) const {
  require(static_cast<int>(per_ap.size()) == cfg.ap_count(),
          "decision must have one entry per access point");
  for (const auto& r : per_ap) {
    require(r.n_subcarriers >= 1 && r.n_subcarriers <= cfg.max_subcarriers,
            "n_subcarriers out of [1, max_subcarriers]");
    require(r.n_vms >= 1 && r.n_vms <= cfg.max_vms,
            "n_vms out of [1, max_vms]");
  }
}

void PlanningHorizon::validate() const {
  require(windows_per_episode >= 1, "windows_per_episode must be >= 1");
  require(window_duration_s > 0.0, "window_duration_s must be > 0");
  require(operation_slot_s > 0.0, "operation_slot_s must be > 0");
  const double slots = window_duration_s / operation_slot_s;
  require(std::abs(slots - std::round(slots)) < 1e-6 * slots,
          "operation_slot_s must divide window_duration_s");
}

std::vector<Point3> ap_positions(const ScenarioConfig& cfg) {
  cfg.validate();
  std::vector<Point3> pts;
  pts.reserve(cfg.ap_count());
  for (double x : cfg.bs_positions_m) pts.push_back({x, 0.0, 0.0});
  pts.push_back({cfg.uav_position_m, 0.0, cfg.uav_height_m});
  return pts;
}

std::vector<ApInterval> nearest_ap_partition(const ScenarioConfig& cfg) {
  const auto pts = ap_positions(cfg);
  const int n = static_cast<int>(pts.size());
  const double len = cfg.highway_length_m;

  std::vector<ApInterval> out(n);
  for (int i = 0; i < n; ++i) {
    // AP i's region is the intersection over j of the half-lines where i is
    // at least as close as j (ties to the lower index). The squared-distance
    // difference is linear in x, so each constraint is one-sided.
    double lo = 0.0;
    double hi = len;
    bool empty = false;
    const double xi = pts[i].x;
    const double hi2 = pts[i].z * pts[i].z;
    for (int j = 0; j < n && !empty; ++j) {
      if (j == i) continue;
      const double xj = pts[j].x;
      const double hj2 = pts[j].z * pts[j].z;
      if (xi == xj) {
        // Distance difference is constant in x.
        if (hi2 < hj2) continue;
        if (hi2 == hj2 && i < j) continue;
        empty = true;
        continue;
      }
      const double boundary =
          (xj * xj + hj2 - xi * xi - hi2) / (2.0 * (xj - xi));
      if (xj > xi) {
        hi = std::min(hi, boundary);
      } else {
        lo = std::max(lo, boundary);
      }
    }
    if (empty || hi < lo) {
      const double p = std::clamp(xi, 0.0, len);
      out[i] = {p, p};
    } else {
      out[i] = {std::clamp(lo, 0.0, len), std::clamp(hi, 0.0, len)};
    }
  }
  return out;
}

int owner_ap(const std::vector<ApInterval>& partition, double x) {
  for (std::size_t i = 0; i < partition.size(); ++i) {
    const auto& iv = partition[i];
    if (iv.length() > 0.0 && x >= iv.lo && x <= iv.hi) {
      return static_cast<int>(i);
    }
  }
  throw std::invalid_argument("owner_ap: position outside every interval");
}

}  // namespace slice
