#include "slice/cost.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "slice/queuing.hpp"

namespace slice {

namespace {

double ap_violation(const ReservationDecision& decision,
                    const TrafficWindow& window, int ap,
                    const ScenarioConfig& cfg, PenaltyMode mode) {
  const DelayEstimate est = slice_delay(decision, window, ap, cfg);
  const bool violated =
      !est.stable || est.bounded_delay(cfg) > cfg.delay_bound_s;
  if (mode == PenaltyMode::kProportional) {
    if (!est.stable) return 1.0;
    return std::max(0.0, (est.bounded_delay(cfg) - cfg.delay_bound_s) /
                             cfg.delay_bound_s);
  }
  return violated ? 1.0 : 0.0;
}

}  // namespace

double reservation_cost(const ReservationDecision& decision,
                        const ScenarioConfig& cfg) {
  decision.validate(cfg);
  double c = 0.0;
  for (const auto& r : decision.per_ap) {
    c += r.n_subcarriers * cfg.unit_price_subcarrier +
         r.n_vms * cfg.unit_price_vm;
  }
  return c;
}

double reconfiguration_cost(const ReservationDecision& prev,
                            const ReservationDecision& curr) {
  if (prev.per_ap.size() != curr.per_ap.size()) {
    throw std::invalid_argument("reconfiguration_cost: AP count mismatch");
  }
  double c = 0.0;
  for (std::size_t i = 0; i < prev.per_ap.size(); ++i) {
    c += std::abs(curr.per_ap[i].n_subcarriers - prev.per_ap[i].n_subcarriers);
    c += std::abs(curr.per_ap[i].n_vms - prev.per_ap[i].n_vms);
  }
  return c;
}

double violation_penalty(const ReservationDecision& decision,
                         const TrafficWindow& window,
                         const ScenarioConfig& cfg, PenaltyMode mode) {
  decision.validate(cfg);
  const int n_ap = cfg.ap_count();
  double total = 0.0;
  bool any = false;
  for (int ap = 0; ap < n_ap; ++ap) {
    const double v = ap_violation(decision, window, ap, cfg, mode);
    total += v;
    any = any || v > 0.0;
  }
  if (mode == PenaltyMode::kPerWindow) return any ? 1.0 : 0.0;
  return total;
}

ApCostBreakdown ap_cost_breakdown(const ReservationDecision& prev,
                                  const ReservationDecision& curr,
                                  const TrafficWindow& window, int ap,
                                  const ScenarioConfig& cfg,
                                  PenaltyMode mode) {
  ApCostBreakdown out;
  const auto& p = prev.per_ap.at(ap);
  const auto& c = curr.per_ap.at(ap);
  out.c_r = c.n_subcarriers * cfg.unit_price_subcarrier +
            c.n_vms * cfg.unit_price_vm;
  out.c_s = std::abs(c.n_subcarriers - p.n_subcarriers) +
            std::abs(c.n_vms - p.n_vms);
  out.c_d = ap_violation(curr, window, ap, cfg, mode);
  return out;
}

WindowCostBreakdown window_cost(const ReservationDecision& prev,
                                const ReservationDecision& curr,
                                const TrafficWindow& window,
                                const CostWeights& weights,
                                const ScenarioConfig& cfg, PenaltyMode mode) {
  WindowCostBreakdown out;
  out.c_r = reservation_cost(curr, cfg);
  out.c_s = reconfiguration_cost(prev, curr);
  out.c_d = violation_penalty(curr, window, cfg, mode);
  out.weighted_total = weighted_total_of(out.c_r, out.c_s, out.c_d, weights);
  return out;
}

}  // namespace slice
