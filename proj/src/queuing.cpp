#include "slice/queuing.hpp"

#include <limits>
#include <stdexcept>

namespace slice {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

DelayEstimate unstable_estimate() {
  return DelayEstimate{kInf, kInf, kInf, false};
}
}  // namespace

double tx_service_rate(int n_subcarriers, const ScenarioConfig& cfg) {
  if (n_subcarriers < 1) {
    throw std::invalid_argument("tx_service_rate: n_subcarriers must be >= 1");
  }
  return n_subcarriers * cfg.subcarrier_bw_hz *
         cfg.spectral_efficiency_bps_per_hz / cfg.task_size_bits;
}

double vm_service_rate(const ScenarioConfig& cfg) {
  return cfg.vm_rate_cps / cfg.task_cycles;
}

double erlang_c(double a, int c) {
  if (c < 1) throw std::invalid_argument("erlang_c: c must be >= 1");
  if (a < 0.0) throw std::invalid_argument("erlang_c: a must be >= 0");
  if (a >= static_cast<double>(c)) {
    throw std::invalid_argument("erlang_c: requires a < c");
  }
  if (a == 0.0) return 0.0;
  // Erlang-B recurrence B(k) = a B(k-1) / (k + a B(k-1)); no factorials.
  double b = 1.0;
  for (int k = 1; k <= c; ++k) {
    b = a * b / (k + a * b);
  }
  const double rho = a / c;
  return b / (1.0 - rho * (1.0 - b));
}

DelayEstimate mm1_sojourn(double lambda, double mu) {
  if (lambda < 0.0) throw std::invalid_argument("mm1_sojourn: lambda < 0");
  if (mu <= 0.0) throw std::invalid_argument("mm1_sojourn: mu must be > 0");
  if (lambda >= mu) return unstable_estimate();
  const double w = 1.0 / (mu - lambda);
  return DelayEstimate{w, 0.0, w, true};
}

DelayEstimate mmc_sojourn(double lambda, double mu_per_server, int c) {
  if (lambda < 0.0) throw std::invalid_argument("mmc_sojourn: lambda < 0");
  if (mu_per_server <= 0.0) {
    throw std::invalid_argument("mmc_sojourn: mu must be > 0");
  }
  if (c < 1) throw std::invalid_argument("mmc_sojourn: c must be >= 1");
  if (lambda >= c * mu_per_server) return unstable_estimate();
  const double a = lambda / mu_per_server;
  const double wq = erlang_c(a, c) / (c * mu_per_server - lambda);
  const double w = 1.0 / mu_per_server + wq;
  return DelayEstimate{0.0, w, w, true};
}

DelayEstimate slice_delay(const ReservationDecision& decision,
                          const TrafficWindow& window, int ap,
                          const ScenarioConfig& cfg) {
  if (ap < 0 || ap >= static_cast<int>(decision.per_ap.size()) ||
      ap >= static_cast<int>(window.lambda_per_ap.size())) {
    throw std::invalid_argument("slice_delay: ap index out of range");
  }
  const double lambda = window.lambda_per_ap[ap];
  const auto& res = decision.per_ap[ap];

  const DelayEstimate tx =
      mm1_sojourn(lambda, tx_service_rate(res.n_subcarriers, cfg));
  const DelayEstimate proc =
      mmc_sojourn(lambda, vm_service_rate(cfg), res.n_vms);
  if (!tx.stable || !proc.stable) return unstable_estimate();

  // Stage-1 departures are Poisson, so the stage sums are exact.
  DelayEstimate out;
  out.w_tx_s = tx.w_total_s;
  out.w_proc_s = proc.w_total_s;
  out.w_total_s = tx.w_total_s + proc.w_total_s;
  out.stable = true;
  return out;
}

}  // namespace slice
