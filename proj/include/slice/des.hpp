#pragma once

#include <optional>
#include <vector>

#include "slice/rng.hpp"
#include "slice/scenario.hpp"
#include "slice/traffic_types.hpp"

namespace slice {

enum class ServiceModel { kExponential, kDeterministic };

// Lifecycle timestamps of one task through the two-stage slice.
struct TaskRecord {
  int ap = 0;
  double arrival_s = 0.0;
  double tx_start_s = 0.0;
  double tx_end_s = 0.0;
  double proc_start_s = 0.0;
  double proc_end_s = 0.0;

  double delay_s() const { return proc_end_s - arrival_s; }
};

struct ApWindowStats {
  long tasks_completed = 0;
  double mean_delay_s = 0.0;
  double satisfaction_rate = 1.0;  // vacuously 1 with no completed tasks
};

// Operation-phase monitor output for one planning window (Fig-4-style slice
// performance measurement).
struct WindowReport {
  long tasks_completed = 0;
  double mean_delay_s = 0.0;
  double satisfaction_rate = 1.0;
  std::vector<ApWindowStats> per_ap;
};

// One AP's tandem: Poisson arrivals -> single transmission server ->
// FIFO queue -> n_servers parallel processing servers. A non-positive
// mu_tx makes stage 1 a pass-through, which turns the engine into a plain
// M/M/c (or M/D/c) station simulator.
struct TandemSpec {
  double lambda = 0.0;
  double mu_tx = 0.0;
  int n_servers = 1;
  double mu_server = 1.0;
  ServiceModel model = ServiceModel::kExponential;
};

struct LongRunResult {
  bool stable = true;  // false when the queue cap was exceeded
  long tasks_completed = 0;
  double mean_delay_s = 0.0;
  double std_error_s = 0.0;
  double ci_half_width_s = 0.0;  // 95%, batch means
};

// Simulates until n_tasks complete, discards the first 10% as warm-up, and
// returns the mean delay with a batch-means confidence interval. A queue
// growing past queue_cap is reported as unstable, not thrown. lambda == 0
// degenerates to a single injected task.
LongRunResult simulate_tandem_long_run(const TandemSpec& spec, long n_tasks,
                                       SeededStream& stream,
                                       long queue_cap = 1000000);

// Event-driven simulation of one planning window under a fixed reservation.
// Tasks still in flight at window end are excluded from statistics. Optional
// records receive every completed task's timestamps.
WindowReport run_window(const ReservationDecision& decision,
                        const TrafficWindow& window, double duration_s,
                        const ScenarioConfig& cfg, SeededStream& stream,
                        ServiceModel model,
                        std::vector<TaskRecord>* records = nullptr);

// Oracle harness for one AP's reservation at a given arrival rate.
LongRunResult long_run_mean_delay(const ApReservation& reservation,
                                  double lambda, const ScenarioConfig& cfg,
                                  long n_tasks, SeededStream& stream,
                                  long queue_cap = 1000000);

// CSV dump of task records: ap,arrival,tx_start,tx_end,proc_start,proc_end,delay.
std::string task_records_to_csv(const std::vector<TaskRecord>& records);

}  // namespace slice
